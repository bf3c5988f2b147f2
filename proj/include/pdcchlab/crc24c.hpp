// SPDX-License-Identifier: Apache-2.0
//
// pdcchlab - link-level simulation toolkit for the 5G NR downlink control channel
// Copyright (C) 2026 pdcchlab developers
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PDCCHLAB_CRC24C_HPP
#define PDCCHLAB_CRC24C_HPP

#include <cstdint>

#include "common.hpp"

namespace pdcchlab
{

// CRC24C generator polynomial, low 24 coefficients of
// x^24 + x^23 + x^21 + x^20 + x^17 + x^15 + x^13 + x^12 + x^8 + x^4 + x^2 + x + 1.
constexpr uint32_t kCrc24cPoly = 0xB2B117u;
constexpr size_t kCrcBits = 24;

// Computes the 24 parity bits over `bits`, MSB-first, shift register
// initialized to all ones. No RNTI masking is applied to control payloads.
inline uint32_t crc24c(const BitVec &bits)
{
    uint32_t reg = 0xFFFFFFu;
    for (uint8_t b : bits)
    {
        const uint32_t fb = (reg >> 23) ^ (b & 1u);
        reg = (reg << 1) & 0xFFFFFFu;
        if (fb)
            reg ^= kCrc24cPoly;
    }
    return reg;
}

// payload -> payload || parity, parity MSB first.
inline BitVec attach_crc(const BitVec &payload)
{
    require(!payload.empty(), "attach_crc: empty payload");
    BitVec out = payload;
    const uint32_t p = crc24c(payload);
    for (size_t i = 0; i < kCrcBits; ++i)
        out.push_back(static_cast<uint8_t>((p >> (23 - i)) & 1u));
    return out;
}

// Checks a payload||parity block; `bits` must hold at least 25 bits.
inline bool check_crc(const BitVec &bits)
{
    require(bits.size() > kCrcBits, "check_crc: block too short");
    const BitVec payload(bits.begin(), bits.end() - static_cast<long>(kCrcBits));
    const uint32_t p = crc24c(payload);
    for (size_t i = 0; i < kCrcBits; ++i)
        if (bits[bits.size() - kCrcBits + i] != ((p >> (23 - i)) & 1u))
            return false;
    return true;
}

} // namespace pdcchlab

#endif
