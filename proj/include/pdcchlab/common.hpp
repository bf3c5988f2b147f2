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

#ifndef PDCCHLAB_COMMON_HPP
#define PDCCHLAB_COMMON_HPP

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace pdcchlab
{

using BitVec = std::vector<uint8_t>; // one bit per element, values 0 or 1
using cdouble = std::complex<double>;
using cvec = std::vector<cdouble>;

// Soft values are LLRs of bit = 0, saturated to +/- kLlrMax everywhere.
constexpr double kLlrMax = 60.0;

constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kInvSqrt2 = 0.70710678118654752440084436210485;

// Propagation speed used for Doppler <-> vehicle speed conversion.
constexpr double kSpeedOfLight = 2.998e8;

inline double db_to_lin(double db) { return std::pow(10.0, db / 10.0); }
inline double lin_to_db(double lin) { return 10.0 * std::log10(lin); }

inline double saturate_llr(double llr)
{
    if (llr > kLlrMax)
        return kLlrMax;
    if (llr < -kLlrMax)
        return -kLlrMax;
    return llr;
}

inline size_t hamming_distance(const BitVec &a, const BitVec &b)
{
    if (a.size() != b.size())
        throw std::invalid_argument("hamming_distance: size mismatch");
    size_t d = 0;
    for (size_t i = 0; i < a.size(); ++i)
        d += (a[i] ^ b[i]) & 1u;
    return d;
}

inline void require(bool cond, const std::string &msg)
{
    if (!cond)
        throw std::invalid_argument(msg);
}

} // namespace pdcchlab

#endif
