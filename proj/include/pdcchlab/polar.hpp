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

#ifndef PDCCHLAB_POLAR_HPP
#define PDCCHLAB_POLAR_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "common.hpp"
#include "polar_sequence.hpp"
#include "rate_match.hpp"

namespace pdcchlab
{

constexpr size_t kPolarNMin = 5; // N = 32
constexpr size_t kPolarNMax = 9; // N = 512

// Mother code dimension rule: back off one power of two when the code would
// otherwise be punctured by more than it is worth (E just above a power of
// two at low rate), clamped to [2^5, 2^9] and to rate >= 1/8.
inline size_t mother_code_exponent(size_t K, size_t E)
{
    require(K >= 1 && E > K, "mother_code_exponent: need E > K >= 1");
    size_t cl = 1;
    while ((size_t(1) << cl) < E)
        ++cl;
    size_t n1 = cl;
    if (E <= 9 * (size_t(1) << (cl - 1)) / 8 && 16 * K < 9 * E)
        n1 = cl - 1;
    size_t n2 = 1;
    while ((size_t(1) << n2) < 8 * K)
        ++n2;
    size_t n = std::min(std::min(n1, n2), kPolarNMax);
    return std::max(n, kPolarNMin);
}

// Frozen/info split plus rate-matching plan for one (K, E) code.
struct PolarPlan
{
    size_t n = 0;
    size_t N = 0;
    size_t K = 0;
    size_t E = 0;
    std::vector<uint8_t> frozen;    // size N, 1 = frozen
    std::vector<uint16_t> info_pos; // size K, ascending
    RateMatchPlan rm;
};

inline PolarPlan build_polar_plan(size_t K, size_t E)
{
    require(K >= 12, "build_polar_plan: K below minimum");
    const size_t n = mother_code_exponent(K, E);
    const size_t N = size_t(1) << n;
    require(K <= N, "build_polar_plan: K exceeds mother code size");

    PolarPlan p;
    p.n = n;
    p.N = N;
    p.K = K;
    p.E = E;
    p.rm = build_rate_match_plan(K, E, N);

    // Bit channels disabled by rate matching are frozen before the
    // reliability-based selection.
    std::vector<uint8_t> prefrozen(N, 0);
    if (p.rm.mode == RateMatchMode::puncturing)
    {
        const size_t U = N - E;
        for (size_t m = 0; m < U; ++m)
            prefrozen[p.rm.jmap[m]] = 1;
        // Heavily punctured codes additionally freeze a low-index prefix.
        size_t T;
        if (4 * E >= 3 * N)
            T = static_cast<size_t>(std::ceil(3.0 * N / 4.0 - E / 2.0));
        else
            T = static_cast<size_t>(std::ceil(9.0 * N / 16.0 - E / 4.0));
        for (size_t i = 0; i < T && i < N; ++i)
            prefrozen[i] = 1;
    }
    else if (p.rm.mode == RateMatchMode::shortening)
    {
        for (size_t m = E; m < N; ++m)
            prefrozen[p.rm.jmap[m]] = 1;
    }

    size_t usable = 0;
    for (size_t i = 0; i < N; ++i)
        usable += prefrozen[i] ? 0 : 1;
    require(K <= usable, "build_polar_plan: rate matching leaves too few bit channels");

    // Info set: the K most reliable channels outside the pre-frozen set.
    const std::vector<uint16_t> order = reliability_order(n);
    p.frozen.assign(N, 1);
    p.info_pos.clear();
    p.info_pos.reserve(K);
    for (size_t r = N; r-- > 0 && p.info_pos.size() < K;)
    {
        const uint16_t idx = order[r];
        if (!prefrozen[idx])
        {
            p.frozen[idx] = 0;
            p.info_pos.push_back(idx);
        }
    }
    std::sort(p.info_pos.begin(), p.info_pos.end());
    return p;
}

// u[N] -> d[N] = u * F^{(x)n} in natural bit order, in place butterflies.
inline BitVec polar_transform(BitVec u)
{
    const size_t N = u.size();
    require(N >= 2 && (N & (N - 1)) == 0, "polar_transform: size must be a power of two");
    for (size_t h = 1; h < N; h <<= 1)
        for (size_t base = 0; base < N; base += 2 * h)
            for (size_t i = 0; i < h; ++i)
                u[base + i] ^= u[base + i + h];
    return u;
}

// K payload bits (info + CRC) -> N mother coded bits.
inline BitVec polar_encode_mother(const PolarPlan &p, const BitVec &k_bits)
{
    require(k_bits.size() == p.K, "polar_encode_mother: payload size mismatch");
    BitVec u(p.N, 0);
    for (size_t i = 0; i < p.K; ++i)
        u[p.info_pos[i]] = k_bits[i] & 1u;
    return polar_transform(std::move(u));
}

// K payload bits -> E rate-matched coded bits.
inline BitVec polar_encode(const PolarPlan &p, const BitVec &k_bits)
{
    return rate_match(p.rm, polar_encode_mother(p, k_bits));
}

} // namespace pdcchlab

#endif
