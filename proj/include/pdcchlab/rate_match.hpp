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

#ifndef PDCCHLAB_RATE_MATCH_HPP
#define PDCCHLAB_RATE_MATCH_HPP

#include <array>
#include <cstdint>
#include <vector>

#include "common.hpp"

namespace pdcchlab
{

enum class RateMatchMode
{
    repetition, // E >= N
    puncturing, // E < N and K/E <= 7/16
    shortening  // E < N and K/E > 7/16
};

// Sub-block interleaver pattern over 32 equal blocks of the mother codeword.
constexpr std::array<uint8_t, 32> kSubBlockPerm = {
    0, 1, 2, 4, 3, 5, 6, 7, 8, 16, 9, 17, 10, 18, 11, 19,
    12, 20, 13, 21, 14, 22, 15, 23, 24, 25, 26, 28, 27, 29, 30, 31};

// y[m] = d[J(m)] with J(m) = P(floor(32m/N)) * N/32 + m mod N/32. N >= 32.
inline std::vector<uint32_t> subblock_interleave_map(size_t N)
{
    require(N >= 32 && (N & (N - 1)) == 0, "subblock_interleave_map: N must be a power of two >= 32");
    const size_t B = N / 32;
    std::vector<uint32_t> J(N);
    for (size_t m = 0; m < N; ++m)
        J[m] = static_cast<uint32_t>(kSubBlockPerm[m / B] * B + m % B);
    return J;
}

// Triangular channel interleaver: smallest T with T(T+1)/2 >= E, row-wise
// fill (row r holds T-r cells), column-wise read, skipping the unfilled tail.
// Returns the map t with out[j] = in[t[j]].
inline std::vector<uint32_t> triangular_interleave_map(size_t E)
{
    require(E >= 1, "triangular_interleave_map: E must be positive");
    size_t T = 1;
    while (T * (T + 1) / 2 < E)
        ++T;
    std::vector<uint32_t> t;
    t.reserve(E);
    for (size_t c = 0; c < T; ++c)
        for (size_t r = 0; r + c < T; ++r)
        {
            const size_t fill = r * T - r * (r - 1) / 2 + c;
            if (fill < E)
                t.push_back(static_cast<uint32_t>(fill));
        }
    return t;
}

// Precomputed mapping between the mother codeword d[N] and the transmitted
// block e[E]. sel[k] is the mother index feeding bit k of the circular-buffer
// output; tri composes the channel interleaver on top.
struct RateMatchPlan
{
    size_t N = 0;
    size_t E = 0;
    RateMatchMode mode = RateMatchMode::repetition;
    std::vector<uint32_t> jmap; // sub-block interleaver J
    std::vector<uint32_t> sel;  // circular-buffer selection, size E
    std::vector<uint32_t> tri;  // triangular interleaver, size E
};

inline RateMatchMode rate_match_mode(size_t K, size_t E, size_t N)
{
    if (E >= N)
        return RateMatchMode::repetition;
    if (16 * K <= 7 * E)
        return RateMatchMode::puncturing;
    return RateMatchMode::shortening;
}

inline RateMatchPlan build_rate_match_plan(size_t K, size_t E, size_t N)
{
    require(E >= 1, "build_rate_match_plan: E must be positive");
    RateMatchPlan p;
    p.N = N;
    p.E = E;
    p.mode = rate_match_mode(K, E, N);
    p.jmap = subblock_interleave_map(N);
    p.sel.resize(E);
    for (size_t k = 0; k < E; ++k)
    {
        size_t m = 0;
        switch (p.mode)
        {
        case RateMatchMode::repetition: m = k % N; break;
        case RateMatchMode::puncturing: m = k + (N - E); break;
        case RateMatchMode::shortening: m = k; break;
        }
        p.sel[k] = p.jmap[m];
    }
    p.tri = triangular_interleave_map(E);
    return p;
}

// d[N] coded bits -> e[E] transmitted bits.
inline BitVec rate_match(const RateMatchPlan &p, const BitVec &d)
{
    require(d.size() == p.N, "rate_match: coded block size mismatch");
    BitVec out(p.E);
    for (size_t j = 0; j < p.E; ++j)
        out[j] = d[p.sel[p.tri[j]]];
    return out;
}

// Received LLRs over e[E] -> mother LLRs over d[N]. Punctured positions stay
// at 0 (erasure), shortened positions are pinned to +kLlrMax (known zero),
// repeated positions accumulate. The result is saturated to +/- kLlrMax.
inline std::vector<double> rate_recover(const RateMatchPlan &p, const std::vector<double> &llr)
{
    require(llr.size() == p.E, "rate_recover: LLR block size mismatch");
    std::vector<double> m(p.N, 0.0);
    if (p.mode == RateMatchMode::shortening)
        for (size_t k = p.E; k < p.N; ++k)
            m[p.jmap[k]] = kLlrMax;
    for (size_t j = 0; j < p.E; ++j)
        m[p.sel[p.tri[j]]] += llr[j];
    for (double &v : m)
        v = saturate_llr(v);
    return m;
}

} // namespace pdcchlab

#endif
