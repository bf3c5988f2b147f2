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

#ifndef PDCCHLAB_CORESET_HPP
#define PDCCHLAB_CORESET_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "common.hpp"
#include "qpsk.hpp"
#include "rng.hpp"

namespace pdcchlab
{

// DMRS occupies subcarriers {1, 5, 9} of every resource block on every
// symbol (density 1/4 in frequency, 1 in time); the other 9 REs of a REG
// carry data. A candidate of aggregation level L spans 6L REGs.
constexpr size_t kDmrsOffsets[3] = {1, 5, 9};
constexpr size_t kPilotSpacing = 4; // D_x
constexpr size_t kRePerRb = 12;
constexpr size_t kDataRePerReg = 9;
constexpr size_t kRegsPerCce = 6;

struct CoresetConfig
{
    size_t n_rb = 12;
    size_t n_sym = 1;
    size_t aggregation_level = 2;

    void validate() const
    {
        require(n_rb >= 1 && n_rb <= 24, "CoresetConfig: n_rb must be in [1, 24]");
        require(n_sym >= 1 && n_sym <= 3, "CoresetConfig: n_sym must be in [1, 3]");
        const size_t L = aggregation_level;
        require(L == 1 || L == 2 || L == 4 || L == 8 || L == 16,
                "CoresetConfig: aggregation level must be in {1, 2, 4, 8, 16}");
        require(n_rb * n_sym >= kRegsPerCce * L,
                "CoresetConfig: CORESET too small for the aggregation level");
    }

    size_t n_occupied() const { return kRePerRb * n_rb; }
    size_t n_regs() const { return n_rb * n_sym; }
    size_t candidate_regs() const { return kRegsPerCce * aggregation_level; }
    // Two coded bits per data RE.
    size_t coded_bits() const { return 2 * kDataRePerReg * candidate_regs(); }
    size_t n_pilots_per_symbol() const { return 3 * n_rb; }
};

enum class ReRole : uint8_t
{
    unused = 0,
    data = 1,
    dmrs = 2
};

// One CORESET worth of frequency-domain resource elements, column per OFDM
// symbol, with the data fill order recorded so mapping and demapping agree.
struct ResourceGrid
{
    size_t width = 0;
    size_t n_sym = 0;
    cvec re;                  // width * n_sym, column-major
    std::vector<ReRole> role; // same layout
    std::vector<std::pair<uint16_t, uint16_t>> data_pos;  // (q, s), fill order
    std::vector<std::pair<uint16_t, uint16_t>> pilot_pos; // (q, s), fill order

    cdouble &at(size_t q, size_t s) { return re[s * width + q]; }
    const cdouble &at(size_t q, size_t s) const { return re[s * width + q]; }
    ReRole role_at(size_t q, size_t s) const { return role[s * width + q]; }
};

// Lays out DMRS over the full CORESET and the candidate's coded symbols over
// the first 6L REGs. REGs are numbered symbol-major (REG j sits on symbol
// j / n_rb, resource block j % n_rb), data REs fill frequency-first inside
// each REG. DMRS symbols are QPSK from a seeded generator.
inline ResourceGrid build_grid(const CoresetConfig &cs, const cvec &data_symbols,
                               uint64_t dmrs_seed)
{
    cs.validate();
    require(data_symbols.size() == cs.coded_bits() / 2, "build_grid: data symbol count mismatch");

    ResourceGrid g;
    g.width = cs.n_occupied();
    g.n_sym = cs.n_sym;
    g.re.assign(g.width * g.n_sym, cdouble(0.0, 0.0));
    g.role.assign(g.width * g.n_sym, ReRole::unused);

    Rng rng(derive_seed(dmrs_seed, {0x444D5253ull}));
    for (size_t s = 0; s < cs.n_sym; ++s)
        for (size_t rb = 0; rb < cs.n_rb; ++rb)
            for (size_t off : kDmrsOffsets)
            {
                const size_t q = rb * kRePerRb + off;
                g.at(q, s) = qpsk_symbol(rng.bit(), rng.bit());
                g.role[s * g.width + q] = ReRole::dmrs;
                g.pilot_pos.push_back({static_cast<uint16_t>(q), static_cast<uint16_t>(s)});
            }

    size_t di = 0;
    for (size_t j = 0; j < cs.candidate_regs(); ++j)
    {
        const size_t s = j / cs.n_rb;
        const size_t rb = j % cs.n_rb;
        for (size_t k = 0; k < kRePerRb; ++k)
        {
            const size_t q = rb * kRePerRb + k;
            if (g.role_at(q, s) == ReRole::dmrs)
                continue;
            g.at(q, s) = data_symbols[di++];
            g.role[s * g.width + q] = ReRole::data;
            g.data_pos.push_back({static_cast<uint16_t>(q), static_cast<uint16_t>(s)});
        }
    }
    return g;
}

// Pilot subcarrier index p -> absolute subcarrier 1 + 4p (uniform lattice).
inline size_t pilot_subcarrier(size_t p) { return 1 + kPilotSpacing * p; }

} // namespace pdcchlab

#endif
