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

#ifndef PDCCHLAB_SCL_DECODER_HPP
#define PDCCHLAB_SCL_DECODER_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "common.hpp"
#include "crc24c.hpp"
#include "polar.hpp"

namespace pdcchlab
{

// CRC-aided successive cancellation list decoder, LLR domain with min-sum
// updates and path metrics. Per-layer LLR/partial-sum arrays are shared
// between paths and copied on write, so a decode costs O(L N log N) instead
// of the O(L N^2) a naive per-path copy would.
class SclDecoder
{
  public:
    struct Result
    {
        bool crc_ok = false;
        BitVec k_bits; // CRC-selected payload, or the best-metric guess on failure
    };

    SclDecoder(const PolarPlan &plan, size_t list_size)
        : plan_(plan), n_(plan.n), N_(plan.N), L_(list_size)
    {
        require(list_size >= 1 && list_size <= 64 && (list_size & (list_size - 1)) == 0,
                "SclDecoder: list size must be a power of two in [1, 64]");
        p_.resize(n_ + 1);
        c_.resize(n_ + 1);
        path_to_array_.assign(n_ + 1, std::vector<uint16_t>(L_, 0));
        ref_count_.assign(n_ + 1, std::vector<uint16_t>(L_, 0));
        free_arrays_.assign(n_ + 1, {});
        for (size_t lam = 0; lam <= n_; ++lam)
        {
            const size_t sz = layer_size(lam);
            p_[lam].assign(L_, std::vector<double>(sz, 0.0));
            c_[lam].assign(L_, std::vector<uint8_t>(2 * sz, 0));
        }
        metric_.assign(L_, 0.0);
        active_.assign(L_, 0);
        uhist_.assign(L_, BitVec(N_, 0));
    }

    Result decode(const std::vector<double> &mother_llr)
    {
        require(mother_llr.size() == N_, "SclDecoder::decode: LLR size mismatch");
        reset();

        const size_t l0 = alloc_path();
        for (size_t lam = 0; lam <= n_; ++lam)
        {
            const uint16_t s = alloc_array(lam);
            path_to_array_[lam][l0] = s;
            ref_count_[lam][s] = 1;
        }
        p_[0][path_to_array_[0][l0]] = mother_llr;

        for (size_t phi = 0; phi < N_; ++phi)
        {
            calc_p(n_, phi);
            if (plan_.frozen[phi])
                continue_frozen(phi);
            else
                continue_info(phi);
            if (phi & 1u)
                update_c(n_, phi);
        }

        // CRC selection over paths in metric order.
        std::vector<size_t> order;
        for (size_t l = 0; l < L_; ++l)
            if (active_[l])
                order.push_back(l);
        std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
            return metric_[a] != metric_[b] ? metric_[a] < metric_[b] : a < b;
        });

        Result res;
        for (size_t l : order)
        {
            BitVec k(plan_.K);
            for (size_t i = 0; i < plan_.K; ++i)
                k[i] = uhist_[l][plan_.info_pos[i]];
            if (check_crc(k))
            {
                res.crc_ok = true;
                res.k_bits = std::move(k);
                return res;
            }
            if (res.k_bits.empty())
                res.k_bits = std::move(k);
        }
        return res;
    }

  private:
    size_t layer_size(size_t lam) const { return size_t(1) << (n_ - lam); }

    void reset()
    {
        for (size_t lam = 0; lam <= n_; ++lam)
        {
            free_arrays_[lam].clear();
            for (size_t s = L_; s-- > 0;)
            {
                ref_count_[lam][s] = 0;
                free_arrays_[lam].push_back(static_cast<uint16_t>(s));
            }
        }
        free_paths_.clear();
        for (size_t l = L_; l-- > 0;)
            free_paths_.push_back(static_cast<uint16_t>(l));
        std::fill(active_.begin(), active_.end(), uint8_t(0));
        std::fill(metric_.begin(), metric_.end(), 0.0);
    }

    size_t alloc_path()
    {
        const uint16_t l = free_paths_.back();
        free_paths_.pop_back();
        active_[l] = 1;
        return l;
    }

    uint16_t alloc_array(size_t lam)
    {
        const uint16_t s = free_arrays_[lam].back();
        free_arrays_[lam].pop_back();
        return s;
    }

    void kill_path(size_t l)
    {
        active_[l] = 0;
        free_paths_.push_back(static_cast<uint16_t>(l));
        for (size_t lam = 0; lam <= n_; ++lam)
        {
            const uint16_t s = path_to_array_[lam][l];
            if (--ref_count_[lam][s] == 0)
                free_arrays_[lam].push_back(s);
        }
    }

    size_t clone_path(size_t src)
    {
        const size_t l = alloc_path();
        metric_[l] = metric_[src];
        uhist_[l] = uhist_[src];
        for (size_t lam = 0; lam <= n_; ++lam)
        {
            const uint16_t s = path_to_array_[lam][src];
            path_to_array_[lam][l] = s;
            ++ref_count_[lam][s];
        }
        return l;
    }

    // Copy-on-write access to the (P, C) array pair of a path at one layer.
    uint16_t writable_array(size_t lam, size_t l)
    {
        const uint16_t s = path_to_array_[lam][l];
        if (ref_count_[lam][s] == 1)
            return s;
        const uint16_t s2 = alloc_array(lam);
        p_[lam][s2] = p_[lam][s];
        c_[lam][s2] = c_[lam][s];
        --ref_count_[lam][s];
        ref_count_[lam][s2] = 1;
        path_to_array_[lam][l] = s2;
        return s2;
    }

    static double f_minsum(double a, double b)
    {
        const double m = std::min(std::abs(a), std::abs(b));
        return ((a < 0) != (b < 0)) ? -m : m;
    }

    void calc_p(size_t lam, size_t phi)
    {
        if (lam == 0)
            return;
        if ((phi & 1u) == 0)
            calc_p(lam - 1, phi >> 1);
        const size_t sz = layer_size(lam);
        for (size_t l = 0; l < L_; ++l)
        {
            if (!active_[l])
                continue;
            const uint16_t s = writable_array(lam, l);
            double *pl = p_[lam][s].data();
            const double *pu = p_[lam - 1][path_to_array_[lam - 1][l]].data();
            const uint8_t *cl = c_[lam][s].data();
            if ((phi & 1u) == 0)
                for (size_t b = 0; b < sz; ++b)
                    pl[b] = f_minsum(pu[b], pu[b + sz]);
            else
                for (size_t b = 0; b < sz; ++b)
                    pl[b] = cl[b] ? pu[b + sz] - pu[b] : pu[b + sz] + pu[b];
        }
    }

    void update_c(size_t lam, size_t phi)
    {
        const size_t psi = phi >> 1;
        const size_t sz = layer_size(lam);
        if (lam >= 2) // layer 0 partial sums are never read back
        {
            for (size_t l = 0; l < L_; ++l)
            {
                if (!active_[l])
                    continue;
                const uint8_t *cl = c_[lam][path_to_array_[lam][l]].data();
                uint8_t *cu = c_[lam - 1][writable_array(lam - 1, l)].data();
                uint8_t *dst = cu + (psi & 1u) * 2 * sz;
                for (size_t b = 0; b < sz; ++b)
                {
                    dst[b] = cl[b] ^ cl[b + sz];
                    dst[b + sz] = cl[b + sz];
                }
            }
        }
        if (psi & 1u)
            update_c(lam - 1, psi);
    }

    void continue_frozen(size_t phi)
    {
        for (size_t l = 0; l < L_; ++l)
        {
            if (!active_[l])
                continue;
            const uint16_t s = writable_array(n_, l);
            const double llr = p_[n_][s][0];
            if (llr < 0)
                metric_[l] -= llr;
            c_[n_][s][phi & 1u] = 0;
            uhist_[l][phi] = 0;
        }
    }

    void continue_info(size_t phi)
    {
        struct Cand
        {
            double pm;
            uint16_t path;
            uint8_t bit;
        };
        std::vector<Cand> cand;
        cand.reserve(2 * L_);
        for (size_t l = 0; l < L_; ++l)
        {
            if (!active_[l])
                continue;
            const double llr = p_[n_][path_to_array_[n_][l]][0];
            cand.push_back({metric_[l] + (llr < 0 ? -llr : 0.0), static_cast<uint16_t>(l), 0});
            cand.push_back({metric_[l] + (llr > 0 ? llr : 0.0), static_cast<uint16_t>(l), 1});
        }
        // Full sort with a total order keeps survivor choice deterministic
        // under metric ties.
        std::sort(cand.begin(), cand.end(), [](const Cand &a, const Cand &b) {
            if (a.pm != b.pm)
                return a.pm < b.pm;
            if (a.path != b.path)
                return a.path < b.path;
            return a.bit < b.bit;
        });
        const size_t keep = std::min(L_, cand.size());

        std::vector<uint8_t> sel0(L_, 0), sel1(L_, 0);
        for (size_t i = 0; i < keep; ++i)
            (cand[i].bit ? sel1 : sel0)[cand[i].path] = 1;

        for (size_t l = 0; l < L_; ++l)
            if (active_[l] && !sel0[l] && !sel1[l])
                kill_path(l);

        std::vector<std::pair<size_t, uint8_t>> assign;
        for (size_t l = 0; l < L_; ++l)
        {
            if (!sel0[l] && !sel1[l])
                continue;
            if (sel0[l] && sel1[l])
            {
                const size_t l2 = clone_path(l);
                assign.push_back({l, 0});
                assign.push_back({l2, 1});
            }
            else
                assign.push_back({l, sel0[l] ? 0 : 1});
        }
        for (auto [l, bit] : assign)
        {
            const uint16_t s = writable_array(n_, l);
            const double llr = p_[n_][s][0];
            if (bit ? (llr > 0) : (llr < 0))
                metric_[l] += std::abs(llr);
            c_[n_][s][phi & 1u] = bit;
            uhist_[l][phi] = bit;
        }
    }

    const PolarPlan &plan_;
    size_t n_, N_, L_;
    // p_[lam][s], c_[lam][s]: array pool per layer; C holds two planes of
    // layer-sized partial sums (left child codeword, right child codeword).
    std::vector<std::vector<std::vector<double>>> p_;
    std::vector<std::vector<std::vector<uint8_t>>> c_;
    std::vector<std::vector<uint16_t>> path_to_array_;
    std::vector<std::vector<uint16_t>> ref_count_;
    std::vector<std::vector<uint16_t>> free_arrays_;
    std::vector<uint16_t> free_paths_;
    std::vector<double> metric_;
    std::vector<uint8_t> active_;
    std::vector<BitVec> uhist_;
};

} // namespace pdcchlab

#endif
