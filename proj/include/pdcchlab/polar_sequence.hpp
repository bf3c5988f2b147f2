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

#ifndef PDCCHLAB_POLAR_SEQUENCE_HPP
#define PDCCHLAB_POLAR_SEQUENCE_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "common.hpp"

namespace pdcchlab
{

// Universal bit-channel reliability ordering from the polarization-weight
// beta-expansion, beta = 2^(1/4): W(i) = sum_k b_k(i) * beta^k. The ordering
// is channel-independent and nested: the order for N' < N is the restriction
// of the order for N to indices below N'. Distinct indices never tie (the
// weight determines the grouped base-2 digits of each beta power uniquely).
inline std::vector<uint16_t> reliability_order(size_t n)
{
    require(n >= 1 && n <= 10, "reliability_order: n out of range");
    const size_t N = size_t(1) << n;
    const double beta = std::pow(2.0, 0.25);
    std::vector<double> w(N, 0.0);
    for (size_t i = 0; i < N; ++i)
        for (size_t k = 0; k < n; ++k)
            if ((i >> k) & 1u)
                w[i] += std::pow(beta, static_cast<double>(k));

    // Ascending weight = ascending reliability; index 0 of the result is the
    // least reliable bit channel.
    std::vector<uint16_t> order(N);
    std::iota(order.begin(), order.end(), uint16_t(0));
    std::stable_sort(order.begin(), order.end(),
                     [&](uint16_t a, uint16_t b) { return w[a] < w[b]; });
    return order;
}

} // namespace pdcchlab

#endif
