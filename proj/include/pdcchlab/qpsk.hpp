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

#ifndef PDCCHLAB_QPSK_HPP
#define PDCCHLAB_QPSK_HPP

#include <cmath>
#include <vector>

#include "common.hpp"

namespace pdcchlab
{

// Gray-mapped QPSK: bit 0 selects the real sign, bit 1 the imaginary sign,
// (0,0) -> (+1+j)/sqrt(2). Unit average symbol energy.
inline cdouble qpsk_symbol(uint8_t b0, uint8_t b1)
{
    return cdouble((b0 & 1u) ? -kInvSqrt2 : kInvSqrt2,
                   (b1 & 1u) ? -kInvSqrt2 : kInvSqrt2);
}

inline cvec qpsk_map(const BitVec &bits)
{
    require(bits.size() % 2 == 0, "qpsk_map: bit count must be even");
    cvec s(bits.size() / 2);
    for (size_t i = 0; i < s.size(); ++i)
        s[i] = qpsk_symbol(bits[2 * i], bits[2 * i + 1]);
    return s;
}

// Max-log LLRs of one received symbol given the channel gain estimate and
// the complex noise variance. Gray QPSK splits into two independent BPSK
// decisions on the matched-filter output; the |h|^2 factor cancels exactly,
// so no division by the gain is performed. h = 0 yields zero LLRs.
inline void qpsk_llr(cdouble y, cdouble h, double sigma2, double &l0, double &l1)
{
    require(sigma2 > 0.0, "qpsk_llr: noise variance must be positive");
    const cdouble z = y * std::conj(h);
    const double c = 2.0 * std::sqrt(2.0) / sigma2;
    l0 = saturate_llr(c * z.real());
    l1 = saturate_llr(c * z.imag());
}

inline std::vector<double> qpsk_llr(const cvec &y, const cvec &h, double sigma2)
{
    require(y.size() == h.size(), "qpsk_llr: size mismatch");
    std::vector<double> llr(2 * y.size());
    for (size_t i = 0; i < y.size(); ++i)
        qpsk_llr(y[i], h[i], sigma2, llr[2 * i], llr[2 * i + 1]);
    return llr;
}

} // namespace pdcchlab

#endif
