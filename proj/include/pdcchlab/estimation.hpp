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

#ifndef PDCCHLAB_ESTIMATION_HPP
#define PDCCHLAB_ESTIMATION_HPP

#include <cmath>
#include <cstdint>
#include <vector>

#include "common.hpp"
#include "coreset.hpp"
#include "ofdm.hpp"

namespace pdcchlab
{

enum class EstimatorKind
{
    perfect,   // true channel response handed to the demapper
    ls_linear, // least squares at pilots, linear interpolation in frequency
    ls_dft     // least squares at pilots, delay-domain windowed reconstruction
};

// Full-grid channel estimate, laid out like the resource grid.
struct ChannelEstimate
{
    size_t width = 0;
    size_t n_sym = 0;
    cvec h; // width * n_sym, column-major

    cdouble &at(size_t q, size_t s) { return h[s * width + q]; }
    const cdouble &at(size_t q, size_t s) const { return h[s * width + q]; }
};

// Least squares gains at the pilot lattice of one symbol: H_p = y_p / x_p.
// tx carries the transmitted grid (pilot symbols), rx the received one.
inline cvec ls_pilot_gains(const ResourceGrid &tx, const ResourceGrid &rx, size_t sym)
{
    require(tx.width == rx.width && tx.n_sym == rx.n_sym, "ls_pilot_gains: grid shape mismatch");
    cvec g;
    for (const auto &[q, s] : tx.pilot_pos)
        if (s == sym)
            g.push_back(rx.at(q, s) / tx.at(q, s));
    return g;
}

// Linear interpolation across frequency from the uniform pilot lattice
// q = 1 + 4p to all width subcarriers; edges hold the nearest pilot value.
inline cvec interp_linear(const cvec &pilot_gains, size_t width)
{
    const size_t P = pilot_gains.size();
    require(P >= 2, "interp_linear: need at least two pilots");
    require(pilot_subcarrier(P - 1) < width, "interp_linear: pilots exceed the grid");
    cvec h(width);
    for (size_t q = 0; q < width; ++q)
    {
        const size_t q0 = pilot_subcarrier(0);
        const size_t q1 = pilot_subcarrier(P - 1);
        if (q <= q0)
        {
            h[q] = pilot_gains.front();
            continue;
        }
        if (q >= q1)
        {
            h[q] = pilot_gains.back();
            continue;
        }
        const size_t p = (q - 1) / kPilotSpacing;
        const double frac = double(q - pilot_subcarrier(p)) / double(kPilotSpacing);
        h[q] = pilot_gains[p] + (pilot_gains[p + 1] - pilot_gains[p]) * frac;
    }
    return h;
}

// Default delay window: the taps spanning one cyclic prefix, at least two.
inline size_t default_window_taps(size_t n_pilots, double t_cp_s, double t_u_s)
{
    const size_t w = static_cast<size_t>(
        std::llround(double(n_pilots) * t_cp_s / t_u_s * double(kPilotSpacing)));
    return std::max<size_t>(w, 2);
}

// DFT interpolation: transform the P pilot gains to the delay domain, keep
// the first window_taps one-sided bins (delay resolution T_U / (4P), span
// T_U / 4 before aliasing), and evaluate the kept taps on the full lattice.
// Phases are referenced to the first pilot subcarrier q = 1.
inline cvec interp_dft(const cvec &pilot_gains, size_t width, size_t window_taps)
{
    const size_t P = pilot_gains.size();
    require(P >= 2, "interp_dft: need at least two pilots");
    require(window_taps >= 1 && window_taps <= P, "interp_dft: window must be in [1, P]");
    require(pilot_subcarrier(P - 1) < width, "interp_dft: pilots exceed the grid");

    // h_d[m] = (1/P) sum_p g_p exp(+j 2 pi p m / P)
    cvec hd(window_taps, cdouble(0.0, 0.0));
    for (size_t m = 0; m < window_taps; ++m)
    {
        for (size_t p = 0; p < P; ++p)
        {
            const double a = kTwoPi * double(p) * double(m) / double(P);
            hd[m] += pilot_gains[p] * cdouble(std::cos(a), std::sin(a));
        }
        hd[m] /= double(P);
    }

    cvec h(width);
    const double denom = double(kPilotSpacing) * double(P);
    for (size_t q = 0; q < width; ++q)
    {
        cdouble v(0.0, 0.0);
        const double dq = double(q) - 1.0;
        for (size_t m = 0; m < window_taps; ++m)
        {
            const double a = -kTwoPi * dq * double(m) / denom;
            v += hd[m] * cdouble(std::cos(a), std::sin(a));
        }
        h[q] = v;
    }
    return h;
}

// Blind noise variance from leave-one-out linear prediction at interior
// pilots. The residual g_p - (g_{p-1} + g_{p+1})/2 carries 3/2 of the pilot
// noise variance when the channel is locally linear.
inline double estimate_noise_variance(const std::vector<cvec> &pilot_gains_per_symbol)
{
    double acc = 0.0;
    size_t count = 0;
    for (const cvec &g : pilot_gains_per_symbol)
    {
        require(g.size() >= 3, "estimate_noise_variance: need at least three pilots");
        for (size_t p = 1; p + 1 < g.size(); ++p)
        {
            const cdouble r = g[p] - 0.5 * (g[p - 1] + g[p + 1]);
            acc += std::norm(r);
            ++count;
        }
    }
    const double v = acc / double(count) * (2.0 / 3.0);
    return std::max(v, 1e-6);
}

// Gathers the received data REs and their estimated gains in the grid's
// data fill order, ready for the soft demapper.
inline void equalize(const ResourceGrid &tx, const ResourceGrid &rx,
                     const ChannelEstimate &est, cvec &y, cvec &h)
{
    require(rx.width == est.width && rx.n_sym == est.n_sym, "equalize: estimate shape mismatch");
    y.clear();
    h.clear();
    y.reserve(tx.data_pos.size());
    h.reserve(tx.data_pos.size());
    for (const auto &[q, s] : tx.data_pos)
    {
        y.push_back(rx.at(q, s));
        h.push_back(est.at(q, s));
    }
}

// Full least squares estimate of the grid, one interpolation per symbol.
inline ChannelEstimate estimate_channel(const ResourceGrid &tx, const ResourceGrid &rx,
                                        EstimatorKind kind, size_t window_taps)
{
    require(kind != EstimatorKind::perfect, "estimate_channel: perfect estimates come from the channel");
    ChannelEstimate est;
    est.width = rx.width;
    est.n_sym = rx.n_sym;
    est.h.resize(est.width * est.n_sym);
    for (size_t s = 0; s < rx.n_sym; ++s)
    {
        const cvec g = ls_pilot_gains(tx, rx, s);
        const cvec h = kind == EstimatorKind::ls_linear ? interp_linear(g, rx.width)
                                                        : interp_dft(g, rx.width, window_taps);
        for (size_t q = 0; q < rx.width; ++q)
            est.at(q, s) = h[q];
    }
    return est;
}

} // namespace pdcchlab

#endif
