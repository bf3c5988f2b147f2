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

#ifndef PDCCHLAB_CHANNEL_HPP
#define PDCCHLAB_CHANNEL_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "common.hpp"
#include "rng.hpp"

namespace pdcchlab
{

// ---------------------------------------------------------------------------
// AWGN

// Adds circularly symmetric noise of total variance n0 per sample. With the
// unitary FFT convention the same n0 appears per subcarrier, so n0 is the
// per-RE noise level: n0 = Es * 10^(-cnr_db/10) with unit RE energy Es = 1.
inline void apply_awgn(cvec &samples, double n0, Rng &rng)
{
    require(n0 >= 0.0, "apply_awgn: negative noise variance");
    if (n0 == 0.0)
        return;
    for (auto &s : samples)
        s += rng.cnormal(n0);
}

inline double cnr_to_n0(double cnr_db) { return std::pow(10.0, -cnr_db / 10.0); }

// ---------------------------------------------------------------------------
// Static two path echo

// Unit-power main path plus an echo of equal power at delay
// alpha * tcp_ref, both scaled by 1/sqrt(2).
struct EchoChannel
{
    double alpha = 0.0;
    double tcp_ref_s = 0.0;

    void validate() const
    {
        require(alpha >= 0.0, "EchoChannel: alpha must be nonnegative");
        require(tcp_ref_s > 0.0, "EchoChannel: reference CP must be positive");
    }

    size_t delay_samples(double sample_rate_hz) const
    {
        return static_cast<size_t>(std::llround(alpha * tcp_ref_s * sample_rate_hz));
    }
};

inline cvec apply_echo(const EchoChannel &ch, const cvec &x, double sample_rate_hz)
{
    ch.validate();
    const size_t d = ch.delay_samples(sample_rate_hz);
    cvec y(x.size());
    for (size_t t = 0; t < x.size(); ++t)
    {
        cdouble v = x[t];
        if (t >= d)
            v += x[t - d];
        y[t] = v * kInvSqrt2;
    }
    return y;
}

// Exact frequency response of the echo on FFT bin b (signed or unsigned).
inline cdouble echo_freq_response(const EchoChannel &ch, double sample_rate_hz,
                                  size_t fft_size, double bin)
{
    const double d = static_cast<double>(ch.delay_samples(sample_rate_hz));
    const double ph = -kTwoPi * bin * d / static_cast<double>(fft_size);
    return (cdouble(1.0, 0.0) + cdouble(std::cos(ph), std::sin(ph))) * kInvSqrt2;
}

// ---------------------------------------------------------------------------
// TDL fading channels

struct TdlTapSpec
{
    double delay_norm; // in units of the RMS delay spread
    double power_db;
};

// Normalized tapped delay line profiles (NLOS), delays in units of the
// desired RMS delay spread.
inline const std::vector<TdlTapSpec> &tdl_a_profile()
{
    static const std::vector<TdlTapSpec> taps = {
        {0.0000, -13.4}, {0.3819, 0.0},   {0.4025, -2.2},  {0.5868, -4.0},
        {0.4610, -6.0},  {0.5375, -8.2},  {0.6708, -9.9},  {0.5750, -10.5},
        {0.7618, -7.5},  {1.5375, -15.9}, {1.8978, -6.6},  {2.2242, -16.7},
        {2.1718, -12.4}, {2.4942, -15.2}, {2.5119, -10.8}, {3.0582, -11.3},
        {4.0810, -12.7}, {4.4579, -16.2}, {4.5695, -18.3}, {4.7966, -18.9},
        {5.0066, -16.6}, {5.3043, -19.9}, {9.6586, -29.7}};
    return taps;
}

inline const std::vector<TdlTapSpec> &tdl_c_profile()
{
    static const std::vector<TdlTapSpec> taps = {
        {0.0000, -4.4},  {0.2099, -1.2},  {0.2219, -3.5},  {0.2329, -5.2},
        {0.2176, -2.5},  {0.6366, 0.0},   {0.6448, -2.2},  {0.6560, -3.9},
        {0.6584, -7.4},  {0.7935, -7.1},  {0.8213, -10.7}, {0.9336, -11.1},
        {1.2285, -5.1},  {1.3083, -6.8},  {2.1704, -8.7},  {2.7105, -13.2},
        {4.2589, -13.9}, {4.6003, -13.9}, {5.4902, -15.8}, {5.6077, -17.1},
        {6.3065, -16.0}, {6.6374, -15.7}, {7.0427, -21.6}, {8.6523, -22.8}};
    return taps;
}

// Rayleigh fading tapped delay line. Each tap is a sum of kSinusoids complex
// sinusoids with stratified arrival angles over (0, pi), which keeps the
// empirical autocorrelation within a percent of J0(2 pi f_d tau) while plain
// independent angles would miss by O(1/sqrt(M)). The process is a continuous
// function of absolute time: a block at start time t0 sees exactly the same
// realization an overlapping block would.
class TdlChannel
{
  public:
    static constexpr size_t kSinusoids = 32;

    TdlChannel(const std::vector<TdlTapSpec> &profile, double delay_spread_s,
               double doppler_hz, uint64_t seed)
        : doppler_hz_(doppler_hz)
    {
        require(!profile.empty(), "TdlChannel: empty profile");
        require(delay_spread_s >= 0.0, "TdlChannel: negative delay spread");
        require(doppler_hz >= 0.0, "TdlChannel: negative Doppler");

        double total = 0.0;
        for (const auto &t : profile)
            total += db_to_lin(t.power_db);

        Rng rng(derive_seed(seed, {0x54444Cull}));
        taps_.resize(profile.size());
        for (size_t i = 0; i < profile.size(); ++i)
        {
            Tap &tap = taps_[i];
            tap.delay_s = profile[i].delay_norm * delay_spread_s;
            tap.amp = std::sqrt(db_to_lin(profile[i].power_db) / total / double(kSinusoids));
            for (size_t m = 0; m < kSinusoids; ++m)
            {
                const double theta =
                    (static_cast<double>(m) + rng.uniform()) * (0.5 * kTwoPi) / double(kSinusoids);
                tap.omega[m] = kTwoPi * doppler_hz * std::cos(theta);
                tap.phase[m] = kTwoPi * rng.uniform();
            }
        }
    }

    size_t n_taps() const { return taps_.size(); }
    double tap_delay_s(size_t i) const { return taps_[i].delay_s; }

    // Exact complex gain of tap i at absolute time t (seconds).
    cdouble tap_gain(size_t i, double t) const
    {
        const Tap &tap = taps_[i];
        double re = 0.0, im = 0.0;
        for (size_t m = 0; m < kSinusoids; ++m)
        {
            const double a = tap.omega[m] * t + tap.phase[m];
            re += std::cos(a);
            im += std::sin(a);
        }
        return cdouble(tap.amp * re, tap.amp * im);
    }

    // Applies the channel to a block starting at absolute sample t0. Tap
    // gains are evaluated exactly on the absolute anchor lattice (multiples
    // of kAnchorStep samples) and interpolated linearly in between, so
    // overlapping blocks see bit-identical gains regardless of t0. The phase
    // drift per anchor step keeps the interpolation error below -60 dB at
    // the Doppler rates of interest. Samples before the block are zero.
    cvec apply(const cvec &x, double sample_rate_hz, uint64_t t0_samples) const
    {
        require(sample_rate_hz > 0.0, "TdlChannel::apply: bad sample rate");
        const uint64_t a0 = t0_samples / kAnchorStep;
        cvec y(x.size(), cdouble(0.0, 0.0));
        for (size_t i = 0; i < taps_.size(); ++i)
        {
            const size_t d = static_cast<size_t>(
                std::llround(taps_[i].delay_s * sample_rate_hz));
            const std::vector<cdouble> g =
                anchor_gains(i, sample_rate_hz, a0, x.size() + t0_samples % kAnchorStep);
            for (size_t t = d; t < x.size(); ++t)
            {
                const uint64_t abs_t = t0_samples + t;
                const size_t a = static_cast<size_t>(abs_t / kAnchorStep - a0);
                const double frac = double(abs_t % kAnchorStep) / double(kAnchorStep);
                const cdouble gain = g[a] + (g[a + 1] - g[a]) * frac;
                y[t] += gain * x[t - d];
            }
        }
        return y;
    }

    // Exact frequency response over the occupied FFT bins at time t.
    cvec freq_response(double t, double sample_rate_hz, size_t fft_size,
                       const std::vector<double> &bins) const
    {
        cvec h(bins.size(), cdouble(0.0, 0.0));
        for (size_t i = 0; i < taps_.size(); ++i)
        {
            const double d = std::llround(taps_[i].delay_s * sample_rate_hz);
            const cdouble g = tap_gain(i, t);
            for (size_t k = 0; k < bins.size(); ++k)
            {
                const double ph = -kTwoPi * bins[k] * d / static_cast<double>(fft_size);
                h[k] += g * cdouble(std::cos(ph), std::sin(ph));
            }
        }
        return h;
    }

    double doppler_hz() const { return doppler_hz_; }

  private:
    static constexpr size_t kAnchorStep = 32;

    struct Tap
    {
        double delay_s = 0.0;
        double amp = 0.0;
        std::array<double, kSinusoids> omega{};
        std::array<double, kSinusoids> phase{};
    };

    // Gains at lattice anchors a0, a0+1, ... covering len samples, computed
    // by per-sinusoid phasor rotation from the first anchor.
    std::vector<cdouble> anchor_gains(size_t tap_i, double fs, uint64_t a0,
                                      size_t len) const
    {
        const Tap &tap = taps_[tap_i];
        const size_t n_anchor = len / kAnchorStep + 2;
        std::vector<cdouble> g(n_anchor, cdouble(0.0, 0.0));
        const double tbase = static_cast<double>(a0 * kAnchorStep) / fs;
        const double dt = static_cast<double>(kAnchorStep) / fs;
        for (size_t m = 0; m < kSinusoids; ++m)
        {
            const double a0 = tap.omega[m] * tbase + tap.phase[m];
            cdouble ph(std::cos(a0), std::sin(a0));
            const double step = tap.omega[m] * dt;
            const cdouble rot(std::cos(step), std::sin(step));
            for (size_t k = 0; k < n_anchor; ++k)
            {
                g[k] += ph;
                ph *= rot;
            }
        }
        for (auto &v : g)
            v *= tap.amp;
        return g;
    }

    std::vector<Tap> taps_;
    double doppler_hz_;
};

} // namespace pdcchlab

#endif
