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

#ifndef PDCCHLAB_ANALYSIS_HPP
#define PDCCHLAB_ANALYSIS_HPP

#include <cmath>
#include <cstdint>
#include <vector>

#include "common.hpp"
#include "rng.hpp"

namespace pdcchlab
{

// Sampling-theorem limits of the DMRS lattice. A pilot every D_y symbols
// resolves Doppler up to 1/(2 D_y (T_U + T_cp)); a pilot every D_x
// subcarriers resolves delays up to T_U / D_x.

struct TimePilotSpacing
{
    double real_value = 0.0; // 1 / (2 (T_U + T_cp) d_max)
    long long floor_value = 0;
    bool unbounded = false; // d_max = 0
};

inline TimePilotSpacing max_time_pilot_spacing(double t_u_s, double t_cp_s, double d_max_hz)
{
    require(t_u_s > 0.0 && t_cp_s >= 0.0, "max_time_pilot_spacing: bad symbol timing");
    require(d_max_hz >= 0.0, "max_time_pilot_spacing: negative Doppler");
    TimePilotSpacing r;
    if (d_max_hz == 0.0)
    {
        r.unbounded = true;
        return r;
    }
    r.real_value = 1.0 / (2.0 * (t_u_s + t_cp_s) * d_max_hz);
    r.floor_value = static_cast<long long>(std::floor(r.real_value));
    return r;
}

inline double max_doppler_hz(double d_y, double t_u_s, double t_cp_s)
{
    require(d_y >= 1.0, "max_doppler_hz: pilot spacing below one symbol");
    require(t_u_s > 0.0 && t_cp_s >= 0.0, "max_doppler_hz: bad symbol timing");
    return 1.0 / (2.0 * d_y * (t_u_s + t_cp_s));
}

inline double doppler_to_speed_kmh(double doppler_hz, double carrier_hz)
{
    require(carrier_hz > 0.0, "doppler_to_speed_kmh: bad carrier");
    return doppler_hz * kSpeedOfLight / carrier_hz * 3.6;
}

inline double max_delay_spread_s(double t_u_s, double d_x)
{
    require(t_u_s > 0.0 && d_x >= 1.0, "max_delay_spread_s: bad inputs");
    return t_u_s / d_x;
}

// CNR loss from discarding the cyclic prefix energy at the receiver.
inline double cp_cnr_loss_db(double t_cp_s, double t_u_s)
{
    require(t_u_s > 0.0 && t_cp_s >= 0.0, "cp_cnr_loss_db: bad symbol timing");
    return -10.0 * std::log10(1.0 - t_cp_s / (t_u_s + t_cp_s));
}

inline double shannon_se(double snr_db) { return std::log2(1.0 + db_to_lin(snr_db)); }

struct BicmSe
{
    double se = 0.0;
    double std_error = 0.0;
};

// Monte Carlo BICM spectral efficiency of Gray QPSK in AWGN. The two bits
// ride independent BPSK subchannels of amplitude 1/sqrt(2) and per-dimension
// noise N0/2, so SE = 2 (1 - E[log2(1 + exp(-L))]) with L the bit LLR under
// the transmitted hypothesis. Peaks at 2 bit/s/Hz.
inline BicmSe bicm_se_qpsk(double snr_db, size_t n_draws = 100000, uint64_t seed = 1)
{
    require(n_draws >= 1000, "bicm_se_qpsk: too few draws");
    const double n0 = db_to_lin(-snr_db);
    const double sd2 = 0.5 * n0; // per-dimension variance
    const double a = kInvSqrt2;
    Rng rng(derive_seed(seed, {0x424943ull}));
    double acc = 0.0, acc2 = 0.0;
    for (size_t i = 0; i < n_draws; ++i)
    {
        const double y = a + std::sqrt(sd2) * rng.normal();
        const double llr = 2.0 * a * y / sd2;
        const double loss = llr < -700.0 ? -llr * 1.4426950408889634074
                                         : std::log1p(std::exp(-llr)) * 1.4426950408889634074;
        acc += loss;
        acc2 += loss * loss;
    }
    const double mean = acc / double(n_draws);
    const double var = std::max(acc2 / double(n_draws) - mean * mean, 0.0);
    BicmSe r;
    r.se = 2.0 * (1.0 - mean);
    r.std_error = 2.0 * std::sqrt(var / double(n_draws));
    return r;
}

} // namespace pdcchlab

#endif
