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

#ifndef PDCCHLAB_SIM_HPP
#define PDCCHLAB_SIM_HPP

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <memory>
#include <thread>
#include <vector>

#include "analysis.hpp"
#include "channel.hpp"
#include "common.hpp"
#include "coreset.hpp"
#include "crc24c.hpp"
#include "estimation.hpp"
#include "ofdm.hpp"
#include "polar.hpp"
#include "qpsk.hpp"
#include "rng.hpp"
#include "scl_decoder.hpp"

namespace pdcchlab
{

enum class ChannelKind
{
    awgn,
    echo,
    tdl
};

enum class TdlProfile
{
    tdl_a,
    tdl_c
};

enum class Sigma2Mode
{
    genie,
    estimated
};

struct ChannelModelConfig
{
    ChannelKind kind = ChannelKind::awgn;

    // echo: second path of equal average power, delay alpha * tcp_ref.
    // tcp_ref_s = 0 picks the cyclic prefix of the configured numerology.
    double echo_alpha = 0.0;
    double echo_tcp_ref_s = 0.0;

    // tdl: normalized power delay profile scaled to an RMS delay spread,
    // each tap an independent Rayleigh fader with classical Doppler.
    TdlProfile profile = TdlProfile::tdl_a;
    double delay_spread_s = 100e-9;
    double doppler_hz = 0.0;

    void validate() const
    {
        if (kind == ChannelKind::echo)
        {
            require(echo_alpha >= 0.0, "ChannelModelConfig: negative echo delay factor");
            require(echo_tcp_ref_s >= 0.0, "ChannelModelConfig: negative echo delay reference");
        }
        if (kind == ChannelKind::tdl)
        {
            require(delay_spread_s > 0.0, "ChannelModelConfig: delay spread must be positive");
            require(doppler_hz >= 0.0, "ChannelModelConfig: negative Doppler");
        }
    }
};

struct StopRule
{
    size_t min_block_errors = 100;
    size_t max_blocks = 1000000;
};

struct SimConfig
{
    OfdmConfig ofdm;
    CoresetConfig coreset;
    size_t payload_bits = 40;
    size_t list_size = 8;
    ChannelModelConfig channel;
    EstimatorKind estimator = EstimatorKind::perfect;
    size_t window_taps = 0; // 0 -> default rule from the CP length
    Sigma2Mode sigma2_mode = Sigma2Mode::genie;
    StopRule stop;
    uint64_t master_seed = 1;
    double trial_spacing_s = 0.0; // 0 -> automatic
    double target_bler = 1e-3;

    size_t info_bits() const { return payload_bits + kCrcBits; }

    void validate() const
    {
        ofdm.validate();
        coreset.validate();
        channel.validate();
        require(payload_bits >= 1 && payload_bits <= 140, "SimConfig: payload size out of range");
        require(coreset.n_occupied() <= ofdm.fft_size, "SimConfig: CORESET wider than the FFT");
        require(info_bits() <= coreset.coded_bits(), "SimConfig: no room for the coded block");
        require(list_size >= 1 && list_size <= 64 && (list_size & (list_size - 1)) == 0,
                "SimConfig: list size must be a power of two in [1, 64]");
        require(stop.min_block_errors >= 1, "SimConfig: need at least one block error to stop");
        require(stop.max_blocks >= 1, "SimConfig: need at least one block");
        require(target_bler > 0.0 && target_bler < 1.0, "SimConfig: target BLER out of (0, 1)");
        require(trial_spacing_s >= 0.0, "SimConfig: negative trial spacing");
        if (channel.kind == ChannelKind::tdl && channel.doppler_hz > 0.0)
            require(channel.doppler_hz < ofdm.sample_rate_hz() / 2.0,
                    "SimConfig: Doppler above Nyquist of the sample rate");
    }
};

struct TrialResult
{
    bool block_error = false;
    size_t bit_errors = 0;
    bool crc_ok = false;
};

struct BlerPoint
{
    double cnr_db = 0.0;
    size_t blocks = 0;
    size_t block_errors = 0;
    size_t bit_errors = 0;
    double bler = 0.0;
    double ber = 0.0;
    double wilson_halfwidth = 0.0;
    uint64_t seed = 0;
    double wall_ms = 0.0;
};

// Half width of the 95% Wilson score interval for errors/n.
inline double wilson_halfwidth(size_t errors, size_t n)
{
    require(n >= 1, "wilson_halfwidth: empty sample");
    constexpr double z = 1.959963984540054;
    const double nn = static_cast<double>(n);
    const double p = static_cast<double>(errors) / nn;
    const double z2 = z * z;
    return z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / (1.0 + z2 / nn);
}

// Distance between consecutive trial start times, in samples. Block-to-block
// independence over a fading process needs roughly the first zero of the
// classical autocorrelation, 0.383 / f_d, between draws.
inline uint64_t trial_spacing_samples(const SimConfig &cfg)
{
    const double fs = cfg.ofdm.sample_rate_hz();
    const uint64_t block = static_cast<uint64_t>(cfg.coreset.n_sym) * cfg.ofdm.symbol_samples();
    if (cfg.trial_spacing_s > 0.0)
    {
        const auto user = static_cast<uint64_t>(std::llround(cfg.trial_spacing_s * fs));
        return std::max<uint64_t>(user, 1);
    }
    if (cfg.channel.kind == ChannelKind::tdl && cfg.channel.doppler_hz > 0.0)
    {
        const auto decorr =
            static_cast<uint64_t>(std::ceil(0.383 / cfg.channel.doppler_hz * fs));
        return std::max(block, decorr);
    }
    return block;
}

// One complete transmit/receive chain, reused across trials. Each worker
// thread owns one; trial outcomes depend only on the configuration and the
// trial indices, never on how trials are spread over workers.
class LinkRunner
{
  public:
    explicit LinkRunner(const SimConfig &cfg)
        : cfg_((cfg.validate(), cfg)),
          plan_(build_polar_plan(cfg.info_bits(), cfg.coreset.coded_bits())),
          decoder_(plan_, cfg.list_size), fft_(cfg.ofdm.fft_size),
          spacing_(trial_spacing_samples(cfg))
    {
        if (cfg_.channel.kind == ChannelKind::tdl)
        {
            const auto &profile = cfg_.channel.profile == TdlProfile::tdl_a ? tdl_a_profile()
                                                                            : tdl_c_profile();
            tdl_ = std::make_unique<TdlChannel>(profile, cfg_.channel.delay_spread_s,
                                                cfg_.channel.doppler_hz,
                                                derive_seed(cfg_.master_seed, {0x46414445ull}));
        }
        else if (cfg_.channel.kind == ChannelKind::echo)
        {
            echo_.alpha = cfg_.channel.echo_alpha;
            echo_.tcp_ref_s = cfg_.channel.echo_tcp_ref_s > 0.0 ? cfg_.channel.echo_tcp_ref_s
                                                                : cfg_.ofdm.t_cp_s();
        }
        if (cfg_.estimator == EstimatorKind::ls_dft && cfg_.window_taps == 0)
            window_ = default_window_taps(cfg_.coreset.n_pilots_per_symbol(), cfg_.ofdm.t_cp_s(),
                                          cfg_.ofdm.t_u_s());
        else
            window_ = cfg_.window_taps;
    }

    const PolarPlan &plan() const { return plan_; }
    uint64_t spacing_samples() const { return spacing_; }

    // cnr_index keeps trials at different operating points statistically
    // independent while the fading realization stays common to all of them.
    TrialResult run_trial(double cnr_db, size_t cnr_index, uint64_t trial_index)
    {
        const uint64_t trial_seed =
            derive_seed(cfg_.master_seed, {static_cast<uint64_t>(cnr_index), trial_index});
        Rng rng(trial_seed);

        BitVec payload(cfg_.payload_bits);
        for (auto &b : payload)
            b = rng.bit();
        const BitVec coded = polar_encode(plan_, attach_crc(payload));
        const ResourceGrid tx = build_grid(cfg_.coreset, qpsk_map(coded), trial_seed);

        std::vector<cvec> tx_symbols(tx.n_sym);
        for (size_t s = 0; s < tx.n_sym; ++s)
            tx_symbols[s].assign(tx.re.begin() + static_cast<long>(s * tx.width),
                                 tx.re.begin() + static_cast<long>((s + 1) * tx.width));
        cvec samples = ofdm_modulate(cfg_.ofdm, tx_symbols, fft_);

        const uint64_t t0 = trial_index * spacing_;
        const double fs = cfg_.ofdm.sample_rate_hz();
        if (cfg_.channel.kind == ChannelKind::echo)
            samples = apply_echo(echo_, samples, fs);
        else if (cfg_.channel.kind == ChannelKind::tdl)
            samples = tdl_->apply(samples, fs, t0);

        const double n0 = cnr_to_n0(cnr_db);
        apply_awgn(samples, n0, rng);

        const std::vector<cvec> rx_symbols = ofdm_demodulate(cfg_.ofdm, samples, tx.width, fft_);
        ResourceGrid rx = tx;
        for (size_t s = 0; s < rx.n_sym; ++s)
            std::copy(rx_symbols[s].begin(), rx_symbols[s].end(),
                      rx.re.begin() + static_cast<long>(s * rx.width));

        const ChannelEstimate est = cfg_.estimator == EstimatorKind::perfect
                                        ? perfect_estimate(tx, t0)
                                        : estimate_channel(tx, rx, cfg_.estimator, window_);

        double sigma2;
        if (cfg_.sigma2_mode == Sigma2Mode::genie)
            sigma2 = std::max(n0, 1e-12);
        else
        {
            std::vector<cvec> gains(rx.n_sym);
            for (size_t s = 0; s < rx.n_sym; ++s)
                gains[s] = ls_pilot_gains(tx, rx, s);
            sigma2 = estimate_noise_variance(gains);
        }

        cvec y, h;
        equalize(tx, rx, est, y, h);
        const std::vector<double> llr = qpsk_llr(y, h, sigma2);
        const SclDecoder::Result res = decoder_.decode(rate_recover(plan_.rm, llr));

        TrialResult out;
        out.crc_ok = res.crc_ok;
        for (size_t i = 0; i < cfg_.payload_bits; ++i)
            out.bit_errors += res.k_bits[i] != payload[i];
        out.block_error = !res.crc_ok || out.bit_errors != 0;
        return out;
    }

  private:
    ChannelEstimate perfect_estimate(const ResourceGrid &tx, uint64_t t0) const
    {
        ChannelEstimate est;
        est.width = tx.width;
        est.n_sym = tx.n_sym;
        est.h.assign(est.width * est.n_sym, cdouble(1.0, 0.0));
        if (cfg_.channel.kind == ChannelKind::awgn)
            return est;

        const double fs = cfg_.ofdm.sample_rate_hz();
        if (cfg_.channel.kind == ChannelKind::echo)
        {
            for (size_t q = 0; q < est.width; ++q)
            {
                const auto bin = static_cast<double>(
                    subcarrier_bin(cfg_.ofdm.fft_size, est.width, q));
                const cdouble g = echo_freq_response(echo_, fs, cfg_.ofdm.fft_size, bin);
                for (size_t s = 0; s < est.n_sym; ++s)
                    est.at(q, s) = g;
            }
            return est;
        }

        std::vector<double> bins(est.width);
        for (size_t q = 0; q < est.width; ++q)
            bins[q] = static_cast<double>(subcarrier_bin(cfg_.ofdm.fft_size, est.width, q));
        const size_t cp = cfg_.ofdm.cp_samples();
        for (size_t s = 0; s < est.n_sym; ++s)
        {
            // Gains frozen at the midpoint of the useful part of the symbol.
            const double t_mid =
                (static_cast<double>(t0) +
                 static_cast<double>(s * cfg_.ofdm.symbol_samples() + cp) +
                 static_cast<double>(cfg_.ofdm.fft_size) / 2.0) /
                fs;
            const cvec g = tdl_->freq_response(t_mid, fs, cfg_.ofdm.fft_size, bins);
            for (size_t q = 0; q < est.width; ++q)
                est.at(q, s) = g[q];
        }
        return est;
    }

    SimConfig cfg_;
    PolarPlan plan_;
    SclDecoder decoder_;
    Fft fft_;
    uint64_t spacing_;
    std::unique_ptr<TdlChannel> tdl_;
    EchoChannel echo_;
    size_t window_ = 0;
};

// Monte Carlo estimate of the block error rate at one operating point.
// Trials run in rounds of a fixed size; the stop rule is evaluated only at
// round boundaries, so the estimate is unbiased and independent of the
// worker count. Integer counters keep the aggregation order-free.
constexpr size_t kTrialsPerRound = 2048;

inline BlerPoint run_bler_point(const SimConfig &cfg, double cnr_db, size_t cnr_index,
                                size_t workers = 1)
{
    cfg.validate();
    workers = std::max<size_t>(workers, 1);
    const auto t_start = std::chrono::steady_clock::now();

    std::vector<std::unique_ptr<LinkRunner>> runners;
    runners.reserve(workers);
    for (size_t w = 0; w < workers; ++w)
        runners.push_back(std::make_unique<LinkRunner>(cfg));

    size_t blocks = 0, block_errors = 0, bit_errors = 0;
    while (blocks < cfg.stop.max_blocks && block_errors < cfg.stop.min_block_errors)
    {
        const size_t round = std::min(kTrialsPerRound, cfg.stop.max_blocks - blocks);
        std::vector<size_t> blk_err(workers, 0), bit_err(workers, 0);
        auto span = [&](size_t w) {
            for (uint64_t i = blocks + w; i < blocks + round; i += workers)
            {
                const TrialResult r = runners[w]->run_trial(cnr_db, cnr_index, i);
                blk_err[w] += r.block_error;
                bit_err[w] += r.bit_errors;
            }
        };
        if (workers == 1)
            span(0);
        else
        {
            std::vector<std::thread> pool;
            for (size_t w = 1; w < workers; ++w)
                pool.emplace_back(span, w);
            span(0);
            for (auto &t : pool)
                t.join();
        }
        for (size_t w = 0; w < workers; ++w)
        {
            block_errors += blk_err[w];
            bit_errors += bit_err[w];
        }
        blocks += round;
    }

    BlerPoint pt;
    pt.cnr_db = cnr_db;
    pt.blocks = blocks;
    pt.block_errors = block_errors;
    pt.bit_errors = bit_errors;
    pt.bler = static_cast<double>(block_errors) / static_cast<double>(blocks);
    pt.ber = static_cast<double>(bit_errors) /
             static_cast<double>(blocks * cfg.payload_bits);
    pt.wilson_halfwidth = wilson_halfwidth(block_errors, blocks);
    pt.seed = cfg.master_seed;
    pt.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                           t_start)
                     .count();
    return pt;
}

// Sweeps the grid in ascending CNR order and stops once the curve has
// dropped an order of magnitude below the target, where interpolation for
// the required CNR no longer needs more points.
inline std::vector<BlerPoint> run_sweep(const SimConfig &cfg, const std::vector<double> &cnr_grid_db,
                                        size_t workers = 1)
{
    require(!cnr_grid_db.empty(), "run_sweep: empty CNR grid");
    require(std::is_sorted(cnr_grid_db.begin(), cnr_grid_db.end()),
            "run_sweep: CNR grid must be ascending");
    std::vector<BlerPoint> out;
    for (size_t i = 0; i < cnr_grid_db.size(); ++i)
    {
        out.push_back(run_bler_point(cfg, cnr_grid_db[i], i, workers));
        if (out.back().bler < cfg.target_bler / 10.0)
            break;
    }
    return out;
}

enum class RequiredCnrStatus
{
    ok,              // the curve brackets the target
    unreliable,      // never reaches the target on this grid
    always_reliable // already below the target at the lowest CNR
};

struct RequiredCnr
{
    RequiredCnrStatus status = RequiredCnrStatus::unreliable;
    double cnr_db = 0.0;

    bool ok() const { return status == RequiredCnrStatus::ok; }
};

// Required CNR for a target BLER, log-linear interpolation between the last
// bracketing pair of sweep points. Zero-error points enter the interpolation
// at half a block error, the resolution limit of the measurement.
inline RequiredCnr required_cnr(const std::vector<BlerPoint> &points, double target_bler)
{
    require(!points.empty(), "required_cnr: no points");
    require(target_bler > 0.0 && target_bler < 1.0, "required_cnr: target out of (0, 1)");
    auto level = [&](const BlerPoint &p) {
        const double floor_bler = 0.5 / static_cast<double>(p.blocks);
        return std::max(p.bler, floor_bler);
    };

    RequiredCnr out;
    size_t cross = points.size();
    for (size_t i = 0; i + 1 < points.size(); ++i)
        if (level(points[i]) >= target_bler && level(points[i + 1]) < target_bler)
            cross = i;
    if (cross == points.size())
    {
        out.status = level(points.front()) < target_bler ? RequiredCnrStatus::always_reliable
                                                         : RequiredCnrStatus::unreliable;
        out.cnr_db = points.front().cnr_db;
        return out;
    }

    const double x0 = points[cross].cnr_db, x1 = points[cross + 1].cnr_db;
    const double y0 = std::log10(level(points[cross]));
    const double y1 = std::log10(level(points[cross + 1]));
    const double yt = std::log10(target_bler);
    out.status = RequiredCnrStatus::ok;
    out.cnr_db = x0 + (yt - y0) / (y1 - y0) * (x1 - x0);
    return out;
}

} // namespace pdcchlab

#endif
