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

#include <catch2/catch_amalgamated.hpp>

#include "pdcchlab/channel.hpp"
#include "pdcchlab/ofdm.hpp"

using namespace pdcchlab;
using Catch::Matchers::WithinAbs;

TEST_CASE("awgn level and determinism", "[channel]")
{
    const double n0 = 0.25;
    cvec x(200000, cdouble(0.0, 0.0));
    Rng rng(0x71uLL);
    apply_awgn(x, n0, rng);
    double mean_re = 0.0, power = 0.0;
    for (const auto &v : x)
    {
        mean_re += v.real();
        power += std::norm(v);
    }
    mean_re /= double(x.size());
    power /= double(x.size());
    CHECK_THAT(mean_re, WithinAbs(0.0, 0.005));
    CHECK_THAT(power, WithinAbs(n0, 0.005));

    cvec y(32, cdouble(0.0, 0.0)), z(32, cdouble(0.0, 0.0));
    Rng r1(5), r2(5);
    apply_awgn(y, n0, r1);
    apply_awgn(z, n0, r2);
    CHECK(y == z);

    cvec w(8, cdouble(1.0, -1.0));
    Rng r3(5);
    apply_awgn(w, 0.0, r3); // cnr = inf keeps the signal untouched
    CHECK(w == cvec(8, cdouble(1.0, -1.0)));
}

TEST_CASE("echo impulse response", "[channel]")
{
    EchoChannel ch;
    ch.alpha = 0.5;
    ch.tcp_ref_s = 4.6875e-6;
    const double fs = 15.36e6;
    const size_t d = ch.delay_samples(fs);
    CHECK(d == 36);

    cvec x(100, cdouble(0.0, 0.0));
    x[0] = 1.0;
    const cvec y = apply_echo(ch, x, fs);
    CHECK_THAT(std::abs(y[0]), WithinAbs(kInvSqrt2, 1e-15));
    CHECK_THAT(std::abs(y[d]), WithinAbs(kInvSqrt2, 1e-15));
    double rest = 0.0;
    for (size_t t = 0; t < y.size(); ++t)
        if (t != 0 && t != d)
            rest += std::abs(y[t]);
    CHECK(rest == 0.0);
}

TEST_CASE("echo inside the prefix matches the closed form response", "[channel]")
{
    OfdmConfig cfg;
    const size_t n_occ = 144;
    Rng rng(0x72uLL);
    std::vector<cvec> sym(1, cvec(n_occ));
    for (auto &v : sym[0])
        v = rng.cnormal(1.0);

    EchoChannel ch;
    ch.alpha = 0.9;
    ch.tcp_ref_s = cfg.t_cp_s();

    const cvec y = apply_echo(ch, ofdm_modulate(cfg, sym), cfg.sample_rate_hz());
    const auto back = ofdm_demodulate(cfg, y, n_occ);
    for (size_t q = 0; q < n_occ; ++q)
    {
        const double bin = double(subcarrier_bin(cfg.fft_size, n_occ, q));
        const cdouble expect =
            sym[0][q] * echo_freq_response(ch, cfg.sample_rate_hz(), cfg.fft_size, bin);
        REQUIRE(std::abs(back[0][q] - expect) <= 1e-12);
    }
}

TEST_CASE("tdl profiles are normalized", "[channel]")
{
    for (const auto *prof : {&tdl_a_profile(), &tdl_c_profile()})
    {
        TdlChannel ch(*prof, 100e-9, 0.0, 1);
        CHECK(ch.n_taps() == prof->size());
        // Average received power over realizations is unity.
        double p = 0.0;
        const int reps = 400;
        for (int r = 0; r < reps; ++r)
        {
            TdlChannel c2(*prof, 100e-9, 0.0, 1000 + static_cast<uint64_t>(r));
            for (size_t i = 0; i < c2.n_taps(); ++i)
                p += std::norm(c2.tap_gain(i, 0.0));
        }
        CHECK_THAT(p / reps, WithinAbs(1.0, 0.02));
    }
}

TEST_CASE("zero doppler means a static channel", "[channel]")
{
    TdlChannel ch(tdl_a_profile(), 300e-9, 0.0, 3);
    for (size_t i = 0; i < ch.n_taps(); ++i)
        CHECK(std::abs(ch.tap_gain(i, 0.0) - ch.tap_gain(i, 5.0)) < 1e-12);

    cvec x(512);
    Rng rng(0x73uLL);
    for (auto &v : x)
        v = rng.cnormal(1.0);
    const cvec y1 = ch.apply(x, 15.36e6, 0);
    const cvec y2 = ch.apply(x, 15.36e6, 123456789);
    for (size_t t = 0; t < x.size(); ++t)
        CHECK(std::abs(y1[t] - y2[t]) < 1e-9);
}

TEST_CASE("fading autocorrelation follows the Clarke spectrum", "[channel][slow]")
{
    // Single unit tap; compare the empirical autocorrelation against
    // J0(2 pi f_d tau) out to the first zero.
    const std::vector<TdlTapSpec> flat = {{0.0, 0.0}};
    const double fd = 100.0;
    TdlChannel ch(flat, 0.0, fd, 17);

    const double dt = 1e-4;
    const size_t n = 400000;
    cvec g(n);
    for (size_t i = 0; i < n; ++i)
        g[i] = ch.tap_gain(0, double(i) * dt);

    double r0 = 0.0;
    for (const auto &v : g)
        r0 += std::norm(v);
    r0 /= double(n);

    for (double tau : {0.5e-3, 1.0e-3, 1.5e-3, 2.0e-3, 2.5e-3, 3.0e-3, 3.5e-3})
    {
        const size_t lag = static_cast<size_t>(tau / dt);
        cdouble acc(0.0, 0.0);
        for (size_t i = 0; i + lag < n; ++i)
            acc += g[i + lag] * std::conj(g[i]);
        const double r = (acc / double(n - lag)).real() / r0;
        const double expect = std::cyl_bessel_j(0.0, kTwoPi * fd * tau);
        CHECK_THAT(r, WithinAbs(expect, 0.05));
    }
}

TEST_CASE("fading envelope is Rayleigh", "[channel][slow]")
{
    const std::vector<TdlTapSpec> flat = {{0.0, 0.0}};
    const double fd = 50.0;
    TdlChannel ch(flat, 0.0, fd, 23);

    // Samples far apart in time are effectively independent.
    const double spacing = 0.4 / fd;
    const size_t n = 2000;
    std::vector<double> env(n);
    double p = 0.0;
    for (size_t i = 0; i < n; ++i)
    {
        env[i] = std::abs(ch.tap_gain(0, double(i) * spacing));
        p += env[i] * env[i];
    }
    p /= double(n);

    std::sort(env.begin(), env.end());
    double d = 0.0;
    for (size_t i = 0; i < n; ++i)
    {
        const double cdf = 1.0 - std::exp(-env[i] * env[i] / p);
        d = std::max(d, std::abs(cdf - double(i + 1) / double(n)));
        d = std::max(d, std::abs(cdf - double(i) / double(n)));
    }
    // Kolmogorov-Smirnov at the 1 percent level.
    CHECK(d * std::sqrt(double(n)) < 1.63);
}

TEST_CASE("block application is continuous in time", "[channel]")
{
    const std::vector<TdlTapSpec> flat = {{0.0, 0.0}};
    TdlChannel ch(flat, 0.0, 2000.0, 29);
    const double fs = 15.36e6;

    Rng rng(0x74uLL);
    cvec x(4096);
    for (auto &v : x)
        v = rng.cnormal(1.0);

    const cvec whole = ch.apply(x, fs, 1000);
    const cvec first = ch.apply(cvec(x.begin(), x.begin() + 2048), fs, 1000);
    const cvec second = ch.apply(cvec(x.begin() + 2048, x.end()), fs, 1000 + 2048);
    for (size_t t = 0; t < 2048; ++t)
    {
        CHECK(std::abs(whole[t] - first[t]) < 1e-9);
        CHECK(std::abs(whole[2048 + t] - second[t]) < 1e-9);
    }
}

TEST_CASE("interpolated gains track the exact process", "[channel]")
{
    const std::vector<TdlTapSpec> flat = {{0.0, 0.0}};
    TdlChannel ch(flat, 0.0, 3000.0, 31);
    const double fs = 15.36e6;

    cvec x(2048, cdouble(1.0, 0.0));
    const cvec y = ch.apply(x, fs, 777);
    double worst = 0.0;
    for (size_t t = 0; t < x.size(); t += 7)
    {
        const cdouble exact = ch.tap_gain(0, double(777 + t) / fs);
        worst = std::max(worst, std::abs(y[t] - exact));
    }
    CHECK(worst < 1e-3); // -60 dB interpolation error at 3 kHz Doppler
}

TEST_CASE("static tdl matches its frequency response through ofdm", "[channel]")
{
    OfdmConfig cfg;
    const size_t n_occ = 144;
    Rng rng(0x75uLL);
    std::vector<cvec> sym(1, cvec(n_occ));
    for (auto &v : sym[0])
        v = rng.cnormal(1.0);

    TdlChannel ch(tdl_c_profile(), 100e-9, 0.0, 37);
    const cvec y = ch.apply(ofdm_modulate(cfg, sym), cfg.sample_rate_hz(), 0);
    const auto back = ofdm_demodulate(cfg, y, n_occ);

    std::vector<double> bins(n_occ);
    for (size_t q = 0; q < n_occ; ++q)
        bins[q] = double(subcarrier_bin(cfg.fft_size, n_occ, q));
    const cvec h = ch.freq_response(0.0, cfg.sample_rate_hz(), cfg.fft_size, bins);
    for (size_t q = 0; q < n_occ; ++q)
        CHECK(std::abs(back[0][q] - sym[0][q] * h[q]) < 1e-9);
}

TEST_CASE("channel realization is seed deterministic", "[channel]")
{
    TdlChannel a(tdl_a_profile(), 100e-9, 100.0, 55);
    TdlChannel b(tdl_a_profile(), 100e-9, 100.0, 55);
    TdlChannel c(tdl_a_profile(), 100e-9, 100.0, 56);
    CHECK(a.tap_gain(5, 1.25) == b.tap_gain(5, 1.25));
    CHECK(a.tap_gain(5, 1.25) != c.tap_gain(5, 1.25));
}
