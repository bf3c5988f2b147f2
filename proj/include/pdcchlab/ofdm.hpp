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

#ifndef PDCCHLAB_OFDM_HPP
#define PDCCHLAB_OFDM_HPP

#include <cmath>
#include <cstdint>
#include <vector>

#include "common.hpp"

namespace pdcchlab
{

// CP-OFDM numerology. The useful symbol length is fixed by the subcarrier
// spacing (T_U = 1/scs); the FFT size only sets the sample rate.
struct OfdmConfig
{
    size_t mu = 0;        // subcarrier spacing 15 kHz * 2^mu
    bool extended_cp = false;
    size_t fft_size = 1024;

    void validate() const
    {
        require(mu <= 4, "OfdmConfig: mu out of range");
        require(fft_size >= 128 && fft_size <= 8192 && (fft_size & (fft_size - 1)) == 0,
                "OfdmConfig: fft_size must be a power of two in [128, 8192]");
    }

    double scs_hz() const { return 15e3 * static_cast<double>(size_t(1) << mu); }
    double sample_rate_hz() const { return scs_hz() * static_cast<double>(fft_size); }
    double t_u_s() const { return 1.0 / scs_hz(); }
    // Normal CP of the non-initial symbols (144/2048 of T_U); extended CP is
    // 512/2048 of T_U.
    double t_cp_s() const { return (extended_cp ? 512.0 : 144.0) / 2048.0 * t_u_s(); }
    size_t cp_samples() const
    {
        return static_cast<size_t>(std::llround(t_cp_s() * sample_rate_hz()));
    }
    size_t symbol_samples() const { return fft_size + cp_samples(); }
};

// Radix-2 iterative FFT with cached twiddles and bit-reversal table, unitary
// scaling in both directions.
class Fft
{
  public:
    explicit Fft(size_t n) : n_(n)
    {
        require(n >= 2 && (n & (n - 1)) == 0, "Fft: size must be a power of two");
        rev_.resize(n);
        size_t lg = 0;
        while ((size_t(1) << lg) < n)
            ++lg;
        for (size_t i = 0; i < n; ++i)
        {
            size_t r = 0;
            for (size_t b = 0; b < lg; ++b)
                if (i & (size_t(1) << b))
                    r |= size_t(1) << (lg - 1 - b);
            rev_[i] = r;
        }
        tw_.resize(n / 2);
        const double step = -2.0 * 3.14159265358979323846264338327950 / static_cast<double>(n);
        for (size_t k = 0; k < n / 2; ++k)
            tw_[k] = cdouble(std::cos(step * static_cast<double>(k)),
                             std::sin(step * static_cast<double>(k)));
        scale_ = 1.0 / std::sqrt(static_cast<double>(n));
    }

    void forward(cvec &x) const { run(x, false); }
    void inverse(cvec &x) const { run(x, true); }

    size_t size() const { return n_; }

  private:
    void run(cvec &x, bool inv) const
    {
        require(x.size() == n_, "Fft: buffer size mismatch");
        for (size_t i = 0; i < n_; ++i)
            if (rev_[i] > i)
                std::swap(x[i], x[rev_[i]]);
        for (size_t len = 2; len <= n_; len <<= 1)
        {
            const size_t half = len >> 1;
            const size_t stride = n_ / len;
            for (size_t base = 0; base < n_; base += len)
                for (size_t k = 0; k < half; ++k)
                {
                    cdouble w = tw_[k * stride];
                    if (inv)
                        w = std::conj(w);
                    const cdouble t = x[base + k + half] * w;
                    x[base + k + half] = x[base + k] - t;
                    x[base + k] += t;
                }
        }
        for (auto &v : x)
            v *= scale_;
    }

    size_t n_;
    std::vector<size_t> rev_;
    cvec tw_;
    double scale_;
};

// FFT bin carrying occupied subcarrier q, block centered on DC.
inline size_t subcarrier_bin(size_t fft_size, size_t n_occupied, size_t q)
{
    require(q < n_occupied && n_occupied <= fft_size, "subcarrier_bin: index out of range");
    return (q + fft_size - n_occupied / 2) % fft_size;
}

// symbols[s] holds the n_occupied frequency-domain values of OFDM symbol s.
// Output is the CP-prefixed time-domain burst, symbols back to back. The
// caller may pass a prebuilt Fft of matching size to amortize table setup.
inline cvec ofdm_modulate(const OfdmConfig &cfg, const std::vector<cvec> &symbols,
                          const Fft &fft)
{
    cfg.validate();
    require(fft.size() == cfg.fft_size, "ofdm_modulate: FFT size mismatch");
    require(!symbols.empty(), "ofdm_modulate: no symbols");
    const size_t n_occ = symbols[0].size();
    require(n_occ >= 2 && n_occ % 2 == 0 && n_occ <= cfg.fft_size,
            "ofdm_modulate: bad occupied carrier count");

    const size_t cp = cfg.cp_samples();
    cvec out;
    out.reserve(symbols.size() * cfg.symbol_samples());
    cvec buf(cfg.fft_size);
    for (const cvec &sym : symbols)
    {
        require(sym.size() == n_occ, "ofdm_modulate: ragged symbol sizes");
        std::fill(buf.begin(), buf.end(), cdouble(0.0, 0.0));
        for (size_t q = 0; q < n_occ; ++q)
            buf[subcarrier_bin(cfg.fft_size, n_occ, q)] = sym[q];
        fft.inverse(buf);
        out.insert(out.end(), buf.end() - static_cast<long>(cp), buf.end());
        out.insert(out.end(), buf.begin(), buf.end());
    }
    return out;
}

inline cvec ofdm_modulate(const OfdmConfig &cfg, const std::vector<cvec> &symbols)
{
    return ofdm_modulate(cfg, symbols, Fft(cfg.fft_size));
}

// Inverse of ofdm_modulate for an integer number of symbols.
inline std::vector<cvec> ofdm_demodulate(const OfdmConfig &cfg, const cvec &samples,
                                         size_t n_occupied, const Fft &fft)
{
    cfg.validate();
    require(fft.size() == cfg.fft_size, "ofdm_demodulate: FFT size mismatch");
    require(n_occupied >= 2 && n_occupied % 2 == 0 && n_occupied <= cfg.fft_size,
            "ofdm_demodulate: bad occupied carrier count");
    const size_t sym_len = cfg.symbol_samples();
    require(!samples.empty() && samples.size() % sym_len == 0,
            "ofdm_demodulate: sample count not a whole number of symbols");

    const size_t cp = cfg.cp_samples();
    std::vector<cvec> out(samples.size() / sym_len);
    cvec buf(cfg.fft_size);
    for (size_t s = 0; s < out.size(); ++s)
    {
        const auto *base = samples.data() + s * sym_len + cp;
        buf.assign(base, base + cfg.fft_size);
        fft.forward(buf);
        out[s].resize(n_occupied);
        for (size_t q = 0; q < n_occupied; ++q)
            out[s][q] = buf[subcarrier_bin(cfg.fft_size, n_occupied, q)];
    }
    return out;
}

inline std::vector<cvec> ofdm_demodulate(const OfdmConfig &cfg, const cvec &samples,
                                         size_t n_occupied)
{
    return ofdm_demodulate(cfg, samples, n_occupied, Fft(cfg.fft_size));
}

} // namespace pdcchlab

#endif
