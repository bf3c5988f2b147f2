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

#ifndef PDCCHLAB_RNG_HPP
#define PDCCHLAB_RNG_HPP

#include <array>
#include <cmath>
#include <cstdint>

#include "common.hpp"

// Deterministic random number generation. Standard library distributions are
// implementation-defined, which would break byte-identical results across
// platforms, so normals and uniforms are generated explicitly here.

namespace pdcchlab
{

// splitmix64, used for seed derivation and stream splitting.
inline uint64_t splitmix64(uint64_t &state)
{
    uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// Derives an independent stream seed from a base seed and a sequence of tags.
inline uint64_t derive_seed(uint64_t base, std::initializer_list<uint64_t> tags)
{
    uint64_t s = base;
    uint64_t out = splitmix64(s);
    for (uint64_t t : tags)
    {
        s = out ^ (t + 0x9E3779B97F4A7C15ull + (out << 6) + (out >> 2));
        out = splitmix64(s);
    }
    return out;
}

// xoshiro256++ stream generator, seeded via splitmix64.
class Rng
{
  public:
    explicit Rng(uint64_t seed)
    {
        uint64_t s = seed;
        for (auto &w : state_)
            w = splitmix64(s);
        have_cached_normal_ = false;
        cached_normal_ = 0.0;
    }

    uint64_t next_u64()
    {
        const uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform in [0, 1), 53-bit resolution.
    double uniform()
    {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    uint8_t bit() { return static_cast<uint8_t>(next_u64() >> 63); }

    BitVec bits(size_t n)
    {
        BitVec v(n);
        for (size_t i = 0; i < n; ++i)
            v[i] = bit();
        return v;
    }

    // Standard normal via Box-Muller; caches the second deviate.
    double normal()
    {
        if (have_cached_normal_)
        {
            have_cached_normal_ = false;
            return cached_normal_;
        }
        double u1 = uniform();
        while (u1 <= 0.0)
            u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        cached_normal_ = r * std::sin(a);
        have_cached_normal_ = true;
        return r * std::cos(a);
    }

    // Circularly symmetric complex normal with total variance `var`.
    cdouble cnormal(double var = 1.0)
    {
        const double s = std::sqrt(var * 0.5);
        const double re = normal();
        const double im = normal();
        return cdouble(s * re, s * im);
    }

  private:
    static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::array<uint64_t, 4> state_;
    double cached_normal_;
    bool have_cached_normal_;
};

} // namespace pdcchlab

#endif
