// SPDX-License-Identifier: Apache-2.0
//
// mcbeam: max-min fair multicast beamforming for mmWave systems
// Copyright (C) 2026 The mcbeam authors
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
// ------------------------------------------------------------------------

#ifndef MCBEAM_RNG_HPP
#define MCBEAM_RNG_HPP

#include <cmath>
#include <complex>
#include <cstdint>

namespace mcbeam {

// Self-contained random streams. The standard <random> distributions are
// implementation-defined, which would break byte-identical reproduction of
// results across toolchains, so everything here is pinned: xoshiro256++
// state, splitmix64 seeding/mixing, Box-Muller normals.

inline std::uint64_t splitmix64(std::uint64_t &state)
{
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Deterministic combiner used to derive independent substreams, e.g.
/// mix_seed(mix_seed(master, grid_index), realization_index).
inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b)
{
    std::uint64_t s = a ^ (0x9e3779b97f4a7c15ULL * (b + 0x632be59bd9b4e019ULL));
    std::uint64_t x = splitmix64(s);
    return splitmix64(s) ^ x;
}

class Rng {
  public:
    explicit Rng(std::uint64_t seed) : seed_(seed)
    {
        std::uint64_t s = seed;
        for (auto &word : state_)
            word = splitmix64(s);
    }

    std::uint64_t seed() const { return seed_; }

    /// Independent child stream; forking with distinct tags from the same
    /// parent yields unrelated sequences regardless of draw order.
    Rng fork(std::uint64_t tag) const { return Rng(mix_seed(seed_, tag)); }

    std::uint64_t next()
    {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform01() { return double(next() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, n).
    std::uint64_t uniform_index(std::uint64_t n)
    {
        return std::uint64_t((static_cast<unsigned __int128>(next()) * n) >> 64);
    }

    /// Standard normal via Box-Muller; generates pairs, caches the second.
    double gaussian()
    {
        if (have_cached_)
        {
            have_cached_ = false;
            return cached_;
        }
        double u1 = uniform01();
        while (u1 <= 0.0)
            u1 = uniform01();
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        cached_ = r * std::sin(a);
        have_cached_ = true;
        return r * std::cos(a);
    }

    /// Circularly symmetric complex normal with E|z|^2 = 1.
    std::complex<double> complex_gaussian()
    {
        const double re = gaussian();
        const double im = gaussian();
        return {re * 0.7071067811865475244, im * 0.7071067811865475244};
    }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::uint64_t state_[4] = {};
    std::uint64_t seed_ = 0;
    bool have_cached_ = false;
    double cached_ = 0.0;
};

} // namespace mcbeam

#endif // MCBEAM_RNG_HPP
