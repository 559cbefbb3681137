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

#ifndef MCBEAM_CHANNEL_HPP
#define MCBEAM_CHANNEL_HPP

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "matrix.hpp"
#include "rng.hpp"

namespace mcbeam {

// Narrowband geometric multipath channel: uniform linear arrays at both
// ends, uniform path angles on [0, 2pi), unit-variance circular Gaussian
// path gains, sqrt(n_tx*n_rx/n_paths) normalization so E||H||_F^2 =
// n_tx*n_rx.

struct ChannelParams {
    int n_paths = 5;
    int n_tx = 1;
    int n_rx = 1;
    double spacing = 0.5; // element spacing in wavelengths

    void validate() const
    {
        if (n_paths < 1 || n_tx < 1 || n_rx < 1)
            throw std::invalid_argument("ChannelParams: counts must be >= 1");
        if (!(spacing > 0.0))
            throw std::invalid_argument("ChannelParams: spacing must be positive");
    }
};

/// One propagation path; used directly by the deterministic test hook.
struct PathGain {
    cxd gain{1.0, 0.0};
    double aoa = 0.0; // angle of arrival (receive side)
    double aod = 0.0; // angle of departure (transmit side)
};

/// Per-user channels of one realization plus the seed that produced them.
struct ChannelSet {
    std::vector<CMat> users; // each n_rx x n_tx
    std::uint64_t seed = 0;

    int k_users() const { return int(users.size()); }
};

/// Unit-norm ULA response: entry l is (1/sqrt(n)) exp(j 2 pi spacing l sin(angle)).
inline CMat steering_vector(int n, double angle, double spacing)
{
    if (n < 1)
        throw std::invalid_argument("steering_vector: n must be >= 1");
    const double two_pi = 6.283185307179586476925286766559;
    const double scale = 1.0 / std::sqrt(double(n));
    const double phase_step = two_pi * spacing * std::sin(angle);
    CMat a(std::size_t(n), 1);
    for (int l = 0; l < n; ++l)
        a(std::size_t(l), 0) = scale * std::polar(1.0, phase_step * double(l));
    return a;
}

/// Assemble a channel from explicit path triples (test hook; the random
/// generator goes through here as well).
inline CMat channel_from_paths(const ChannelParams &params, const std::vector<PathGain> &paths)
{
    params.validate();
    if (paths.empty())
        throw std::invalid_argument("channel_from_paths: needs at least one path");
    const double scale = std::sqrt(double(params.n_tx) * double(params.n_rx) / double(paths.size()));
    CMat h(std::size_t(params.n_rx), std::size_t(params.n_tx));
    for (const PathGain &p : paths)
    {
        const CMat arx = steering_vector(params.n_rx, p.aoa, params.spacing);
        const CMat atx = steering_vector(params.n_tx, p.aod, params.spacing);
        const cxd g = scale * p.gain;
        for (std::size_t i = 0; i < h.rows(); ++i)
            for (std::size_t j = 0; j < h.cols(); ++j)
                h(i, j) += g * arx(i, 0) * std::conj(atx(j, 0));
    }
    return h;
}

/// Draw the K per-user channels for one realization. Each user gets an
/// independent substream forked from the seed, so results do not depend on
/// generation order. Per path the draw order is gain, aoa, aod.
inline ChannelSet generate_channel(const ChannelParams &params, int k_users, std::uint64_t seed)
{
    params.validate();
    if (k_users < 1)
        throw std::invalid_argument("generate_channel: k_users must be >= 1");
    const double two_pi = 6.283185307179586476925286766559;
    ChannelSet set;
    set.seed = seed;
    set.users.reserve(std::size_t(k_users));
    for (int u = 0; u < k_users; ++u)
    {
        Rng rng(mix_seed(seed, std::uint64_t(u)));
        std::vector<PathGain> paths(std::size_t(params.n_paths));
        for (PathGain &p : paths)
        {
            p.gain = rng.complex_gaussian();
            p.aoa = two_pi * rng.uniform01();
            p.aod = two_pi * rng.uniform01();
        }
        set.users.push_back(channel_from_paths(params, paths));
    }
    return set;
}

} // namespace mcbeam

#endif // MCBEAM_CHANNEL_HPP
