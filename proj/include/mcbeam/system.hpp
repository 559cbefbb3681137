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

#ifndef MCBEAM_SYSTEM_HPP
#define MCBEAM_SYSTEM_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "channel.hpp"
#include "matrix.hpp"
#include "rng.hpp"

namespace mcbeam {

namespace detail {

// Single source of truth for alphabet members. Kept out of line on purpose:
// the linker folds all inline copies into one, so the projector and the
// feasibility checker observe bit-identical values and exact equality tests
// on emitted phases are valid.
[[gnu::noinline]] inline cxd alphabet_member(double modulus, int index, int size)
{
    const double two_pi = 6.283185307179586476925286766559;
    return std::polar(modulus, two_pi * double(index) / double(size));
}

} // namespace detail

/// Finite set of constant-modulus phase rotations: modulus * exp(j 2 pi l / size).
struct PhaseAlphabet {
    double modulus = 1.0;
    int size = 2;

    cxd element(int index) const { return detail::alphabet_member(modulus, index, size); }
};

enum class PrecoderMode { hybrid, fully_digital };

/// All scenario dimensions, powers, alphabet sizes in one validated record.
struct SystemConfig {
    int n_tx = 1;
    int n_rx = 1;
    int n_rf_tx = 1;
    int k_users = 1;
    int l_tx = 8;
    int l_rx = 4;
    double p_tx_max = 1.0;
    double p_rx_max = 0.01;
    double sigma2 = 1.0;

    double delta_tx() const { return 1.0 / (double(n_rf_tx) * double(n_tx)); }
    double delta_rx() const { return p_rx_max / double(n_rx); }

    PhaseAlphabet tx_alphabet() const { return {std::sqrt(delta_tx()), l_tx}; }
    PhaseAlphabet rx_alphabet() const { return {std::sqrt(delta_rx()), l_rx}; }

    void validate() const
    {
        if (n_tx < 1 || n_rx < 1 || n_rf_tx < 1 || k_users < 1)
            throw std::invalid_argument("SystemConfig: counts must be >= 1");
        if (n_rf_tx > n_tx)
            throw std::invalid_argument("SystemConfig: n_rf_tx must not exceed n_tx");
        if (l_tx < 2 || l_rx < 2)
            throw std::invalid_argument("SystemConfig: alphabet sizes must be >= 2");
        if (!(p_tx_max > 0.0) || !(p_rx_max > 0.0) || !(sigma2 > 0.0))
            throw std::invalid_argument("SystemConfig: powers and noise must be positive");
    }
};

/// Decision variables: analog precoder F (n_tx x n_rf_tx), digital precoder
/// m, per-user combiners w_k. Fully-digital solutions store the precoding
/// vector in `digital` with `analog` pinned to the identity (n_rf_tx = n_tx).
struct HybridSolution {
    PrecoderMode mode = PrecoderMode::hybrid;
    CMat analog;
    CMat digital;
    std::vector<CMat> combiners;
};

struct SolveTrace {
    std::vector<double> gamma_trace; // incumbent objective after each step
    double wall_ms = 0.0;
};

/// Nearest alphabet member by angular distance. Ties break toward the
/// smaller index; z = 0 maps to index 0.
inline cxd project_to_alphabet(cxd z, const PhaseAlphabet &alphabet)
{
    if (z == cxd(0.0, 0.0))
        return alphabet.element(0);
    const double two_pi = 6.283185307179586476925286766559;
    const int L = alphabet.size;
    double raw = std::arg(z) * double(L) / two_pi; // in [-L/2, L/2]
    if (raw < 0.0)
        raw += double(L);
    if (raw >= double(L)) // -eps wrapped onto L exactly
        raw -= double(L);
    int lo = int(std::floor(raw));
    if (lo >= L)
        lo = L - 1;
    const int hi = (lo + 1) % L;
    double d_lo = raw - double(lo);
    if (d_lo < 0.0)
        d_lo = 0.0;
    const double d_hi = 1.0 - d_lo;
    int pick;
    if (d_lo < d_hi)
        pick = lo;
    else if (d_hi < d_lo)
        pick = hi;
    else
        pick = std::min(lo, hi);
    return alphabet.element(pick);
}

/// Scale m so that ||F m||^2 equals p_tx_max, direction preserved.
inline CMat power_normalize_digital(const CMat &m, const CMat &f, double p_tx_max)
{
    const CMat fm = matmul(f, m);
    const double nrm = frobenius_norm(fm);
    if (!(nrm > 0.0))
        throw std::invalid_argument("power_normalize_digital: F*m is zero");
    return (std::sqrt(p_tx_max) / nrm) * m;
}

/// SNR of one user: |w^H H F m|^2 / (sigma2 ||w||^2).
inline double snr(const CMat &h, const HybridSolution &sol, int user, double sigma2)
{
    const CMat &w = sol.combiners.at(std::size_t(user));
    const double w2 = frobenius_norm(w);
    if (!(w2 > 0.0))
        throw std::invalid_argument("snr: zero combiner");
    const CMat fm = matmul(sol.analog, sol.digital);
    const CMat y = matmul(h, fm);
    const cxd num = inner(w, y);
    return std::norm(num) / (sigma2 * w2 * w2);
}

inline std::vector<double> all_snrs(const ChannelSet &channels, const HybridSolution &sol, double sigma2)
{
    std::vector<double> out(channels.users.size());
    for (std::size_t k = 0; k < channels.users.size(); ++k)
        out[k] = snr(channels.users[k], sol, int(k), sigma2);
    return out;
}

inline double min_snr(const ChannelSet &channels, const HybridSolution &sol, double sigma2)
{
    if (channels.users.empty())
        throw std::invalid_argument("min_snr: empty channel set");
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < channels.users.size(); ++k)
        best = std::min(best, snr(channels.users[k], sol, int(k), sigma2));
    return best;
}

/// Sum capacity: sum_k log2(1 + snr_k).
inline double spectral_efficiency(const std::vector<double> &snrs)
{
    double se = 0.0;
    for (double g : snrs)
    {
        if (g < 0.0)
            throw std::invalid_argument("spectral_efficiency: negative SNR");
        se += std::log2(1.0 + g);
    }
    return se;
}

/// Uniformly random feasible solution: alphabet-uniform analog precoder and
/// combiners, Gaussian digital precoder scaled to the power budget. In
/// fully-digital mode the analog part is the identity and only the power
/// constraint applies to m.
inline HybridSolution random_feasible(const SystemConfig &cfg, Rng &rng,
                                      PrecoderMode mode = PrecoderMode::hybrid)
{
    cfg.validate();
    HybridSolution sol;
    sol.mode = mode;
    const int n_rf = (mode == PrecoderMode::hybrid) ? cfg.n_rf_tx : cfg.n_tx;
    if (mode == PrecoderMode::hybrid)
    {
        const PhaseAlphabet fa = cfg.tx_alphabet();
        sol.analog = CMat(std::size_t(cfg.n_tx), std::size_t(n_rf));
        for (std::size_t i = 0; i < sol.analog.rows(); ++i)
            for (std::size_t j = 0; j < sol.analog.cols(); ++j)
                sol.analog(i, j) = fa.element(int(rng.uniform_index(std::uint64_t(fa.size))));
    }
    else
    {
        sol.analog = CMat::identity(std::size_t(cfg.n_tx));
    }
    for (int attempt = 0;; ++attempt)
    {
        CMat m(std::size_t(n_rf), 1);
        for (std::size_t i = 0; i < m.rows(); ++i)
            m(i, 0) = rng.complex_gaussian();
        if (frobenius_norm(matmul(sol.analog, m)) > 1e-12)
        {
            sol.digital = power_normalize_digital(m, sol.analog, cfg.p_tx_max);
            break;
        }
        if (attempt >= 100)
            throw std::runtime_error("random_feasible: degenerate F*m after 100 redraws");
    }
    const PhaseAlphabet wa = cfg.rx_alphabet();
    sol.combiners.resize(std::size_t(cfg.k_users));
    for (CMat &w : sol.combiners)
    {
        w = CMat(std::size_t(cfg.n_rx), 1);
        for (std::size_t i = 0; i < w.rows(); ++i)
            w(i, 0) = wa.element(int(rng.uniform_index(std::uint64_t(wa.size))));
    }
    return sol;
}

struct FeasibilityReport {
    bool shapes_ok = false;
    bool entries_finite = false;
    bool analog_phases_exact = false;   // identity check in fully-digital mode
    bool combiner_phases_exact = false;
    double tx_power_residual = 0.0; // relative |  ||Fm||^2 - P_tx | / P_tx
    double rx_power_residual = 0.0; // max over users, relative to P_rx

    bool ok() const
    {
        return shapes_ok && entries_finite && analog_phases_exact && combiner_phases_exact &&
               tx_power_residual < 1e-9 && rx_power_residual < 1e-9;
    }
};

namespace detail {

inline bool exact_alphabet_entry(cxd z, const PhaseAlphabet &alphabet)
{
    const double two_pi = 6.283185307179586476925286766559;
    double raw = std::arg(z) * double(alphabet.size) / two_pi;
    const int guess = int(std::llround(raw));
    for (int d = -1; d <= 1; ++d)
    {
        int idx = (guess + d) % alphabet.size;
        if (idx < 0)
            idx += alphabet.size;
        if (z == alphabet.element(idx))
            return true;
    }
    return false;
}

} // namespace detail

/// Constraint check for emitted solutions. Phase membership is exact (bit
/// equality against the alphabet table), power residuals are relative.
inline FeasibilityReport check_feasibility(const HybridSolution &sol, const SystemConfig &cfg)
{
    FeasibilityReport rep;
    const int n_rf = (sol.mode == PrecoderMode::hybrid) ? cfg.n_rf_tx : cfg.n_tx;
    rep.shapes_ok = sol.analog.rows() == std::size_t(cfg.n_tx) && sol.analog.cols() == std::size_t(n_rf) &&
                    sol.digital.rows() == std::size_t(n_rf) && sol.digital.cols() == 1 &&
                    sol.combiners.size() == std::size_t(cfg.k_users);
    if (rep.shapes_ok)
        for (const CMat &w : sol.combiners)
            if (w.rows() != std::size_t(cfg.n_rx) || w.cols() != 1)
                rep.shapes_ok = false;
    if (!rep.shapes_ok)
        return rep;

    rep.entries_finite = is_finite(sol.analog) && is_finite(sol.digital);
    for (const CMat &w : sol.combiners)
        rep.entries_finite = rep.entries_finite && is_finite(w);

    if (sol.mode == PrecoderMode::hybrid)
    {
        const PhaseAlphabet fa = cfg.tx_alphabet();
        rep.analog_phases_exact = true;
        for (std::size_t i = 0; i < sol.analog.rows(); ++i)
            for (std::size_t j = 0; j < sol.analog.cols(); ++j)
                if (!detail::exact_alphabet_entry(sol.analog(i, j), fa))
                    rep.analog_phases_exact = false;
    }
    else
    {
        rep.analog_phases_exact = true;
        for (std::size_t i = 0; i < sol.analog.rows(); ++i)
            for (std::size_t j = 0; j < sol.analog.cols(); ++j)
                if (sol.analog(i, j) != (i == j ? cxd(1.0, 0.0) : cxd(0.0, 0.0)))
                    rep.analog_phases_exact = false;
    }

    const PhaseAlphabet wa = cfg.rx_alphabet();
    rep.combiner_phases_exact = true;
    double rx_resid = 0.0;
    for (const CMat &w : sol.combiners)
    {
        for (std::size_t i = 0; i < w.rows(); ++i)
            if (!detail::exact_alphabet_entry(w(i, 0), wa))
                rep.combiner_phases_exact = false;
        const double p = frobenius_norm(w);
        rx_resid = std::max(rx_resid, std::abs(p * p - cfg.p_rx_max) / cfg.p_rx_max);
    }
    rep.rx_power_residual = rx_resid;

    const double tx = frobenius_norm(matmul(sol.analog, sol.digital));
    rep.tx_power_residual = std::abs(tx * tx - cfg.p_tx_max) / cfg.p_tx_max;
    return rep;
}

} // namespace mcbeam

#endif // MCBEAM_SYSTEM_HPP
