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
//
// Semidefinite-relaxation baseline with constant-modulus recovery. Each of
// the three blocks (analog precoder, digital precoder, combiners) is lifted
// to a trace-form SDP, solved, and a feasible point is recovered by
// randomization: the analog block factors the lifted solution and quantizes
// phases of q_n^H u against the transmit alphabet over random unit-sphere
// probes u; the digital and combiner blocks use Gaussian covariance
// sampling plus the principal-eigenvector candidate. The blocks alternate
// for a fixed number of rounds while an incumbent keeps the best feasible
// solution by minimum SNR.

#ifndef MCBEAM_SDR_C_HPP
#define MCBEAM_SDR_C_HPP

#include <chrono>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "channel.hpp"
#include "lb_gdm.hpp"
#include "matrix.hpp"
#include "rng.hpp"
#include "sdp.hpp"
#include "system.hpp"

namespace mcbeam {

struct SdrParams {
    int n_rand = 50;
    int n_iter_sdr = 3;
    std::uint64_t seed = 0;

    void validate() const
    {
        if (n_rand < 1)
            throw std::invalid_argument("SdrParams: n_rand must be >= 1");
        if (n_iter_sdr < 1)
            throw std::invalid_argument("SdrParams: n_iter_sdr must be >= 1");
    }
};

struct AnalogLift {
    CMat p; // m^T kron I, maps vec(F) to F m
    CMat r; // P^H H^H w w^H H P, rank one
};

/// Lift the analog block for one user: F m = P vec(F) with P = m^T kron I.
inline AnalogLift lift_analog(const CMat &m, const CMat &h_k, const CMat &w_k, int n_tx)
{
    AnalogLift out;
    out.p = kron(transpose(m), CMat::identity(std::size_t(n_tx)));
    const CMat row = matmul(matmul(hermitian(w_k), h_k), out.p); // w^H H P, 1 x n
    const CMat r_col = hermitian(row);
    out.r = outer(r_col, r_col);
    return out;
}

namespace detail {

inline CMat unit_sphere_vector(int dim, Rng &rng)
{
    for (int attempt = 0; attempt < 100; ++attempt)
    {
        CMat v(std::size_t(dim), 1);
        for (int i = 0; i < dim; ++i)
            v(std::size_t(i), 0) = rng.complex_gaussian();
        const double n = frobenius_norm(v);
        if (n > 1e-12)
        {
            for (int i = 0; i < dim; ++i)
                v(std::size_t(i), 0) /= n;
            return v;
        }
    }
    throw std::runtime_error("unit_sphere_vector: degenerate draws");
}

// Top-k factor G (n x k) with D ~= G G^H, by power iteration and deflation.
// Columns are ordered by decreasing eigenvalue; trailing columns stay zero
// when the numerical rank is smaller than k.
inline CMat psd_top_factor(const CMat &d, int k)
{
    const std::size_t n = d.rows();
    CMat g(n, std::size_t(k));
    CMat work = d;
    double lam0 = 0.0;
    for (int s = 0; s < k; ++s)
    {
        bool conv = false;
        auto [lam, v] = power_iteration_estimate(work, 4000, 1e-9, &conv);
        if (s == 0)
            lam0 = lam;
        if (!(lam > 0.0) || lam <= 1e-12 * std::max(lam0, 1e-30))
            break;
        const double sq = std::sqrt(lam);
        for (std::size_t i = 0; i < n; ++i)
            g(i, std::size_t(s)) = sq * v(i, 0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                work(i, j) -= lam * v(i, 0) * std::conj(v(j, 0));
    }
    return g;
}

inline double min_snr_direct(const ChannelSet &channels, const CMat &f, const CMat &m,
                             const std::vector<CMat> &combiners, double sigma2)
{
    const CMat fm = matmul(f, m);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < channels.users.size(); ++k)
    {
        const CMat y = matmul(channels.users[k], fm);
        const CMat &w = combiners[k];
        const double w2 = frobenius_norm(w);
        best = std::min(best, std::norm(inner(w, y)) / (sigma2 * w2 * w2));
    }
    return best;
}

inline void require_optimal(const SdpSolution &sol, const char *what)
{
    if (sol.status != SdpStatus::optimal)
        throw std::runtime_error(std::string(what) + ": SDP solve did not reach optimality");
}

} // namespace detail

/// SDP for the analog block: max t s.t. Tr(R_k D) >= t, [D]_nn = delta_tx,
/// D PSD, with D standing in for vec(F) vec(F)^H.
inline CMat solve_sdr_analog(const ChannelSet &channels, const CMat &m, const std::vector<CMat> &combiners,
                             const SystemConfig &cfg)
{
    SdpProblem prob;
    prob.n = cfg.n_tx * cfg.n_rf_tx;
    prob.diag_value = cfg.delta_tx();
    for (std::size_t k = 0; k < channels.users.size(); ++k)
        prob.ineq.push_back(lift_analog(m, channels.users[k], combiners[k], cfg.n_tx).r);
    SdpSolution sol = solve_maxmin_sdp(prob);
    detail::require_optimal(sol, "solve_sdr_analog");
    return sol.x;
}

/// Phase recovery for the analog block. D is factored through its top
/// n_rf_tx eigenpairs, giving factor columns q_n; for each random unit
/// probe u, entry n of vec(F) is the alphabet member closest in phase to
/// conj(q_n^H u). Candidates are scored by minimum SNR with the digital
/// precoder renormalized per candidate; the best one wins (first wins ties).
inline CMat recover_analog(const CMat &d, const ChannelSet &channels, const CMat &m,
                           const std::vector<CMat> &combiners, const SystemConfig &cfg,
                           const SdrParams &params, Rng &rng)
{
    const int n = cfg.n_tx * cfg.n_rf_tx;
    if (d.rows() != std::size_t(n) || d.cols() != std::size_t(n))
        throw std::invalid_argument("recover_analog: lifted matrix has wrong shape");
    const CMat g = detail::psd_top_factor(d, cfg.n_rf_tx);
    const PhaseAlphabet fa = cfg.tx_alphabet();
    double best_gamma = -1.0;
    CMat best_f;
    for (int c = 0; c < params.n_rand; ++c)
    {
        const CMat u = detail::unit_sphere_vector(cfg.n_rf_tx, rng);
        CMat f_vec(std::size_t(n), 1);
        for (int i = 0; i < n; ++i)
        {
            cxd z(0.0, 0.0);
            for (int r = 0; r < cfg.n_rf_tx; ++r)
                z += std::conj(g(std::size_t(i), std::size_t(r))) * u(std::size_t(r), 0);
            f_vec(std::size_t(i), 0) = project_to_alphabet(std::conj(z), fa);
        }
        const CMat f_cand = unvec(f_vec, std::size_t(cfg.n_tx), std::size_t(cfg.n_rf_tx));
        CMat m_cand;
        try
        {
            m_cand = power_normalize_digital(m, f_cand, cfg.p_tx_max);
        }
        catch (const std::invalid_argument &)
        {
            continue; // F m vanished for this candidate
        }
        const double gamma = detail::min_snr_direct(channels, f_cand, m_cand, combiners, cfg.sigma2);
        if (gamma > best_gamma)
        {
            best_gamma = gamma;
            best_f = f_cand;
        }
    }
    if (best_f.empty())
        throw std::runtime_error("recover_analog: no usable candidate");
    return best_f;
}

/// SDP for the digital block: max t s.t. Tr(Z_k M) >= t, Tr(Y M) = P_tx,
/// M PSD, with Y = F^H F and Z_k = F^H H_k^H w_k w_k^H H_k F.
inline CMat solve_sdr_digital(const ChannelSet &channels, const CMat &f, const std::vector<CMat> &combiners,
                              const SystemConfig &cfg)
{
    SdpProblem prob;
    prob.n = int(f.cols());
    prob.eq.emplace_back(matmul(hermitian(f), f), cfg.p_tx_max);
    for (std::size_t k = 0; k < channels.users.size(); ++k)
    {
        const CMat z_col = matmul(hermitian(f), matmul(hermitian(channels.users[k]), combiners[k]));
        prob.ineq.push_back(outer(z_col, z_col));
    }
    SdpSolution sol = solve_maxmin_sdp(prob);
    detail::require_optimal(sol, "solve_sdr_digital");
    return sol.x;
}

/// Covariance-sampling recovery for the digital block: the principal
/// eigenvector candidate first, then n_rand Gaussian samples with
/// covariance M; every candidate is rescaled to meet the transmit power
/// budget and scored by minimum SNR.
inline CMat recover_digital(const CMat &m_lift, const ChannelSet &channels, const CMat &f,
                            const std::vector<CMat> &combiners, const SystemConfig &cfg,
                            const SdrParams &params, Rng &rng)
{
    const std::size_t n = m_lift.rows();
    double best_gamma = -1.0;
    CMat best_m;
    const auto consider = [&](const CMat &raw) {
        CMat cand;
        try
        {
            cand = power_normalize_digital(raw, f, cfg.p_tx_max);
        }
        catch (const std::invalid_argument &)
        {
            return;
        }
        const double gamma = detail::min_snr_direct(channels, f, cand, combiners, cfg.sigma2);
        if (gamma > best_gamma)
        {
            best_gamma = gamma;
            best_m = cand;
        }
    };
    try
    {
        auto [lam, v] = principal_eigenpair(m_lift);
        (void)lam;
        consider(v);
    }
    catch (const convergence_error &)
    {
        // fall through to sampling
    }
    const CMat l_factor = transpose(cholesky_psd(m_lift)); // M = L L^H
    for (int c = 0; c < params.n_rand; ++c)
    {
        CMat gvec(n, 1);
        for (std::size_t i = 0; i < n; ++i)
            gvec(i, 0) = rng.complex_gaussian();
        consider(matmul(l_factor, gvec));
    }
    if (best_m.empty())
        throw std::runtime_error("recover_digital: no usable candidate");
    return best_m;
}

/// Per-user SDPs for the combiner block: max t s.t. Tr(C_k W) >= t,
/// Tr(W) = P_rx, W PSD, with C_k = H_k F m m^H F^H H_k^H.
inline std::vector<CMat> solve_sdr_combiner(const ChannelSet &channels, const CMat &f, const CMat &m,
                                            const SystemConfig &cfg)
{
    std::vector<CMat> out;
    out.reserve(channels.users.size());
    const CMat fm = matmul(f, m);
    for (const CMat &h : channels.users)
    {
        const CMat g = matmul(h, fm);
        SdpProblem prob;
        prob.n = cfg.n_rx;
        prob.ineq.push_back(outer(g, g));
        prob.eq.emplace_back(CMat::identity(std::size_t(cfg.n_rx)), cfg.p_rx_max);
        SdpSolution sol = solve_maxmin_sdp(prob);
        detail::require_optimal(sol, "solve_sdr_combiner");
        out.push_back(sol.x);
    }
    return out;
}

/// Recovery for one user's combiner: eigenvector candidate plus Gaussian
/// samples, every candidate projected entrywise onto the receive alphabet,
/// scored by that user's own SNR.
inline CMat recover_combiner(const CMat &w_lift, const CMat &h_k, const CMat &f, const CMat &m,
                             const SystemConfig &cfg, const SdrParams &params, Rng &rng)
{
    const PhaseAlphabet wa = cfg.rx_alphabet();
    const CMat g = matmul(h_k, matmul(f, m));
    double best_val = -1.0;
    CMat best_w;
    const auto consider = [&](const CMat &raw) {
        CMat cand(raw.rows(), 1);
        for (std::size_t i = 0; i < raw.rows(); ++i)
            cand(i, 0) = project_to_alphabet(raw(i, 0), wa);
        const double val = std::norm(inner(cand, g));
        if (val > best_val)
        {
            best_val = val;
            best_w = cand;
        }
    };
    try
    {
        auto [lam, v] = principal_eigenpair(w_lift);
        (void)lam;
        consider(std::sqrt(cfg.p_rx_max) * v);
    }
    catch (const convergence_error &)
    {
    }
    const CMat l_factor = transpose(cholesky_psd(w_lift));
    for (int c = 0; c < params.n_rand; ++c)
    {
        CMat gvec(w_lift.rows(), 1);
        for (std::size_t i = 0; i < w_lift.rows(); ++i)
            gvec(i, 0) = rng.complex_gaussian();
        consider(matmul(l_factor, gvec));
    }
    return best_w;
}

/// Full baseline: alternate analog, digital and combiner blocks for
/// n_iter_sdr rounds; in fully-digital mode the analog stage is skipped and
/// F stays the identity. The incumbent keeps the best solution that passes
/// the mode's feasibility check; stage failures fall back to it.
inline std::pair<HybridSolution, SolveTrace> run_sdr_c(const ChannelSet &channels, const SystemConfig &cfg,
                                                       const SdrParams &params, PrecoderMode mode)
{
    cfg.validate();
    params.validate();
    if (channels.k_users() != cfg.k_users)
        throw std::invalid_argument("run_sdr_c: channel count does not match k_users");
    const auto t_start = std::chrono::steady_clock::now();
    Rng rng(params.seed);
    const int K = cfg.k_users;
    const int n_rf = (mode == PrecoderMode::hybrid) ? cfg.n_rf_tx : cfg.n_tx;

    CMat f = (mode == PrecoderMode::hybrid) ? initial_analog(cfg) : CMat::identity(std::size_t(cfg.n_tx));
    CMat m(std::size_t(n_rf), 1);
    m(0, 0) = 1.0;
    std::vector<CMat> combiners(std::size_t(K), CMat(std::size_t(cfg.n_rx), 1));
    for (CMat &wk : combiners)
        wk(0, 0) = 1.0;

    SolveTrace trace;
    double gamma_best = -1.0;
    HybridSolution opt;
    bool have_opt = false;
    const auto consider = [&]() {
        HybridSolution cur{mode, f, m, combiners};
        if (check_feasibility(cur, cfg).ok())
        {
            const double gamma = min_snr(channels, cur, cfg.sigma2);
            if (gamma >= gamma_best)
            {
                gamma_best = gamma;
                opt = cur;
                have_opt = true;
            }
        }
        trace.gamma_trace.push_back(have_opt ? gamma_best : 0.0);
    };

    for (int round = 0; round < params.n_iter_sdr; ++round)
    {
        if (mode == PrecoderMode::hybrid)
        {
            try
            {
                const CMat d = solve_sdr_analog(channels, m, combiners, cfg);
                f = recover_analog(d, channels, m, combiners, cfg, params, rng);
                m = power_normalize_digital(m, f, cfg.p_tx_max);
            }
            catch (const std::exception &)
            {
                // keep the previous analog precoder
            }
            consider();
        }
        try
        {
            const CMat m_lift = solve_sdr_digital(channels, f, combiners, cfg);
            m = recover_digital(m_lift, channels, f, combiners, cfg, params, rng);
        }
        catch (const std::exception &)
        {
        }
        consider();
        for (int k = 0; k < K; ++k)
        {
            try
            {
                const CMat g = matmul(channels.users[std::size_t(k)], matmul(f, m));
                SdpProblem prob;
                prob.n = cfg.n_rx;
                prob.ineq.push_back(outer(g, g));
                prob.eq.emplace_back(CMat::identity(std::size_t(cfg.n_rx)), cfg.p_rx_max);
                SdpSolution wsol = solve_maxmin_sdp(prob);
                detail::require_optimal(wsol, "run_sdr_c combiner");
                combiners[std::size_t(k)] = recover_combiner(wsol.x, channels.users[std::size_t(k)], f, m,
                                                             cfg, params, rng);
            }
            catch (const std::exception &)
            {
            }
        }
        consider();
    }

    if (!have_opt)
    {
        // Nothing feasible came out of the alternation (all stages failed);
        // repair the current point by projection and renormalization.
        const PhaseAlphabet fa = cfg.tx_alphabet();
        if (mode == PrecoderMode::hybrid)
            for (std::size_t i = 0; i < f.rows(); ++i)
                for (std::size_t j = 0; j < f.cols(); ++j)
                    f(i, j) = project_to_alphabet(f(i, j), fa);
        const PhaseAlphabet wa = cfg.rx_alphabet();
        for (CMat &wk : combiners)
            for (std::size_t i = 0; i < wk.rows(); ++i)
                wk(i, 0) = project_to_alphabet(wk(i, 0), wa);
        m = power_normalize_digital(m, f, cfg.p_tx_max);
        opt = HybridSolution{mode, f, m, combiners};
    }
    trace.wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t_start).count();
    return {opt, trace};
}

} // namespace mcbeam

#endif // MCBEAM_SDR_C_HPP
