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
// Alternating gradient ascent with momentum for max-min fair multicast
// precoding. Outer explorations restart from random feasible points; inner
// exploitation steps refine the current point with momentum pulled toward
// the best solution of the previous exploration. Per sub-problem the update
// is: weighted sum of per-user unit gradients, renormalized, momentum and
// learning terms added, then projection back onto the feasible set (phase
// alphabet for F and w_k, power normalization for m).

#ifndef MCBEAM_LB_GDM_HPP
#define MCBEAM_LB_GDM_HPP

#include <chrono>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "channel.hpp"
#include "matrix.hpp"
#include "rng.hpp"
#include "system.hpp"

namespace mcbeam {

struct GdmHyperParams {
    double rho_f = 0.9;
    double rho_m = 0.9;
    double rho_w = 0.9;
    double alpha_f0 = 1.0;
    double alpha_m0 = 1.0;
    double alpha_w0 = 1.0;
    double decay = 0.98; // learning-factor multiplier per exploitation step
    double xi = 3.0;     // weight sharpness, > 0
    int n_xpr = 100;
    int n_xpt = 100;

    void validate() const
    {
        if (!(rho_f > 0.0) || !(rho_m > 0.0) || !(rho_w > 0.0))
            throw std::invalid_argument("GdmHyperParams: momentum factors must be positive");
        if (!(alpha_f0 > 0.0) || !(alpha_m0 > 0.0) || !(alpha_w0 > 0.0))
            throw std::invalid_argument("GdmHyperParams: learning factors must be positive");
        if (!(decay > 0.0) || decay > 1.0)
            throw std::invalid_argument("GdmHyperParams: decay must be in (0, 1]");
        if (!(xi > 0.0))
            throw std::invalid_argument("GdmHyperParams: xi must be positive");
        if (n_xpr < 1 || n_xpt < 1)
            throw std::invalid_argument("GdmHyperParams: exploration/exploitation counts must be >= 1");
    }
};

/// Per-user weights (1 + xi*(g_max - g_k)/g_max)^2, bounded to [1, (1+xi)^2].
/// The minimum-SNR user gets the largest weight, a maximum-SNR user exactly
/// 1. All-zero SNRs degenerate to uniform weights.
inline std::vector<double> compute_weights(const std::vector<double> &snrs, double xi)
{
    if (snrs.empty())
        throw std::invalid_argument("compute_weights: empty SNR list");
    double g_max = 0.0;
    for (double g : snrs)
    {
        if (g < 0.0)
            throw std::invalid_argument("compute_weights: negative SNR");
        g_max = std::max(g_max, g);
    }
    std::vector<double> w(snrs.size(), 1.0);
    if (g_max <= 0.0)
        return w;
    for (std::size_t k = 0; k < snrs.size(); ++k)
    {
        const double c = 1.0 + xi * (g_max - snrs[k]) / g_max;
        w[k] = c * c;
    }
    return w;
}

/// Objective of the analog sub-problem for one user:
/// J = w^H H F (F^H F)^-1 F^H H^H w.
inline double objective_analog(const CMat &f, const CMat &w, const CMat &h)
{
    const CMat hv = matmul(hermitian(h), w);           // H^H w
    const CMat y = matmul(hermitian(f), hv);           // F^H H^H w
    const CMat gram_inv = inverse(matmul(hermitian(f), f));
    return inner(y, matmul(gram_inv, y)).real();
}

/// |w^H H F m|^2, the per-user utility of the digital and combiner steps.
inline double objective_link(const CMat &f, const CMat &m, const CMat &w, const CMat &h)
{
    const cxd v = inner(w, matmul(h, matmul(f, m)));
    return std::norm(v);
}

/// Ascent direction of objective_analog with respect to F:
/// (I - F F#) H^H w w^H H F (F^H F)^-1 with F# the left pseudo-inverse.
/// Validated against central finite differences via 2 Re<G, dF>.
inline CMat grad_analog(const CMat &f, const CMat &w, const CMat &h)
{
    const CMat pinv = left_pseudo_inverse(f); // throws on rank deficiency
    const CMat hv = matmul(hermitian(h), w);
    const CMat proj_hv = matmul(f, matmul(pinv, hv));
    const CMat u = hv - proj_hv;                       // (I - F F#) H^H w
    const CMat row = matmul(hermitian(hv), hermitian(pinv)); // w^H H F (F^H F)^-1
    return matmul(u, row);
}

/// Ascent direction of |w^H H F m|^2 with respect to m: A^H A m, A = w^H H F.
inline CMat grad_digital(const CMat &f, const CMat &m, const CMat &w, const CMat &h)
{
    const CMat a = matmul(hermitian(f), matmul(hermitian(h), w)); // A^H
    const cxd am = inner(a, m);                                   // A m
    return am * a;
}

/// Ascent direction of |w^H H F m|^2 with respect to w: H F m m^H F^H H^H w.
inline CMat grad_combiner(const CMat &f, const CMat &m, const CMat &w, const CMat &h)
{
    const CMat g = matmul(h, matmul(f, m));
    const cxd gw = inner(g, w);
    return gw * g;
}

namespace detail {

inline void accumulate_unit_gradient(CMat &agg, const CMat &grad, double weight)
{
    const double n = frobenius_norm(grad);
    if (n <= 1e-150)
        return; // zero gradients contribute nothing
    const double s = weight / n;
    for (std::size_t i = 0; i < agg.rows(); ++i)
        for (std::size_t j = 0; j < agg.cols(); ++j)
            agg(i, j) += s * grad(i, j);
}

inline void normalize_or_zero(CMat &m)
{
    const double n = frobenius_norm(m);
    if (n <= 1e-150)
    {
        m = CMat(m.rows(), m.cols());
        return;
    }
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            m(i, j) = m(i, j) / n;
}

} // namespace detail

/// One analog-precoder update. A rank-deficient F^H F (possible for random
/// alphabet matrices with coinciding columns) degrades to a zero gradient
/// so the run can continue on momentum alone.
inline CMat step_analog(const CMat &f, const CMat &f_best, const CMat &m, const std::vector<CMat> &combiners,
                        const ChannelSet &channels, const std::vector<double> &weights,
                        const SystemConfig &cfg, double rho, double alpha)
{
    (void)m;
    CMat agg(f.rows(), f.cols());
    try
    {
        const CMat pinv = left_pseudo_inverse(f);
        const CMat pinv_h = hermitian(pinv);
        for (std::size_t k = 0; k < channels.users.size(); ++k)
        {
            const CMat hv = matmul(hermitian(channels.users[k]), combiners[k]);
            const CMat u = hv - matmul(f, matmul(pinv, hv));
            const CMat row = matmul(hermitian(hv), pinv_h);
            const CMat grad = matmul(u, row);
            detail::accumulate_unit_gradient(agg, grad, weights[k]);
        }
    }
    catch (const singular_error &)
    {
        agg = CMat(f.rows(), f.cols());
    }
    detail::normalize_or_zero(agg);
    CMat next(f.rows(), f.cols());
    for (std::size_t i = 0; i < f.rows(); ++i)
        for (std::size_t j = 0; j < f.cols(); ++j)
            next(i, j) = f(i, j) + rho * f_best(i, j) + alpha * agg(i, j);
    const PhaseAlphabet fa = cfg.tx_alphabet();
    for (std::size_t i = 0; i < next.rows(); ++i)
        for (std::size_t j = 0; j < next.cols(); ++j)
            next(i, j) = project_to_alphabet(next(i, j), fa);
    return next;
}

/// One digital-precoder update, ending in the transmit-power normalization.
inline CMat step_digital(const CMat &f, const CMat &m, const CMat &m_best, const std::vector<CMat> &combiners,
                         const ChannelSet &channels, const std::vector<double> &weights,
                         const SystemConfig &cfg, double rho, double alpha)
{
    CMat agg(m.rows(), 1);
    for (std::size_t k = 0; k < channels.users.size(); ++k)
    {
        const CMat grad = grad_digital(f, m, combiners[k], channels.users[k]);
        detail::accumulate_unit_gradient(agg, grad, weights[k]);
    }
    detail::normalize_or_zero(agg);
    CMat next(m.rows(), 1);
    for (std::size_t i = 0; i < m.rows(); ++i)
        next(i, 0) = m(i, 0) + rho * m_best(i, 0) + alpha * agg(i, 0);
    if (frobenius_norm(matmul(f, next)) <= 1e-150)
        next = m; // degenerate update; renormalize the previous point instead
    return power_normalize_digital(next, f, cfg.p_tx_max);
}

/// One combiner update for a single user.
inline CMat step_combiner(const CMat &f, const CMat &m, const CMat &w, const CMat &w_best, const CMat &h_k,
                          const SystemConfig &cfg, double rho, double alpha)
{
    CMat grad = grad_combiner(f, m, w, h_k);
    detail::normalize_or_zero(grad);
    CMat next(w.rows(), 1);
    for (std::size_t i = 0; i < w.rows(); ++i)
        next(i, 0) = w(i, 0) + rho * w_best(i, 0) + alpha * grad(i, 0);
    const PhaseAlphabet wa = cfg.rx_alphabet();
    for (std::size_t i = 0; i < next.rows(); ++i)
        next(i, 0) = project_to_alphabet(next(i, 0), wa);
    return next;
}

/// Deterministic starting analog precoder: one constant-modulus entry per
/// row at column (q+1) mod n_rf, zeros elsewhere. The first projection step
/// restores full alphabet feasibility.
inline CMat initial_analog(const SystemConfig &cfg)
{
    CMat f(std::size_t(cfg.n_tx), std::size_t(cfg.n_rf_tx));
    const double v = std::sqrt(cfg.delta_tx());
    for (int q = 0; q < cfg.n_tx; ++q)
        f(std::size_t(q), std::size_t((q + 1) % cfg.n_rf_tx)) = v;
    return f;
}

namespace detail {

inline std::pair<HybridSolution, SolveTrace> run_gdm_core(const ChannelSet &channels, const SystemConfig &cfg,
                                                          const GdmHyperParams &hp, std::uint64_t seed)
{
    cfg.validate();
    hp.validate();
    if (channels.k_users() != cfg.k_users)
        throw std::invalid_argument("run_lb_gdm: channel count does not match k_users");
    const auto t_start = std::chrono::steady_clock::now();
    const int K = cfg.k_users;
    Rng rng(seed);

    HybridSolution cur;
    cur.mode = PrecoderMode::hybrid;
    cur.analog = initial_analog(cfg);
    cur.digital = CMat(std::size_t(cfg.n_rf_tx), 1);
    cur.digital(0, 0) = 1.0;
    cur.combiners.assign(std::size_t(K), CMat(std::size_t(cfg.n_rx), 1));
    for (CMat &w : cur.combiners)
        w(0, 0) = 1.0;

    CMat f_best(cur.analog.rows(), cur.analog.cols());
    CMat m_best(cur.digital.rows(), 1);
    std::vector<CMat> w_best(std::size_t(K), CMat(std::size_t(cfg.n_rx), 1));

    double alpha_f = hp.alpha_f0, alpha_m = hp.alpha_m0, alpha_w = hp.alpha_w0;
    double gamma_best = 0.0;
    HybridSolution opt = cur;
    bool have_opt = false;

    SolveTrace trace;
    trace.gamma_trace.reserve(std::size_t(hp.n_xpr) * std::size_t(hp.n_xpt));
    std::vector<double> snrs = all_snrs(channels, cur, cfg.sigma2);

    for (int ixpr = 0; ixpr < hp.n_xpr; ++ixpr)
    {
        for (int ixpt = 0; ixpt < hp.n_xpt; ++ixpt)
        {
            const std::vector<double> c = compute_weights(snrs, hp.xi);
            cur.analog = step_analog(cur.analog, f_best, cur.digital, cur.combiners, channels, c, cfg,
                                     hp.rho_f, alpha_f);
            snrs = all_snrs(channels, cur, cfg.sigma2);
            const std::vector<double> d = compute_weights(snrs, hp.xi);
            cur.digital = step_digital(cur.analog, cur.digital, m_best, cur.combiners, channels, d, cfg,
                                       hp.rho_m, alpha_m);
            for (int k = 0; k < K; ++k)
                cur.combiners[std::size_t(k)] =
                    step_combiner(cur.analog, cur.digital, cur.combiners[std::size_t(k)],
                                  w_best[std::size_t(k)], channels.users[std::size_t(k)], cfg, hp.rho_w, alpha_w);
            snrs = all_snrs(channels, cur, cfg.sigma2);
            double gamma_min = snrs[0];
            for (double g : snrs)
                gamma_min = std::min(gamma_min, g);
            if (gamma_min >= gamma_best || !have_opt)
            {
                gamma_best = gamma_min;
                opt = cur;
                have_opt = true;
            }
            trace.gamma_trace.push_back(gamma_best);
            alpha_f *= hp.decay;
            alpha_m *= hp.decay;
            alpha_w *= hp.decay;
        }
        f_best = opt.analog;
        m_best = opt.digital;
        w_best = opt.combiners;
        cur = random_feasible(cfg, rng, PrecoderMode::hybrid);
        snrs = all_snrs(channels, cur, cfg.sigma2);
        alpha_f = hp.alpha_f0;
        alpha_m = hp.alpha_m0;
        alpha_w = hp.alpha_w0;
    }
    trace.wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t_start).count();
    return {opt, trace};
}

} // namespace detail

/// Full scheme for the hybrid precoder: per inner iteration the analog,
/// digital and combiner updates run in that order; the incumbent tracks the
/// best minimum SNR seen and is returned at the end. Deterministic given
/// (channels, hp, seed).
inline std::pair<HybridSolution, SolveTrace> run_lb_gdm(const ChannelSet &channels, const SystemConfig &cfg,
                                                        const GdmHyperParams &hp, std::uint64_t seed)
{
    return detail::run_gdm_core(channels, cfg, hp, seed);
}

/// Fully-digital variant. Any basis-times-vector precoder is feasible here
/// (the power budget is the only precoder constraint), so exploration runs
/// the full three-block loop over two basis widths and keeps the better
/// incumbent: a square unit-modulus basis (n_rf_tx = n_tx, spans the whole
/// space) and, when the configured RF width is narrower, that width as well
/// (cheap structured subspaces that the search handles very effectively).
/// The last exploration's exploitation budget then refines the incumbent
/// with plain gradient steps in the canonical basis (analog part pinned to
/// the identity), which removes the oblique-basis fixed-point bias. Total
/// inner iterations stay n_xpr * n_xpt. The result is canonicalized to the
/// fully-digital representation: analog = identity, v = F m, ||v||^2 =
/// p_tx_max.
inline std::pair<HybridSolution, SolveTrace> run_lb_gdm_digital(const ChannelSet &channels,
                                                                const SystemConfig &cfg,
                                                                const GdmHyperParams &hp, std::uint64_t seed)
{
    cfg.validate();
    hp.validate();
    SystemConfig eff = cfg;
    eff.n_rf_tx = cfg.n_tx;
    const auto t_start = std::chrono::steady_clock::now();
    const int K = cfg.k_users;

    HybridSolution out;
    out.mode = PrecoderMode::fully_digital;
    out.analog = CMat::identity(std::size_t(cfg.n_tx));
    SolveTrace trace;
    double gamma_best = 0.0;
    bool have_opt = false;

    if (hp.n_xpr > 1)
    {
        const int explore_total = hp.n_xpr - 1;
        const bool two_widths = cfg.n_rf_tx < cfg.n_tx && explore_total >= 2;
        GdmHyperParams square = hp;
        square.n_xpr = two_widths ? (explore_total + 1) / 2 : explore_total;
        auto [inner, inner_trace] = detail::run_gdm_core(channels, eff, square, seed);
        out.digital = matmul(inner.analog, inner.digital);
        out.combiners = std::move(inner.combiners);
        trace = std::move(inner_trace);
        gamma_best = trace.gamma_trace.empty() ? 0.0 : trace.gamma_trace.back();
        have_opt = true;
        if (two_widths)
        {
            GdmHyperParams narrow = hp;
            narrow.n_xpr = explore_total / 2;
            auto [inner2, trace2] = detail::run_gdm_core(channels, cfg, narrow, mix_seed(seed, 0x5eedULL));
            double gamma2 = trace2.gamma_trace.empty() ? 0.0 : trace2.gamma_trace.back();
            for (double g : trace2.gamma_trace)
                trace.gamma_trace.push_back(std::max(gamma_best, g));
            if (gamma2 > gamma_best)
            {
                gamma_best = gamma2;
                out.digital = matmul(inner2.analog, inner2.digital);
                out.combiners = std::move(inner2.combiners);
            }
        }
    }
    else
    {
        out.digital = CMat(std::size_t(cfg.n_tx), 1);
        out.digital(0, 0) = 1.0;
        out.combiners.assign(std::size_t(K), CMat(std::size_t(cfg.n_rx), 1));
        for (CMat &w : out.combiners)
            w(0, 0) = 1.0;
    }

    // Canonical-basis refinement of the incumbent.
    const CMat eye = CMat::identity(std::size_t(cfg.n_tx));
    CMat m = out.digital;
    std::vector<CMat> combiners = out.combiners;
    CMat m_best = have_opt ? out.digital : CMat(std::size_t(cfg.n_tx), 1);
    std::vector<CMat> w_best =
        have_opt ? out.combiners : std::vector<CMat>(std::size_t(K), CMat(std::size_t(cfg.n_rx), 1));
    double alpha_m = hp.alpha_m0, alpha_w = hp.alpha_w0;
    HybridSolution cur{PrecoderMode::fully_digital, eye, m, combiners};
    std::vector<double> snrs = all_snrs(channels, cur, cfg.sigma2);
    for (int it = 0; it < hp.n_xpt; ++it)
    {
        const std::vector<double> d = compute_weights(snrs, hp.xi);
        cur.digital = step_digital(eye, cur.digital, m_best, cur.combiners, channels, d, eff, hp.rho_m, alpha_m);
        for (int k = 0; k < K; ++k)
            cur.combiners[std::size_t(k)] =
                step_combiner(eye, cur.digital, cur.combiners[std::size_t(k)], w_best[std::size_t(k)],
                              channels.users[std::size_t(k)], cfg, hp.rho_w, alpha_w);
        snrs = all_snrs(channels, cur, cfg.sigma2);
        double gamma_min = snrs[0];
        for (double g : snrs)
            gamma_min = std::min(gamma_min, g);
        if (gamma_min >= gamma_best || !have_opt)
        {
            gamma_best = gamma_min;
            out.digital = cur.digital;
            out.combiners = cur.combiners;
            // Momentum chases the improving incumbent during refinement.
            m_best = out.digital;
            w_best = out.combiners;
            have_opt = true;
        }
        trace.gamma_trace.push_back(gamma_best);
        alpha_m *= hp.decay;
        alpha_w *= hp.decay;
    }
    trace.wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t_start).count();
    return {out, trace};
}

} // namespace mcbeam

#endif // MCBEAM_LB_GDM_HPP
