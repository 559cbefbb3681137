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
// Small dense solver for trace-form max-min semidefinite programs
//
//     max t   s.t.  Tr(A_i X) >= t,   Tr(B_j X) = b_j,   X >= 0 (PSD),
//
// with complex Hermitian data. The problem is mapped onto real symmetric
// matrices through the [[Re, -Im], [Im, Re]] embedding (coefficients halved
// so traces match the complex originals) and solved by a log-barrier
// interior-point method: Newton steps run on the dual multipliers, where
// the slack matrix S = sum_j z_j B~_j - sum_i y_i A~_i must stay positive
// definite and the y_i live on the unit simplex. The primal iterate is the
// central-path point X = mu S^-1, which satisfies the equalities at the
// exact center and is strictly feasible throughout; iteration stops when
// the measured duality gap b'z - min_i Tr(A_i X) drops below tolerance.
// Constraint matrices enter as sums of rank-one terms (pivoted Cholesky for
// PSD data, Jacobi eigendecomposition otherwise), which keeps the Newton
// Hessian assembly at O(p^2 n) for p rank-one terms.

#ifndef MCBEAM_SDP_HPP
#define MCBEAM_SDP_HPP

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "matrix.hpp"

namespace mcbeam {

enum class SdpStatus { optimal, infeasible, max_iterations };

struct SdpProblem {
    int n = 0;                                   // complex dimension of X
    std::vector<CMat> ineq;                      // A_i, Hermitian: Tr(A_i X) >= t
    std::vector<std::pair<CMat, double>> eq;     // (B_j, b_j): Tr(B_j X) = b_j
    std::optional<double> diag_value;            // [X]_nn = value for every n

    void validate() const
    {
        if (n < 1)
            throw std::invalid_argument("SdpProblem: n must be >= 1");
        if (ineq.empty())
            throw std::invalid_argument("SdpProblem: needs at least one inequality");
        if (!diag_value && eq.empty())
            throw std::invalid_argument("SdpProblem: needs equality constraints (problem unbounded otherwise)");
        for (const CMat &a : ineq)
        {
            if (a.rows() != std::size_t(n) || a.cols() != std::size_t(n))
                throw std::invalid_argument("SdpProblem: inequality matrix has wrong shape");
            if (!is_hermitian(a, 1e-12))
                throw std::invalid_argument("SdpProblem: inequality matrix not Hermitian");
        }
        for (const auto &[b, rhs] : eq)
        {
            (void)rhs;
            if (b.rows() != std::size_t(n) || b.cols() != std::size_t(n))
                throw std::invalid_argument("SdpProblem: equality matrix has wrong shape");
            if (!is_hermitian(b, 1e-12))
                throw std::invalid_argument("SdpProblem: equality matrix not Hermitian");
        }
    }
};

struct SdpSolution {
    CMat x;
    double t = 0.0;
    SdpStatus status = SdpStatus::max_iterations;
    double max_violation = 0.0;          // worst equality residual
    double min_eigenvalue = 0.0;         // of X
    std::vector<double> objective_trace; // t after each centering step
    int iterations = 0;                  // Newton steps taken
};

/// Complex-to-real isomorphism: Hermitian h maps to the symmetric
/// [[Re h, -Im h], [Im h, Re h]] of twice the dimension. Eigenvalues are
/// preserved with doubled multiplicity; the trace doubles, which callers
/// compensate by halving coefficient matrices.
inline CMat real_embed(const CMat &h)
{
    if (!is_hermitian(h, 1e-10))
        throw std::invalid_argument("real_embed: input not Hermitian");
    const std::size_t n = h.rows();
    CMat r(2 * n, 2 * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
        {
            const double re = h(i, j).real();
            const double im = h(i, j).imag();
            r(i, j) = re;
            r(i + n, j + n) = re;
            r(i, j + n) = -im;
            r(i + n, j) = im;
        }
    return r;
}

/// Inverse of real_embed with block averaging, then Hermitian symmetrization.
inline CMat real_unembed(const CMat &s, int n_complex)
{
    const std::size_t n = std::size_t(n_complex);
    if (s.rows() != 2 * n || s.cols() != 2 * n)
        throw std::invalid_argument("real_unembed: shape mismatch");
    CMat h(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
        {
            const double re = 0.5 * (s(i, j).real() + s(i + n, j + n).real());
            const double im = 0.5 * (s(i + n, j).real() - s(i, j + n).real());
            h(i, j) = cxd(re, im);
        }
    CMat hh = hermitian(h);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            h(i, j) = 0.5 * (h(i, j) + hh(i, j));
    return h;
}

namespace detail {

struct RSym {
    int n = 0;
    std::vector<double> a;

    RSym() = default;
    explicit RSym(int dim) : n(dim), a(std::size_t(dim) * std::size_t(dim), 0.0) {}
    double &at(int i, int j) { return a[std::size_t(i) * std::size_t(n) + std::size_t(j)]; }
    double at(int i, int j) const { return a[std::size_t(i) * std::size_t(n) + std::size_t(j)]; }
};

// In-place lower Cholesky; false when the matrix is not positive definite.
inline bool cholesky_inplace(RSym &s)
{
    const int n = s.n;
    for (int j = 0; j < n; ++j)
    {
        double d = s.at(j, j);
        for (int k = 0; k < j; ++k)
            d -= s.at(j, k) * s.at(j, k);
        if (!(d > 0.0) || !std::isfinite(d))
            return false;
        const double lj = std::sqrt(d);
        s.at(j, j) = lj;
        for (int i = j + 1; i < n; ++i)
        {
            double v = s.at(i, j);
            for (int k = 0; k < j; ++k)
                v -= s.at(i, k) * s.at(j, k);
            s.at(i, j) = v / lj;
        }
    }
    return true;
}

inline void chol_solve(const RSym &l, double *x)
{
    const int n = l.n;
    for (int i = 0; i < n; ++i)
    {
        double v = x[i];
        for (int k = 0; k < i; ++k)
            v -= l.at(i, k) * x[k];
        x[i] = v / l.at(i, i);
    }
    for (int i = n - 1; i >= 0; --i)
    {
        double v = x[i];
        for (int k = i + 1; k < n; ++k)
            v -= l.at(k, i) * x[k];
        x[i] = v / l.at(i, i);
    }
}

inline double chol_logdet(const RSym &l)
{
    double s = 0.0;
    for (int i = 0; i < l.n; ++i)
        s += std::log(l.at(i, i));
    return 2.0 * s;
}

// Explicit inverse from the Cholesky factor (used once per centering).
inline RSym chol_inverse(const RSym &l)
{
    const int n = l.n;
    RSym inv(n);
    std::vector<double> col(std::size_t(n), 0.0);
    for (int j = 0; j < n; ++j)
    {
        std::fill(col.begin(), col.end(), 0.0);
        col[std::size_t(j)] = 1.0;
        chol_solve(l, col.data());
        for (int i = 0; i < n; ++i)
            inv.at(i, j) = col[std::size_t(i)];
    }
    return inv;
}

// Rank-one decomposition of PSD Hermitian A: A = sum_s l_s l_s^H.
// Outer-product pivoted Cholesky; false when A is noticeably indefinite.
inline bool psd_rank_one_terms(const CMat &a, std::vector<CMat> &cols)
{
    cols.clear();
    const std::size_t n = a.rows();
    CMat r = a;
    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        scale = std::max(scale, std::abs(r(i, i).real()));
    const double tol = 1e-12 * std::max(scale, 1e-30);
    for (std::size_t step = 0; step < n; ++step)
    {
        std::size_t p = 0;
        double dmax = -1e300;
        double dmin = 1e300;
        for (std::size_t i = 0; i < n; ++i)
        {
            const double d = r(i, i).real();
            if (d > dmax)
            {
                dmax = d;
                p = i;
            }
            dmin = std::min(dmin, d);
        }
        if (dmin < -64.0 * tol)
            return false; // indefinite
        if (dmax <= tol)
            break;
        const double pivot = std::sqrt(dmax);
        CMat l(n, 1);
        for (std::size_t i = 0; i < n; ++i)
            l(i, 0) = r(i, p) / pivot;
        cols.push_back(l);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                r(i, j) -= l(i, 0) * std::conj(l(j, 0));
    }
    // Residual must vanish for PSD input; leftover off-diagonal mass means
    // the matrix was indefinite with a zero-dominant diagonal.
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (std::abs(r(i, j)) > 1e4 * tol + 1e-9 * std::max(scale, 1e-30))
                return false;
    return true;
}

// All constraint data in stem (rank-one) form on the embedded space.
struct SdpWork {
    int n_c = 0;
    int n_r = 0;
    int n_ineq = 0;
    int n_par = 0;                  // n_ineq + equalities
    std::vector<double> rhs;        // per parameter; 0 for inequalities
    std::vector<int> stem_begin;    // per parameter, +1 sentinel
    std::vector<double> stem_sigma; // sign-folded coefficient per stem
    std::vector<double> stem_vecs;  // column-major, n_r per stem
};

inline void push_complex_stem(SdpWork &w, const CMat &l, double coeff)
{
    const int n = w.n_c;
    const std::size_t base = w.stem_vecs.size();
    w.stem_vecs.resize(base + 2 * std::size_t(w.n_r), 0.0);
    double *u = w.stem_vecs.data() + base;
    double *v = u + w.n_r;
    for (int i = 0; i < n; ++i)
    {
        u[i] = l(std::size_t(i), 0).real();
        u[i + n] = l(std::size_t(i), 0).imag();
        v[i] = -l(std::size_t(i), 0).imag();
        v[i + n] = l(std::size_t(i), 0).real();
    }
    w.stem_sigma.push_back(0.5 * coeff);
    w.stem_sigma.push_back(0.5 * coeff);
}

inline void push_unit_stem(SdpWork &w, int index, double coeff)
{
    const std::size_t base = w.stem_vecs.size();
    w.stem_vecs.resize(base + std::size_t(w.n_r), 0.0);
    w.stem_vecs[base + std::size_t(index)] = 1.0;
    w.stem_sigma.push_back(coeff);
}

// sign: -1 for inequality matrices (they enter S negatively), +1 otherwise.
inline void push_matrix_stems(SdpWork &w, const CMat &a, double sign)
{
    std::vector<CMat> cols;
    if (psd_rank_one_terms(a, cols))
    {
        for (const CMat &l : cols)
            push_complex_stem(w, l, sign);
        return;
    }
    const EigResult eig = hermitian_eig(a);
    const double scale = std::abs(eig.values.empty() ? 0.0 : std::max(std::abs(eig.values.front()),
                                                                      std::abs(eig.values.back())));
    for (std::size_t s = 0; s < eig.values.size(); ++s)
    {
        const double lam = eig.values[s];
        if (std::abs(lam) <= 1e-14 * std::max(scale, 1e-30))
            continue;
        CMat v(a.rows(), 1);
        for (std::size_t i = 0; i < a.rows(); ++i)
            v(i, 0) = eig.vectors(i, s);
        push_complex_stem(w, v, sign * lam);
    }
}

inline RSym build_slack(const SdpWork &w, const std::vector<double> &x)
{
    RSym s(w.n_r);
    int stem = 0;
    for (int p = 0; p < w.n_par; ++p)
    {
        for (; stem < w.stem_begin[std::size_t(p) + 1]; ++stem)
        {
            const double c = w.stem_sigma[std::size_t(stem)] * x[std::size_t(p)];
            if (c == 0.0)
                continue;
            const double *u = w.stem_vecs.data() + std::size_t(stem) * std::size_t(w.n_r);
            for (int i = 0; i < w.n_r; ++i)
            {
                if (u[i] == 0.0)
                    continue;
                const double cu = c * u[i];
                for (int j = 0; j <= i; ++j)
                    s.at(i, j) += cu * u[j];
            }
        }
    }
    for (int i = 0; i < w.n_r; ++i)
        for (int j = i + 1; j < w.n_r; ++j)
            s.at(i, j) = s.at(j, i);
    return s;
}

// Direction matrix sum_p dx_p G_p, same stem walk as build_slack.
inline RSym build_direction(const SdpWork &w, const std::vector<double> &dx)
{
    return build_slack(w, dx);
}

} // namespace detail

/// Solve the max-min trace SDP. `tol` bounds the relative duality gap and
/// equality residuals of the returned solution; `max_iters` caps the total
/// Newton step count. Deterministic.
inline SdpSolution solve_maxmin_sdp(const SdpProblem &p, double tol = 1e-6, int max_iters = 200)
{
    using detail::RSym;
    p.validate();
    SdpSolution sol;
    const int n_c = p.n;
    const int n_r = 2 * n_c;
    const int K = int(p.ineq.size());

    detail::SdpWork w;
    w.n_c = n_c;
    w.n_r = n_r;
    w.n_ineq = K;

    // Parameters: y_1..y_K (inequality multipliers), then equality multipliers.
    w.stem_begin.push_back(0);
    for (const CMat &a : p.ineq)
    {
        detail::push_matrix_stems(w, a, -1.0);
        w.stem_begin.push_back(int(w.stem_sigma.size()));
        w.rhs.push_back(0.0);
    }
    std::vector<double> eq_rhs;
    for (const auto &[b, rhs] : p.eq)
    {
        const std::size_t before = w.stem_sigma.size();
        detail::push_matrix_stems(w, b, 1.0);
        if (w.stem_sigma.size() == before)
        {
            // Zero coefficient matrix: Tr(0 X) = rhs is decidable up front.
            if (std::abs(rhs) > 1e-300)
            {
                sol.status = SdpStatus::infeasible;
                sol.x = CMat(std::size_t(n_c), std::size_t(n_c));
                return sol;
            }
            // Vacuous constraint; keep a placeholder so indices stay aligned.
        }
        w.stem_begin.push_back(int(w.stem_sigma.size()));
        w.rhs.push_back(rhs);
        eq_rhs.push_back(rhs);
    }
    if (p.diag_value)
    {
        for (int j = 0; j < n_c; ++j)
        {
            detail::push_unit_stem(w, j, 0.5);
            detail::push_unit_stem(w, j + n_c, 0.5);
            w.stem_begin.push_back(int(w.stem_sigma.size()));
            w.rhs.push_back(*p.diag_value);
            eq_rhs.push_back(*p.diag_value);
        }
    }    w.n_par = int(w.rhs.size());
    const int n_par = w.n_par;
    const int n_stems = int(w.stem_sigma.size());

    // Strictly feasible dual start: uniform simplex weights, common equality
    // multiplier doubled until the slack matrix is positive definite.
    std::vector<double> start(std::size_t(n_par), 0.0);
    for (int i = 0; i < K; ++i)
        start[std::size_t(i)] = 1.0 / double(K);
    RSym chol_s;
    {
        bool ok = false;
        double z0 = 1.0;
        for (int tries = 0; tries < 80 && !ok; ++tries)
        {
            for (int j = K; j < n_par; ++j)
                start[std::size_t(j)] = z0;
            chol_s = detail::build_slack(w, start);
            ok = detail::cholesky_inplace(chol_s);
            if (!ok)
                z0 *= 4.0;
        }
        if (!ok)
        {
            sol.status = SdpStatus::max_iterations;
            sol.x = CMat(std::size_t(n_c), std::size_t(n_c));
            return sol;
        }
        // One extra doubling for margin: stopping at the first PD success
        // leaves S nearly singular and the first primal iterate inflated.
        for (int j = K; j < n_par; ++j)
            start[std::size_t(j)] = 2.0 * z0;
        chol_s = detail::build_slack(w, start);
        detail::cholesky_inplace(chol_s);
    }

    // Inequality traces against the complex data, for the reported objective.
    const auto ineq_values = [&](const CMat &xc) {
        std::vector<double> v(std::size_t(K), 0.0);
        for (int i = 0; i < K; ++i)
        {
            cxd t(0.0, 0.0);
            const CMat &a = p.ineq[std::size_t(i)];
            for (std::size_t r = 0; r < a.rows(); ++r)
                for (std::size_t c = 0; c < a.cols(); ++c)
                    t += a(r, c) * xc(c, r);
            v[std::size_t(i)] = t.real();
        }
        return v;
    };
    const auto eq_residual = [&](const CMat &xc) {
        double worst = 0.0;
        for (const auto &[b, rhs] : p.eq)
        {
            cxd t(0.0, 0.0);
            for (std::size_t r = 0; r < b.rows(); ++r)
                for (std::size_t c = 0; c < b.cols(); ++c)
                    t += b(r, c) * xc(c, r);
            worst = std::max(worst, std::abs(t.real() - rhs) / (1.0 + std::abs(rhs)));
        }
        if (p.diag_value)
            for (int j = 0; j < n_c; ++j)
                worst = std::max(worst, std::abs(xc(std::size_t(j), std::size_t(j)).real() - *p.diag_value) /
                                            (1.0 + std::abs(*p.diag_value)));
        return worst;
    };

    // Scaled parametrization: v = (y, z) / mu, so the slack built from v is
    // S/mu and the primal central-path iterate is X = inverse(build(v)) with
    // no explicit mu anywhere in the Newton algebra. The simplex constraint
    // becomes sum(v_y) = 1/mu and is handled by eliminating the last y
    // coordinate; decreasing mu just rescales the whole vector, which keeps
    // the slack positive definite. This keeps gradient and Hessian entries
    // bounded as mu -> 0, where the unscaled barrier loses all precision.
    const auto primal_from_v = [&](const RSym &sinv) {
        CMat xr{std::size_t(n_r), std::size_t(n_r)};
        for (int i = 0; i < n_r; ++i)
            for (int j = 0; j < n_r; ++j)
                xr(std::size_t(i), std::size_t(j)) = sinv.at(i, j);
        return real_unembed(xr, n_c);
    };
    const auto dual_objective_scaled = [&](const std::vector<double> &vv) {
        double s = 0.0;
        for (int j = K; j < n_par; ++j)
            s += w.rhs[std::size_t(j)] * vv[std::size_t(j)];
        return s; // actual dual objective is mu times this
    };
    double rhs_scale = 1.0;
    for (double r : w.rhs)
        rhs_scale = std::max(rhs_scale, 1.0 + std::abs(r));

    // Initial mu large enough that the starting point is comfortably inside
    // the region Newton can center from; a few extra outer steps are cheap,
    // a too-small mu is unrecoverable.
    double mu;
    {
        RSym sinv = detail::chol_inverse(chol_s);
        CMat xc = primal_from_v(sinv); // X at mu = 1 is S^-1
        const std::vector<double> vals = ineq_values(xc);
        double tmin = vals[0];
        for (double v : vals)
            tmin = std::min(tmin, v);
        mu = (std::abs(dual_objective_scaled(start)) + std::abs(tmin) + 1.0) / double(n_r + K);
    }
    std::vector<double> v(std::size_t(n_par), 0.0);
    for (int i = 0; i < n_par; ++i)
        v[std::size_t(i)] = start[std::size_t(i)] / mu;
    chol_s = detail::build_slack(w, v);
    if (!detail::cholesky_inplace(chol_s))
    {
        sol.status = SdpStatus::max_iterations;
        sol.x = CMat(std::size_t(n_c), std::size_t(n_c));
        return sol;
    }

    const int n_red = n_par - 1;       // last y coordinate is eliminated
    const int elim = K - 1;            // full index of the eliminated coordinate
    const auto full_index = [&](int r) { return (r < elim) ? r : r + 1; };

    std::vector<double> grad_full(std::size_t(n_par), 0.0);
    std::vector<double> gram;   // n_stems x n_stems
    std::vector<double> solved; // S^-1 * stems, column-major
    RSym hess_full(n_par);
    int newton_steps = 0;
    bool budget_hit = false;

    const double sigma_mu = 0.2;
    const double gap_margin = 0.05; // converge 20x past tol; reported t is the primal value
    for (int outer = 0; outer < 120 && !budget_hit; ++outer)
    {
        // Center at the current mu.
        for (int inner = 0; inner < 50; ++inner)
        {
            if (newton_steps >= max_iters)
            {
                budget_hit = true;
                break;
            }
            ++newton_steps;
            // solved = S^-1 V and gram = V^T S^-1 V over all stems.
            solved.assign(std::size_t(n_stems) * std::size_t(n_r), 0.0);
            for (int s = 0; s < n_stems; ++s)
            {
                double *col = solved.data() + std::size_t(s) * std::size_t(n_r);
                const double *u = w.stem_vecs.data() + std::size_t(s) * std::size_t(n_r);
                for (int i = 0; i < n_r; ++i)
                    col[i] = u[i];
                detail::chol_solve(chol_s, col);
            }
            gram.assign(std::size_t(n_stems) * std::size_t(n_stems), 0.0);
            for (int s = 0; s < n_stems; ++s)
            {
                const double *u = w.stem_vecs.data() + std::size_t(s) * std::size_t(n_r);
                for (int q = s; q < n_stems; ++q)
                {
                    const double *c = solved.data() + std::size_t(q) * std::size_t(n_r);
                    double acc = 0.0;
                    for (int i = 0; i < n_r; ++i)
                        acc += u[i] * c[i];
                    gram[std::size_t(s) * std::size_t(n_stems) + std::size_t(q)] = acc;
                    gram[std::size_t(q) * std::size_t(n_stems) + std::size_t(s)] = acc;
                }
            }
            for (int pidx = 0; pidx < n_par; ++pidx)
            {
                double tr = 0.0;
                for (int s = w.stem_begin[std::size_t(pidx)]; s < w.stem_begin[std::size_t(pidx) + 1]; ++s)
                    tr += w.stem_sigma[std::size_t(s)] * gram[std::size_t(s) * std::size_t(n_stems) + std::size_t(s)];
                grad_full[std::size_t(pidx)] = w.rhs[std::size_t(pidx)] - tr;
                if (pidx < K)
                    grad_full[std::size_t(pidx)] -= 1.0 / v[std::size_t(pidx)];
            }
            for (int pa = 0; pa < n_par; ++pa)
                for (int pb = pa; pb < n_par; ++pb)
                {
                    double acc = 0.0;
                    for (int s = w.stem_begin[std::size_t(pa)]; s < w.stem_begin[std::size_t(pa) + 1]; ++s)
                    {
                        const double ss = w.stem_sigma[std::size_t(s)];
                        for (int q = w.stem_begin[std::size_t(pb)]; q < w.stem_begin[std::size_t(pb) + 1]; ++q)
                        {
                            const double g = gram[std::size_t(s) * std::size_t(n_stems) + std::size_t(q)];
                            acc += ss * w.stem_sigma[std::size_t(q)] * g * g;
                        }
                    }
                    hess_full.at(pa, pb) = acc;
                    hess_full.at(pb, pa) = acc;
                }
            for (int i = 0; i < K; ++i)
                hess_full.at(i, i) += 1.0 / (v[std::size_t(i)] * v[std::size_t(i)]);

            // Reduced system with dy_elim = -sum(other dy).
            RSym hred(n_red);
            std::vector<double> gred(std::size_t(n_red), 0.0);
            for (int r = 0; r < n_red; ++r)
            {
                const int fr = full_index(r);
                gred[std::size_t(r)] =
                    grad_full[std::size_t(fr)] - ((r < elim) ? grad_full[std::size_t(elim)] : 0.0);
                for (int s = r; s < n_red; ++s)
                {
                    const int fs = full_index(s);
                    double h = hess_full.at(fr, fs);
                    if (r < elim)
                        h -= hess_full.at(elim, fs);
                    if (s < elim)
                        h -= hess_full.at(fr, elim);
                    if (r < elim && s < elim)
                        h += hess_full.at(elim, elim);
                    hred.at(r, s) = h;
                    hred.at(s, r) = h;
                }
            }
            RSym hfac = hred;
            double ridge = 0.0;
            while (!detail::cholesky_inplace(hfac))
            {
                ridge = (ridge == 0.0) ? 1e-13 : ridge * 100.0;
                if (ridge > 1e3)
                    break;
                hfac = hred;
                for (int i = 0; i < n_red; ++i)
                    hfac.at(i, i) += ridge * (1.0 + hred.at(i, i));
            }
            std::vector<double> dred(std::size_t(n_red), 0.0);
            for (int r = 0; r < n_red; ++r)
                dred[std::size_t(r)] = -gred[std::size_t(r)];
            detail::chol_solve(hfac, dred.data());

            double decrement_sq = 0.0;
            double grad_inf = 0.0;
            for (int r = 0; r < n_red; ++r)
            {
                decrement_sq -= gred[std::size_t(r)] * dred[std::size_t(r)];
                grad_inf = std::max(grad_inf, std::abs(gred[std::size_t(r)]));
            }
            // The z-part of the gradient is exactly the equality residual of
            // X = S^-1, so the gradient norm is the natural centering gauge.
            if (grad_inf <= 0.5 * gap_margin * tol * rhs_scale || !(decrement_sq > 0.0))
                break; // centered

            std::vector<double> dx(std::size_t(n_par), 0.0);
            for (int r = 0; r < n_red; ++r)
            {
                const int fr = full_index(r);
                dx[std::size_t(fr)] = dred[std::size_t(r)];
                if (r < elim)
                    dx[std::size_t(elim)] -= dred[std::size_t(r)];
            }

            double alpha = 1.0;
            for (int i = 0; i < K; ++i)
                if (dx[std::size_t(i)] < 0.0)
                    alpha = std::min(alpha, -0.95 * v[std::size_t(i)] / dx[std::size_t(i)]);
            const RSym dmat = detail::build_direction(w, dx);
            const RSym sbase = detail::build_slack(w, v);
            const double g_dot_dx = -decrement_sq;
            double lin_step = 0.0; // d(b'z) along the direction
            for (int i = K; i < n_par; ++i)
                lin_step += w.rhs[std::size_t(i)] * dx[std::size_t(i)];
            const double logdet0 = detail::chol_logdet(chol_s);
            bool stepped = false;
            for (int bt = 0; bt < 60; ++bt)
            {
                std::vector<double> vt(std::size_t(n_par), 0.0);
                for (int i = 0; i < n_par; ++i)
                    vt[std::size_t(i)] = v[std::size_t(i)] + alpha * dx[std::size_t(i)];
                bool pos = true;
                for (int i = 0; i < K; ++i)
                    pos = pos && vt[std::size_t(i)] > 0.0;
                if (pos)
                {
                    RSym lt(n_r);
                    for (int i = 0; i < n_r; ++i)
                        for (int j = 0; j < n_r; ++j)
                            lt.at(i, j) = sbase.at(i, j) + alpha * dmat.at(i, j);
                    if (detail::cholesky_inplace(lt))
                    {
                        // phi difference assembled term by term; the raw phi
                        // values grow like 1/mu and would swamp the decrease.
                        double dphi = alpha * lin_step + logdet0 - detail::chol_logdet(lt);
                        for (int i = 0; i < K; ++i)
                            dphi -= std::log(vt[std::size_t(i)] / v[std::size_t(i)]);
                        if (dphi <= 1e-4 * alpha * g_dot_dx)
                        {
                            v = vt;
                            chol_s = lt;
                            stepped = true;
                            break;
                        }
                    }
                }
                alpha *= 0.5;
            }
            if (!stepped)
                break;
        }

        // Measure the duality gap at this center.
        RSym sinv = detail::chol_inverse(chol_s);
        CMat xc = primal_from_v(sinv);
        const std::vector<double> vals = ineq_values(xc);
        double tmin = vals[0];
        for (double val : vals)
            tmin = std::min(tmin, val);
        sol.objective_trace.push_back(tmin);
        const double gap = mu * dual_objective_scaled(v) - tmin;
        const double resid = eq_residual(xc);
#ifdef MCBEAM_SDP_TRACE
        std::fprintf(stderr, "outer=%d mu=%.3e t=%.9g gap=%.3e resid=%.3e steps=%d v0=%.3e vK=%.3e\n",
                     outer, mu, tmin, gap, resid, newton_steps, v[0], v[std::size_t(n_par - 1)]);
#endif
        if (gap <= gap_margin * tol * (1.0 + std::abs(tmin)) && resid <= gap_margin * tol)
        {
            sol.x = xc;
            sol.t = tmin;
            sol.status = SdpStatus::optimal;
            sol.max_violation = resid;
            sol.iterations = newton_steps;
            // X = S^-1 is positive definite by construction; its smallest
            // eigenvalue comes from the dominant eigenvalue of S.
            bool conv = false;
            CMat s_complex = real_unembed([&] {
                CMat sm{std::size_t(n_r), std::size_t(n_r)};
                RSym sb = detail::build_slack(w, v);
                for (int i = 0; i < n_r; ++i)
                    for (int j = 0; j < n_r; ++j)
                        sm(std::size_t(i), std::size_t(j)) = sb.at(i, j);
                return sm;
            }(), n_c);
            auto top = detail::power_iteration_estimate(s_complex, 500, 1e-8, &conv);
            sol.min_eigenvalue = (top.first > 0.0) ? 1.0 / top.first : 0.0;
            return sol;
        }

        // Shrink mu: rescaling the whole multiplier vector keeps the same
        // underlying dual point and preserves positive definiteness.
        mu *= sigma_mu;
        for (int i = 0; i < n_par; ++i)
            v[std::size_t(i)] /= sigma_mu;
        chol_s = detail::build_slack(w, v);
        if (!detail::cholesky_inplace(chol_s))
        {
            budget_hit = true;
            break;
        }
    }

    // Budget exhausted: report the best current iterate.
    RSym sinv = detail::chol_inverse(chol_s);
    CMat xc = primal_from_v(sinv);
    const std::vector<double> vals = ineq_values(xc);
    double tmin = vals[0];
    for (double val : vals)
        tmin = std::min(tmin, val);
    sol.x = xc;
    sol.t = tmin;
    sol.status = SdpStatus::max_iterations;
    sol.max_violation = eq_residual(xc);
    sol.iterations = newton_steps;
    sol.min_eigenvalue = 0.0;
    return sol;
}

} // namespace mcbeam

#endif // MCBEAM_SDP_HPP
