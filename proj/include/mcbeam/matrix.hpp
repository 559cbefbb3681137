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

#ifndef MCBEAM_MATRIX_HPP
#define MCBEAM_MATRIX_HPP

#include <algorithm>
#include <cassert>
#include <cmath>
#include <complex>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mcbeam {

using cxd = std::complex<double>;

/// Raised when a matrix is singular or too ill-conditioned for the requested
/// operation (reciprocal condition estimate below 1e-12).
class singular_error : public std::runtime_error {
  public:
    explicit singular_error(const std::string &msg) : std::runtime_error(msg) {}
};

/// Raised when an iterative routine exhausts its iteration budget.
class convergence_error : public std::runtime_error {
  public:
    explicit convergence_error(const std::string &msg) : std::runtime_error(msg) {}
};

// Dense complex matrix, row-major, value semantics. Column vectors are
// matrices with cols == 1. Values are treated as immutable once built, so
// they can be shared or moved across threads freely.
class CMat {
  public:
    CMat() = default;

    CMat(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols, cxd(0.0, 0.0)) {}

    static CMat identity(std::size_t n)
    {
        CMat m(n, n);
        for (std::size_t i = 0; i < n; ++i)
            m(i, i) = 1.0;
        return m;
    }

    static CMat zeros(std::size_t rows, std::size_t cols) { return CMat(rows, cols); }

    static CMat from_rows(std::initializer_list<std::initializer_list<cxd>> rows)
    {
        std::size_t r = rows.size();
        std::size_t c = r == 0 ? 0 : rows.begin()->size();
        CMat m(r, c);
        std::size_t i = 0;
        for (const auto &row : rows)
        {
            if (row.size() != c)
                throw std::invalid_argument("CMat::from_rows: ragged initializer");
            std::size_t j = 0;
            for (const auto &v : row)
                m(i, j++) = v;
            ++i;
        }
        return m;
    }

    static CMat column(const std::vector<cxd> &v)
    {
        CMat m(v.size(), 1);
        for (std::size_t i = 0; i < v.size(); ++i)
            m(i, 0) = v[i];
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return a_.size(); }
    bool empty() const { return a_.empty(); }

    cxd &operator()(std::size_t i, std::size_t j)
    {
        assert(i < rows_ && j < cols_);
        return a_[i * cols_ + j];
    }
    const cxd &operator()(std::size_t i, std::size_t j) const
    {
        assert(i < rows_ && j < cols_);
        return a_[i * cols_ + j];
    }

    cxd *data() { return a_.data(); }
    const cxd *data() const { return a_.data(); }

  private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<cxd> a_;
};

inline void require_same_shape(const CMat &a, const CMat &b, const char *op)
{
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument(std::string(op) + ": shape mismatch");
}

inline CMat operator+(const CMat &a, const CMat &b)
{
    require_same_shape(a, b, "operator+");
    CMat r(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            r(i, j) = a(i, j) + b(i, j);
    return r;
}

inline CMat operator-(const CMat &a, const CMat &b)
{
    require_same_shape(a, b, "operator-");
    CMat r(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            r(i, j) = a(i, j) - b(i, j);
    return r;
}

inline CMat operator*(const cxd &s, const CMat &a)
{
    CMat r(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            r(i, j) = s * a(i, j);
    return r;
}

inline CMat operator*(double s, const CMat &a) { return cxd(s, 0.0) * a; }

/// Conjugate transpose.
inline CMat hermitian(const CMat &a)
{
    CMat r(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            r(j, i) = std::conj(a(i, j));
    return r;
}

/// Plain transpose, no conjugation.
inline CMat transpose(const CMat &a)
{
    CMat r(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            r(j, i) = a(i, j);
    return r;
}

/// Entrywise conjugate.
inline CMat conjugate(const CMat &a)
{
    CMat r(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            r(i, j) = std::conj(a(i, j));
    return r;
}

inline CMat matmul(const CMat &a, const CMat &b)
{
    if (a.cols() != b.rows())
        throw std::invalid_argument("matmul: inner dimensions do not match");
    CMat r(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k)
        {
            const cxd aik = a(i, k);
            if (aik == cxd(0.0, 0.0))
                continue;
            for (std::size_t j = 0; j < b.cols(); ++j)
                r(i, j) += aik * b(k, j);
        }
    return r;
}

inline CMat operator*(const CMat &a, const CMat &b) { return matmul(a, b); }

inline cxd trace(const CMat &a)
{
    if (a.rows() != a.cols())
        throw std::invalid_argument("trace: matrix not square");
    cxd t(0.0, 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i)
        t += a(i, i);
    return t;
}

inline double frobenius_norm(const CMat &a)
{
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            s += std::norm(a(i, j));
    return std::sqrt(s);
}

/// a^H b for column vectors.
inline cxd inner(const CMat &a, const CMat &b)
{
    if (a.cols() != 1 || b.cols() != 1 || a.rows() != b.rows())
        throw std::invalid_argument("inner: expects column vectors of equal length");
    cxd s(0.0, 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i)
        s += std::conj(a(i, 0)) * b(i, 0);
    return s;
}

/// a b^H for column vectors.
inline CMat outer(const CMat &a, const CMat &b)
{
    if (a.cols() != 1 || b.cols() != 1)
        throw std::invalid_argument("outer: expects column vectors");
    CMat r(a.rows(), b.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < b.rows(); ++j)
            r(i, j) = a(i, 0) * std::conj(b(j, 0));
    return r;
}

inline CMat kron(const CMat &a, const CMat &b)
{
    CMat r(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
        {
            const cxd aij = a(i, j);
            if (aij == cxd(0.0, 0.0))
                continue;
            for (std::size_t k = 0; k < b.rows(); ++k)
                for (std::size_t l = 0; l < b.cols(); ++l)
                    r(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
        }
    return r;
}

/// Column-stacking: vec(A)[i + j*rows] = A(i,j).
inline CMat vec(const CMat &a)
{
    CMat v(a.rows() * a.cols(), 1);
    for (std::size_t j = 0; j < a.cols(); ++j)
        for (std::size_t i = 0; i < a.rows(); ++i)
            v(j * a.rows() + i, 0) = a(i, j);
    return v;
}

inline CMat unvec(const CMat &v, std::size_t rows, std::size_t cols)
{
    if (v.cols() != 1 || v.rows() != rows * cols)
        throw std::invalid_argument("unvec: length does not match target shape");
    CMat a(rows, cols);
    for (std::size_t j = 0; j < cols; ++j)
        for (std::size_t i = 0; i < rows; ++i)
            a(i, j) = v(j * rows + i, 0);
    return a;
}

inline bool is_finite(const CMat &a)
{
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (!std::isfinite(a(i, j).real()) || !std::isfinite(a(i, j).imag()))
                return false;
    return true;
}

inline double max_abs(const CMat &a)
{
    double m = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            m = std::max(m, std::abs(a(i, j)));
    return m;
}

inline bool is_hermitian(const CMat &a, double tol = 1e-12)
{
    if (a.rows() != a.cols())
        return false;
    const double scale = std::max(1.0, max_abs(a));
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = i; j < a.cols(); ++j)
            if (std::abs(a(i, j) - std::conj(a(j, i))) > tol * scale)
                return false;
    return true;
}

namespace detail {

inline double one_norm(const CMat &a)
{
    double best = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j)
    {
        double s = 0.0;
        for (std::size_t i = 0; i < a.rows(); ++i)
            s += std::abs(a(i, j));
        best = std::max(best, s);
    }
    return best;
}

} // namespace detail

/// Inverse via Gauss-Jordan elimination with partial pivoting. Sizes here
/// stay in the low tens, so nothing fancier is warranted. Throws
/// singular_error when a pivot vanishes or the reciprocal condition
/// estimate 1/(norm1(A)*norm1(A^-1)) falls below 1e-12.
inline CMat inverse(const CMat &a)
{
    if (a.rows() != a.cols() || a.rows() == 0)
        throw std::invalid_argument("inverse: matrix not square");
    const std::size_t n = a.rows();
    const double norm_a = detail::one_norm(a);
    CMat w = a;
    CMat inv = CMat::identity(n);
    for (std::size_t col = 0; col < n; ++col)
    {
        std::size_t piv = col;
        double best = std::abs(w(col, col));
        for (std::size_t i = col + 1; i < n; ++i)
            if (std::abs(w(i, col)) > best)
            {
                best = std::abs(w(i, col));
                piv = i;
            }
        if (!(best > 0.0))
            throw singular_error("inverse: singular matrix (zero pivot)");
        if (piv != col)
            for (std::size_t j = 0; j < n; ++j)
            {
                std::swap(w(piv, j), w(col, j));
                std::swap(inv(piv, j), inv(col, j));
            }
        const cxd p = w(col, col);
        for (std::size_t j = 0; j < n; ++j)
        {
            w(col, j) /= p;
            inv(col, j) /= p;
        }
        for (std::size_t i = 0; i < n; ++i)
        {
            if (i == col)
                continue;
            const cxd f = w(i, col);
            if (f == cxd(0.0, 0.0))
                continue;
            for (std::size_t j = 0; j < n; ++j)
            {
                w(i, j) -= f * w(col, j);
                inv(i, j) -= f * inv(col, j);
            }
        }
    }
    const double rcond = 1.0 / std::max(norm_a * detail::one_norm(inv), 1e-300);
    if (rcond < 1e-12)
        throw singular_error("inverse: matrix too ill-conditioned (rcond < 1e-12)");
    if (!is_finite(inv))
        throw singular_error("inverse: non-finite result");
    return inv;
}

struct EigResult {
    std::vector<double> values; // ascending
    CMat vectors;               // columns, matching order
};

/// Full eigendecomposition of a Hermitian matrix via cyclic complex Jacobi
/// rotations. Fine for the sizes used here (a few tens of rows).
inline EigResult hermitian_eig(const CMat &a, int max_sweeps = 64)
{
    if (!is_hermitian(a, 1e-10))
        throw std::invalid_argument("hermitian_eig: input not Hermitian");
    const std::size_t n = a.rows();
    CMat w = a;
    CMat v = CMat::identity(n);
    const double fnorm = frobenius_norm(a);
    const double stop = std::max(1e-300, 1e-14 * fnorm);
    for (int sweep = 0; sweep < max_sweeps; ++sweep)
    {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q)
                off += std::norm(w(p, q));
        if (std::sqrt(2.0 * off) <= stop)
            break;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q)
            {
                const cxd g = w(p, q);
                const double ag = std::abs(g);
                if (ag <= 1e-300)
                    continue;
                const double app = w(p, p).real();
                const double aqq = w(q, q).real();
                const double tau = (aqq - app) / (2.0 * ag);
                const double t = (tau >= 0.0) ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                              : -1.0 / (-tau + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                const cxd u = g / ag;
                const cxd su = s * u;
                const cxd su_conj = s * std::conj(u);
                // A <- J^H A J with the rotation in the (p,q) plane.
                for (std::size_t k = 0; k < n; ++k)
                {
                    const cxd xk = w(k, p), yk = w(k, q);
                    w(k, p) = c * xk - su_conj * yk;
                    w(k, q) = su * xk + c * yk;
                }
                for (std::size_t k = 0; k < n; ++k)
                {
                    const cxd xk = w(p, k), yk = w(q, k);
                    w(p, k) = c * xk - su * yk;
                    w(q, k) = su_conj * xk + c * yk;
                }
                w(p, q) = cxd(0.0, 0.0);
                w(q, p) = cxd(0.0, 0.0);
                w(p, p) = cxd(w(p, p).real(), 0.0);
                w(q, q) = cxd(w(q, q).real(), 0.0);
                for (std::size_t k = 0; k < n; ++k)
                {
                    const cxd xk = v(k, p), yk = v(k, q);
                    v(k, p) = c * xk - su_conj * yk;
                    v(k, q) = su * xk + c * yk;
                }
            }
    }
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i)
        order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return w(i, i).real() < w(j, j).real(); });
    EigResult res;
    res.values.resize(n);
    res.vectors = CMat(n, n);
    for (std::size_t j = 0; j < n; ++j)
    {
        res.values[j] = w(order[j], order[j]).real();
        for (std::size_t i = 0; i < n; ++i)
            res.vectors(i, j) = v(i, order[j]);
    }
    return res;
}

namespace detail {

// Rotate a column vector so its largest-magnitude entry is real nonnegative.
// First index wins on magnitude ties, which keeps results deterministic.
inline void fix_vector_phase(CMat &v)
{
    std::size_t best = 0;
    double bm = 0.0;
    for (std::size_t i = 0; i < v.rows(); ++i)
        if (std::abs(v(i, 0)) > bm)
        {
            bm = std::abs(v(i, 0));
            best = i;
        }
    if (bm <= 0.0)
        return;
    const cxd rot = std::conj(v(best, 0)) / bm;
    for (std::size_t i = 0; i < v.rows(); ++i)
        v(i, 0) *= rot;
    v(best, 0) = cxd(v(best, 0).real(), 0.0);
}

// Best-effort dominant eigenpair of a Hermitian PSD matrix by power
// iteration from a fixed start vector. Never throws; callers that need the
// strict contract use principal_eigenpair.
inline std::pair<double, CMat> power_iteration_estimate(const CMat &a, int max_iters, double tol,
                                                        bool *converged = nullptr)
{
    const std::size_t n = a.rows();
    CMat v(n, 1);
    // Fixed pseudo-random start so runs are reproducible and the start is
    // almost surely not orthogonal to the dominant eigenvector.
    std::uint64_t s = 0x9e3779b97f4a7c15ULL;
    for (std::size_t i = 0; i < n; ++i)
    {
        s += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = s;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        z ^= z >> 31;
        const double re = 1.0 + 0.25 * (double(z & 0xffffffffULL) / 4294967296.0);
        const double im = 0.25 * (double(z >> 32) / 4294967296.0);
        v(i, 0) = cxd(re, im);
    }
    double nv = frobenius_norm(v);
    for (std::size_t i = 0; i < n; ++i)
        v(i, 0) /= nv;
    double lambda = 0.0;
    bool ok = false;
    for (int it = 0; it < max_iters; ++it)
    {
        CMat av = matmul(a, v);
        lambda = inner(v, av).real();
        double resid = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            resid += std::norm(av(i, 0) - lambda * v(i, 0));
        resid = std::sqrt(resid);
        if (resid <= tol * std::max(std::abs(lambda), 1e-300))
        {
            ok = true;
            break;
        }
        const double na = frobenius_norm(av);
        if (na <= 1e-300)
        {
            // Start vector sits in the null space; the matrix may still be
            // nonzero, so restart from a shifted basis vector.
            v = CMat(n, 1);
            v(it % int(n), 0) = 1.0;
            continue;
        }
        for (std::size_t i = 0; i < n; ++i)
            v(i, 0) = av(i, 0) / na;
    }
    fix_vector_phase(v);
    if (converged)
        *converged = ok;
    return {lambda, v};
}

} // namespace detail

/// Dominant eigenpair of a Hermitian PSD matrix. The returned vector has
/// unit norm and its largest-magnitude entry rotated real nonnegative, so
/// results are deterministic. Throws convergence_error if the residual
/// tolerance is not met within the iteration cap.
inline std::pair<double, CMat> principal_eigenpair(const CMat &a, int max_iters = 20000, double tol = 1e-10)
{
    if (!is_hermitian(a, 1e-9))
        throw std::invalid_argument("principal_eigenpair: input not Hermitian");
    const std::size_t n = a.rows();
    if (n == 0)
        throw std::invalid_argument("principal_eigenpair: empty matrix");
    if (frobenius_norm(a) <= 1e-300)
    {
        CMat v(n, 1);
        v(0, 0) = 1.0;
        return {0.0, v};
    }
    bool ok = false;
    auto res = detail::power_iteration_estimate(a, max_iters, tol, &ok);
    if (!ok)
        throw convergence_error("principal_eigenpair: power iteration did not converge");
    return res;
}

/// PSD factor Q with a = Q^T * conj(Q). This is the transposed layout of
/// the conventional lower-triangular a = L L^H factorization (Q = L^T);
/// column n of Q equals row n of L. Plain Cholesky is attempted first; on
/// breakdown (rank-deficient input) the factor is rebuilt from the
/// eigen-square-root with eigenvalues clamped at zero and sorted in
/// descending order. Inputs with an eigenvalue below -1e-8*trace are
/// rejected as indefinite.
inline CMat cholesky_psd(const CMat &a)
{
    if (!is_hermitian(a, 1e-10))
        throw std::invalid_argument("cholesky_psd: input not Hermitian");
    const std::size_t n = a.rows();
    const double tr = std::abs(trace(a).real());
    const double tiny = 1e-14 * std::max(tr, 1e-30);
    CMat l(n, n);
    bool plain_ok = true;
    for (std::size_t j = 0; j < n && plain_ok; ++j)
    {
        double d = a(j, j).real();
        for (std::size_t k = 0; k < j; ++k)
            d -= std::norm(l(j, k));
        if (d <= tiny)
        {
            plain_ok = false;
            break;
        }
        const double ld = std::sqrt(d);
        l(j, j) = ld;
        for (std::size_t i = j + 1; i < n; ++i)
        {
            cxd s = a(i, j);
            for (std::size_t k = 0; k < j; ++k)
                s -= l(i, k) * std::conj(l(j, k));
            l(i, j) = s / ld;
        }
    }
    if (!plain_ok)
    {
        EigResult eig = hermitian_eig(a);
        const double floor_neg = -1e-8 * std::max(tr, 1e-30);
        if (!eig.values.empty() && eig.values.front() < floor_neg)
            throw std::invalid_argument("cholesky_psd: input significantly indefinite");
        const double lam_max = eig.values.empty() ? 0.0 : std::max(0.0, eig.values.back());
        l = CMat(n, n);
        // Columns ordered by descending eigenvalue. Numerically-zero modes
        // become zero columns; square roots of rounding-level eigenvalues
        // would otherwise leak noise into everything built from the factor.
        for (std::size_t j = 0; j < n; ++j)
        {
            const std::size_t src = n - 1 - j;
            const double lam = eig.values[src];
            if (lam <= 1e-12 * lam_max)
                continue;
            const double sq = std::sqrt(lam);
            for (std::size_t i = 0; i < n; ++i)
                l(i, j) = sq * eig.vectors(i, src);
        }
    }
    return transpose(l);
}

/// Left pseudo-inverse (F^H F)^-1 F^H for a tall full-column-rank matrix.
inline CMat left_pseudo_inverse(const CMat &f)
{
    if (f.rows() < f.cols() || f.cols() == 0)
        throw std::invalid_argument("left_pseudo_inverse: expects rows >= cols >= 1");
    CMat fh = hermitian(f);
    CMat gram = matmul(fh, f);
    CMat gram_inv;
    try
    {
        gram_inv = inverse(gram);
    }
    catch (const singular_error &)
    {
        throw singular_error("left_pseudo_inverse: rank-deficient input");
    }
    return matmul(gram_inv, fh);
}

} // namespace mcbeam

#endif // MCBEAM_MATRIX_HPP
