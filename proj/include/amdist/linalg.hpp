#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "amdist/matrix.hpp"

namespace amdist {

namespace detail {

// Fraction-free Bareiss determinant over SparsePoly rows. All divisions
// are exact (Sylvester's identity); a failed division is an internal bug.
inline SparsePoly poly_bareiss_det(std::vector<std::vector<SparsePoly>> m) {
    const size_t n = m.size();
    if (n == 0) return SparsePoly::one();
    bool negate = false;
    SparsePoly prev = SparsePoly::one();
    for (size_t k = 0; k + 1 < n; ++k) {
        if (m[k][k].is_zero()) {
            size_t p = k + 1;
            while (p < n && m[p][k].is_zero()) ++p;
            if (p == n) return SparsePoly::zero();
            std::swap(m[k], m[p]);
            negate = !negate;
        }
        for (size_t i = k + 1; i < n; ++i) {
            for (size_t j = k + 1; j < n; ++j) {
                SparsePoly t = m[i][j] * m[k][k] - m[i][k] * m[k][j];
                auto q = t.divide_exact(prev);
                if (!q) throw Error("internal: Bareiss division not exact");
                m[i][j] = std::move(*q);
            }
            m[i][k] = SparsePoly::zero();
        }
        prev = m[k][k];
    }
    return negate ? -m[n - 1][n - 1] : m[n - 1][n - 1];
}

// Bareiss over a field ring directly (used for Rational).
template <ScalarRing R>
R field_bareiss_det(const Matrix<R>& mat) {
    const size_t n = mat.rows();
    if (n == 0) return RingTraits<R>::one();
    std::vector<std::vector<R>> m(n, std::vector<R>(n));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) m[i][j] = mat(i, j);
    bool negate = false;
    R prev = RingTraits<R>::one();
    for (size_t k = 0; k + 1 < n; ++k) {
        if (amdist::is_zero(m[k][k])) {
            size_t p = k + 1;
            while (p < n && amdist::is_zero(m[p][k])) ++p;
            if (p == n) return RingTraits<R>::zero();
            std::swap(m[k], m[p]);
            negate = !negate;
        }
        for (size_t i = k + 1; i < n; ++i) {
            for (size_t j = k + 1; j < n; ++j)
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            m[i][k] = RingTraits<R>::zero();
        }
        prev = m[k][k];
    }
    return negate ? -m[n - 1][n - 1] : m[n - 1][n - 1];
}

// Memoized Laplace expansion over column subsets: division-free, and much
// cheaper than Bareiss for symbolic matrices at desk scale (2^n subproblems
// instead of repeated big-polynomial exact divisions).
template <ScalarRing R>
R dp_laplace_det(const Matrix<R>& mat) {
    const size_t n = mat.rows();
    if (n == 0) return RingTraits<R>::one();
    if (n > 24) throw DimensionMismatch("dp determinant limited to n <= 24");
    std::vector<R> minors(size_t(1) << n, RingTraits<R>::zero());
    minors[0] = RingTraits<R>::one();
    for (uint32_t mask = 1; mask < (uint32_t(1) << n); ++mask) {
        size_t row = static_cast<size_t>(__builtin_popcount(mask)) - 1;
        R acc = RingTraits<R>::zero();
        bool odd = (row % 2 == 1);  // (-1)^(row + position) expansion signs
        for (size_t col = 0; col < n; ++col) {
            if (!(mask & (uint32_t(1) << col))) continue;
            const R& a = mat(row, col);
            if (!amdist::is_zero(a)) {
                R term = a * minors[mask ^ (uint32_t(1) << col)];
                acc = odd ? acc - term : acc + term;
            }
            odd = !odd;
        }
        minors[mask] = std::move(acc);
    }
    return minors[(size_t(1) << n) - 1];
}

template <ScalarRing R>
R cofactor_det(const Matrix<R>& mat) {
    const size_t n = mat.rows();
    if (n == 0) return RingTraits<R>::one();
    if (n == 1) return mat(0, 0);
    R acc = RingTraits<R>::zero();
    for (size_t j = 0; j < n; ++j) {
        if (amdist::is_zero(mat(0, j))) continue;
        R term = mat(0, j) * cofactor_det(mat.strike(0, j));
        acc = (j % 2 == 0) ? acc + term : acc - term;
    }
    return acc;
}

// Clears row denominators: returns polynomial rows plus the scale factor
// by which the polynomial determinant must be divided.
inline std::pair<std::vector<std::vector<SparsePoly>>, SparsePoly> clear_rows(
    const Matrix<RationalFunction>& mat) {
    const size_t n = mat.rows();
    std::vector<std::vector<SparsePoly>> rows(n, std::vector<SparsePoly>(mat.cols()));
    SparsePoly scale = SparsePoly::one();
    for (size_t i = 0; i < n; ++i) {
        SparsePoly row_scale = SparsePoly::one();
        for (size_t j = 0; j < mat.cols(); ++j)
            if (!mat(i, j).den().is_constant()) row_scale = row_scale * mat(i, j).den();
        for (size_t j = 0; j < mat.cols(); ++j) {
            const RationalFunction& e = mat(i, j);
            RationalFunction scaled = e * RationalFunction(row_scale);
            if (!scaled.is_polynomial()) throw Error("internal: row clearing failed");
            rows[i][j] = scaled.polynomial_value();
        }
        scale = scale * row_scale;
    }
    return {std::move(rows), std::move(scale)};
}

inline std::pair<std::vector<std::vector<SparsePoly>>, SparsePoly> clear_rows(
    const Matrix<Rational>& mat) {
    std::vector<std::vector<SparsePoly>> rows(mat.rows(),
                                              std::vector<SparsePoly>(mat.cols()));
    for (size_t i = 0; i < mat.rows(); ++i)
        for (size_t j = 0; j < mat.cols(); ++j) rows[i][j] = SparsePoly(mat(i, j));
    return {std::move(rows), SparsePoly::one()};
}

}  // namespace detail

// Exact determinant. Rational matrices use fraction-free Bareiss;
// rational-function matrices use cofactor expansion up to 5x5 and
// row-cleared Bareiss over the polynomial ring beyond that.
inline Rational exact_det(const Matrix<Rational>& m) {
    if (!m.square()) throw DimensionMismatch("determinant of non-square matrix");
    return detail::field_bareiss_det(m);
}

inline RationalFunction exact_det(const Matrix<RationalFunction>& m) {
    if (!m.square()) throw DimensionMismatch("determinant of non-square matrix");
    if (m.rows() <= 5) return detail::cofactor_det(m);
    auto [rows, scale] = detail::clear_rows(m);
    return RationalFunction(detail::poly_bareiss_det(std::move(rows)), scale);
}

template <ScalarRing R>
Matrix<R> adjugate(const Matrix<R>& m) {
    if (!m.square()) throw DimensionMismatch("adjugate of non-square matrix");
    const size_t n = m.rows();
    Matrix<R> adj(n, n);
    if (n == 0) return adj;
    if (n == 1) {
        adj(0, 0) = RingTraits<R>::one();
        return adj;
    }
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            R c = exact_det(m.strike(i, j));
            adj(j, i) = ((i + j) % 2 == 0) ? c : -c;
        }
    adj.set_labels(m.col_labels(), m.row_labels());
    return adj;
}

// cof(M) = e^T adj(M) e.
template <ScalarRing R>
R cof_sum(const Matrix<R>& m) {
    if (!m.square()) throw DimensionMismatch("cofactor-sum of non-square matrix");
    Matrix<R> adj = adjugate(m);
    R acc = RingTraits<R>::zero();
    for (size_t i = 0; i < m.rows(); ++i)
        for (size_t j = 0; j < m.cols(); ++j) acc = acc + adj(i, j);
    return acc;
}

namespace detail {

// Shared det(M + xJ) path: adjoin a fresh indeterminate, run polynomial
// Bareiss, and read off the x-coefficients. Degree > 1 in x contradicts
// the rank-one-update lemma and is reported as a hard error.
inline std::pair<SparsePoly, SparsePoly> det_cof_poly(
    std::vector<std::vector<SparsePoly>> rows, const std::vector<SparsePoly>& row_scales) {
    const uint32_t xvar = VarPool::instance().intern("$x");
    const size_t n = rows.size();
    SparsePoly x = SparsePoly::variable(xvar);
    for (size_t i = 0; i < n; ++i) {
        SparsePoly xs = x * row_scales[i];
        for (size_t j = 0; j < n; ++j) rows[i][j] += xs;
    }
    SparsePoly d = poly_bareiss_det(std::move(rows));
    auto by_deg = d.collect(xvar);
    for (auto& [deg, coeff] : by_deg)
        if (deg > 1 && !coeff.is_zero())
            throw NonLinearInX("det(M + xJ) has degree " + std::to_string(deg) + " in x");
    SparsePoly c0 = by_deg.count(0) ? by_deg[0] : SparsePoly::zero();
    SparsePoly c1 = by_deg.count(1) ? by_deg[1] : SparsePoly::zero();
    return {std::move(c0), std::move(c1)};
}

}  // namespace detail

// (det(M), cof(M)) in one pass, by adjoining a fresh indeterminate x and
// reading the constant and linear coefficients of det(M + xJ).
inline std::pair<Rational, Rational> det_and_cof(const Matrix<Rational>& m) {
    if (!m.square()) throw DimensionMismatch("det_and_cof of non-square matrix");
    const size_t n = m.rows();
    std::vector<std::vector<SparsePoly>> rows(n, std::vector<SparsePoly>(n));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) rows[i][j] = SparsePoly(m(i, j));
    auto [c0, c1] = detail::det_cof_poly(std::move(rows),
                                         std::vector<SparsePoly>(n, SparsePoly::one()));
    if (!c0.is_constant() || !c1.is_constant())
        throw Error("internal: non-constant coefficients for rational matrix");
    return {c0.constant_value(), c1.constant_value()};
}

inline std::pair<RationalFunction, RationalFunction> det_and_cof(
    const Matrix<RationalFunction>& m) {
    if (!m.square()) throw DimensionMismatch("det_and_cof of non-square matrix");
    const size_t n = m.rows();
    std::vector<std::vector<SparsePoly>> rows(n, std::vector<SparsePoly>(n));
    std::vector<SparsePoly> row_scales(n, SparsePoly::one());
    SparsePoly scale = SparsePoly::one();
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < n; ++j)
            if (!m(i, j).den().is_constant()) row_scales[i] = row_scales[i] * m(i, j).den();
        for (size_t j = 0; j < n; ++j) {
            RationalFunction scaled = m(i, j) * RationalFunction(row_scales[i]);
            if (!scaled.is_polynomial()) throw Error("internal: row clearing failed");
            rows[i][j] = scaled.polynomial_value();
        }
        scale = scale * row_scales[i];
    }
    auto [c0, c1] = detail::det_cof_poly(std::move(rows), row_scales);
    return {RationalFunction(c0, scale), RationalFunction(c1, scale)};
}

// Inverse via adjugate over the fraction field.
template <ScalarRing R>
Matrix<R> solve_inverse(const Matrix<R>& m) {
    if (!m.square()) throw DimensionMismatch("inverse of non-square matrix");
    R det = exact_det(m);
    if (amdist::is_zero(det)) throw SingularMatrix("matrix determinant is zero");
    Matrix<R> adj = adjugate(m);
    R inv_det = RingTraits<R>::one() / det;
    Matrix<R> out = adj * inv_det;
    out.set_labels(m.col_labels(), m.row_labels());
    return out;
}

}  // namespace amdist
