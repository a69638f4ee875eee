#pragma once

/**
 * @file linalg.hpp
 * @brief Determinants and small dense solves over Scalar.
 *
 * Exact matrices go through Bareiss fraction-free elimination on an
 * integer-scaled copy; matrices with any real entry use LU with partial
 * pivoting at the largest entry precision.
 */

#include "momentlab/scalar.hpp"

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace momentlab::numerics {

using Matrix = std::vector<std::vector<Scalar>>;

namespace detail {

inline std::size_t require_square(const Matrix& m) {
    const std::size_t n = m.size();
    if (n == 0) throw std::invalid_argument("matrix must have at least one row");
    for (const auto& row : m) {
        if (row.size() != n) throw std::invalid_argument("matrix is not square");
    }
    return n;
}

inline bool all_exact(const Matrix& m) {
    for (const auto& row : m) {
        for (const auto& x : row) {
            if (!x.is_exact()) return false;
        }
    }
    return true;
}

inline int max_precision(const Matrix& m) {
    int d = 0;
    for (const auto& row : m) {
        for (const auto& x : row) d = std::max(d, x.precision());
    }
    return d;
}

// Bareiss on an integer matrix; destroys its input.
inline Integer bareiss_integer(std::vector<std::vector<Integer>>& a) {
    const std::size_t n = a.size();
    Integer prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (a[k][k] == 0) {
            std::size_t p = k + 1;
            while (p < n && a[p][k] == 0) ++p;
            if (p == n) return 0;
            std::swap(a[k], a[p]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                Integer t = a[i][j] * a[k][k] - a[i][k] * a[k][j];
                mpz_divexact(a[i][j].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
            }
        }
        prev = a[k][k];
    }
    Integer det = a[n - 1][n - 1];
    return sign < 0 ? Integer(-det) : det;
}

inline Rational determinant_exact(const Matrix& m) {
    const std::size_t n = m.size();
    // Clear denominators row by row: det(M) = det(D M) / prod(d_i).
    std::vector<std::vector<Integer>> a(n, std::vector<Integer>(n));
    Integer scale = 1;
    for (std::size_t i = 0; i < n; ++i) {
        Integer l = 1;
        for (const auto& x : m[i]) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.rational().get_den_mpz_t());
        for (std::size_t j = 0; j < n; ++j) {
            const Rational& q = m[i][j].rational();
            a[i][j] = q.get_num() * (l / q.get_den());
        }
        scale *= l;
    }
    return Rational(bareiss_integer(a), scale);
}

inline Real determinant_real(const Matrix& m, int digits) {
    const std::size_t n = m.size();
    std::vector<std::vector<Real>> a;
    a.reserve(n);
    for (const auto& row : m) {
        std::vector<Real> r;
        r.reserve(n);
        for (const auto& x : row) r.push_back(x.to_real(digits));
        a.push_back(std::move(r));
    }
    Real det(1L, digits);
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        for (std::size_t i = k + 1; i < n; ++i) {
            if (abs(a[i][k]) > abs(a[p][k])) p = i;
        }
        if (a[p][k].is_zero()) return Real(digits);
        if (p != k) {
            std::swap(a[p], a[k]);
            det = -det;
        }
        det *= a[k][k];
        for (std::size_t i = k + 1; i < n; ++i) {
            Real f = a[i][k] / a[k][k];
            for (std::size_t j = k + 1; j < n; ++j) a[i][j] -= f * a[k][j];
        }
    }
    return det;
}

}  // namespace detail

/// Determinant; exact for all-exact input, otherwise at the largest entry precision.
inline Scalar determinant(const Matrix& m) {
    detail::require_square(m);
    if (detail::all_exact(m)) return Scalar(detail::determinant_exact(m));
    return Scalar(detail::determinant_real(m, detail::max_precision(m)));
}

/// Solves A x = b by Gaussian elimination; throws std::domain_error if A is singular.
inline std::vector<Scalar> solve_linear(Matrix a, std::vector<Scalar> b) {
    const std::size_t n = detail::require_square(a);
    if (b.size() != n) throw std::invalid_argument("right-hand side length mismatch");
    const bool exact = detail::all_exact(a) && [&] {
        for (const auto& x : b) {
            if (!x.is_exact()) return false;
        }
        return true;
    }();
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = n;
        for (std::size_t i = k; i < n; ++i) {
            if (a[i][k].is_zero()) continue;
            if (p == n || (!exact && abs(a[i][k]) > abs(a[p][k]))) p = i;
            if (exact) break;
        }
        if (p == n) throw std::domain_error("singular linear system");
        std::swap(a[p], a[k]);
        std::swap(b[p], b[k]);
        for (std::size_t i = k + 1; i < n; ++i) {
            if (a[i][k].is_zero()) continue;
            Scalar f = a[i][k] / a[k][k];
            for (std::size_t j = k; j < n; ++j) a[i][j] -= f * a[k][j];
            b[i] -= f * b[k];
        }
    }
    std::vector<Scalar> x(n);
    for (std::size_t i = n; i-- > 0;) {
        Scalar s = b[i];
        for (std::size_t j = i + 1; j < n; ++j) s -= a[i][j] * x[j];
        x[i] = s / a[i][i];
    }
    return x;
}

}  // namespace momentlab::numerics
