#pragma once

/**
 * @file polynomial.hpp
 * @brief Dense univariate polynomials over Scalar, ascending coefficients.
 */

#include "momentlab/scalar.hpp"

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace momentlab::numerics {

class Polynomial {
public:
    Polynomial() = default;

    /// coeffs[j] multiplies x^j; trailing zeros are trimmed.
    explicit Polynomial(std::vector<Scalar> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

    const std::vector<Scalar>& coeffs() const { return coeffs_; }
    bool is_zero() const { return coeffs_.empty(); }

    /// -1 for the zero polynomial.
    long degree() const { return static_cast<long>(coeffs_.size()) - 1; }

    const Scalar& leading() const {
        if (coeffs_.empty()) throw std::logic_error("zero polynomial has no leading coefficient");
        return coeffs_.back();
    }

    Scalar coeff(std::size_t j) const { return j < coeffs_.size() ? coeffs_[j] : Scalar(0); }

    bool is_exact() const {
        for (const auto& c : coeffs_) {
            if (!c.is_exact()) return false;
        }
        return true;
    }

    Polynomial derivative() const {
        std::vector<Scalar> d;
        for (std::size_t j = 1; j < coeffs_.size(); ++j) d.push_back(coeffs_[j] * Scalar(static_cast<long>(j)));
        return Polynomial(std::move(d));
    }

    friend bool operator==(const Polynomial& a, const Polynomial& b) {
        if (a.coeffs_.size() != b.coeffs_.size()) return false;
        for (std::size_t j = 0; j < a.coeffs_.size(); ++j) {
            if (a.coeffs_[j] != b.coeffs_[j]) return false;
        }
        return true;
    }

    /// Human-readable form, e.g. "1/1 + 0/1 x + 1/1 x^2".
    std::string to_string() const {
        if (coeffs_.empty()) return "0";
        std::string out;
        for (std::size_t j = 0; j < coeffs_.size(); ++j) {
            if (j) out += " + ";
            out += coeffs_[j].to_string();
            if (j == 1) out += " x";
            if (j > 1) out += " x^" + std::to_string(j);
        }
        return out;
    }

private:
    void trim() {
        while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
    }

    std::vector<Scalar> coeffs_;
};

/// Horner evaluation.
inline Scalar poly_eval(const Polynomial& p, const Scalar& x) {
    const auto& c = p.coeffs();
    Scalar acc(0);
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
    return acc;
}

/// S_j(values): sum of all j-fold products of distinct entries; S_0 = 1.
inline Scalar elementary_symmetric(std::span<const Scalar> values, std::size_t j) {
    if (j > values.size()) {
        throw std::out_of_range("elementary_symmetric: j = " + std::to_string(j) + " exceeds " +
                                std::to_string(values.size()) + " values");
    }
    // e[k] holds S_k of the prefix processed so far.
    std::vector<Scalar> e(j + 1, Scalar(0));
    e[0] = Scalar(1);
    for (const auto& v : values) {
        for (std::size_t k = j; k >= 1; --k) e[k] = e[k] + e[k - 1] * v;
    }
    return e[j];
}

/// Monic polynomial prod (x - r); coefficient of x^{m-j} is (-1)^j S_j(roots).
inline Polynomial poly_from_roots(std::span<const Scalar> roots) {
    const std::size_t m = roots.size();
    std::vector<Scalar> coeffs(m + 1);
    for (std::size_t j = 0; j <= m; ++j) {
        Scalar s = elementary_symmetric(roots, j);
        coeffs[m - j] = (j % 2 == 0) ? s : -s;
    }
    return Polynomial(std::move(coeffs));
}

/// Polynomial with exact rational coefficients (reals converted without rounding).
inline std::vector<Rational> exact_coefficients(const Polynomial& p) {
    std::vector<Rational> out;
    out.reserve(p.coeffs().size());
    for (const auto& c : p.coeffs()) out.push_back(c.to_rational());
    return out;
}

}  // namespace momentlab::numerics

namespace momentlab {
using numerics::Polynomial;
}
