#pragma once

/**
 * @file quadrature.hpp
 * @brief Double-exponential quadrature at arbitrary precision.
 *
 * tanh_sinh   finite [a, b]; the integrand also receives the exact distances
 *             to both endpoints so endpoint singularities can be evaluated
 *             without cancellation.
 * exp_sinh    [a, inf) via x = a + exp(pi/2 sinh t).
 * sinh_sinh   (-inf, inf) via x = sinh(pi/2 sinh t).
 *
 * Levels halve the step and reuse all previous nodes. Convergence is declared
 * when two successive levels agree to the absolute tolerance.
 */

#include "momentlab/real.hpp"

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace momentlab::numerics {

class QuadratureError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct QuadratureOptions {
    int digits = kDefaultPrecision;  ///< precision of the returned value
    int guard_digits = 15;           ///< extra digits used internally
    int tolerance_exponent = 50;     ///< absolute target 10^-tolerance_exponent
    int max_levels = 10;
    int tail_exponent = 0;           ///< smallest endpoint distance 10^-tail; 0 = 8 * working digits
};

struct QuadratureResult {
    Real value;
    Real error_estimate;
    int levels = 0;
    std::size_t evaluations = 0;
};

namespace detail {

// Sums term(t) over t = k h on [t_lo, t_hi] for h = 1, 1/2, 1/4, ...
template <class Term>
QuadratureResult de_levels(Term&& term, double t_lo, double t_hi, const QuadratureOptions& opt) {
    const int wd = opt.digits + opt.guard_digits;
    const Real tol = pow(Real(10L, wd), static_cast<long>(-opt.tolerance_exponent));
    Real raw(wd);
    Real previous(wd);
    std::size_t evaluations = 0;
    auto add = [&](long k, long scale) {
        // t = k / 2^scale, exact in binary.
        Real t = ldexp(Real(k, wd), -scale);
        Real v = term(t);
        if (!v.is_finite()) throw QuadratureError("integrand is not finite at t = " + t.to_string(12));
        raw += v;
        ++evaluations;
    };
    for (int level = 0; level <= opt.max_levels; ++level) {
        const long per_unit = 1L << level;
        const long k_lo = static_cast<long>(std::ceil(t_lo * per_unit));
        const long k_hi = static_cast<long>(std::floor(t_hi * per_unit));
        for (long k = k_lo; k <= k_hi; ++k) {
            if (level > 0 && (k % 2 == 0)) continue;
            add(k, level);
        }
        Real estimate = ldexp(raw, -level);
        if (level >= 2) {
            Real diff = abs(estimate - previous);
            if (diff <= tol) {
                return QuadratureResult{estimate.with_digits(opt.digits), diff.with_digits(opt.digits), level,
                                        evaluations};
            }
        }
        previous = estimate;
    }
    throw QuadratureError("quadrature did not converge within " + std::to_string(opt.max_levels) + " levels");
}

inline int tail_exponent(const QuadratureOptions& opt) {
    return opt.tail_exponent > 0 ? opt.tail_exponent : 8 * (opt.digits + opt.guard_digits);
}

}  // namespace detail

/// f(x, x - a, b - x) integrated over [a, b].
template <class F>
QuadratureResult tanh_sinh(F&& f, const Real& a, const Real& b, const QuadratureOptions& opt = {}) {
    const int wd = opt.digits + opt.guard_digits;
    if (!(a < b)) throw std::invalid_argument("tanh_sinh: empty interval");
    const Real lo = a.with_digits(wd);
    const Real width = b.with_digits(wd) - lo;
    const Real half = ldexp(width, -1);
    const Real half_pi = ldexp(Real::pi(wd), -1);
    // Node distance to the nearer endpoint reaches half * 10^-tail at t_max.
    const double t_max = std::asinh(detail::tail_exponent(opt) * std::log(10.0) / M_PI) + 0.5;
    auto term = [&](const Real& t) {
        if (t.is_zero()) {
            Real mid = lo + half;
            return half_pi * half * f(mid, half, half);
        }
        Real u = half_pi * sinh(abs(t));
        Real e = exp(-ldexp(u, 1));  // exp(-2|u|)
        Real one(1L, wd);
        Real denom = one + e;
        Real near = ldexp(half * e, 1) / denom;                         // half * (1 - tanh|u|)
        Real weight = half_pi * cosh(t) * ldexp(e, 2) / (denom * denom);  // (pi/2) cosh t sech^2 u
        weight *= half;
        if (t.sign() > 0) {
            Real x = lo + width - near;
            return weight * f(x, width - near, near);
        }
        Real x = lo + near;
        return weight * f(x, near, width - near);
    };
    return detail::de_levels(term, -t_max, t_max, opt);
}

/// f(x, x - a) integrated over [a, inf); contributions beyond `cutoff` are assumed negligible.
template <class F>
QuadratureResult exp_sinh(F&& f, const Real& a, const Real& cutoff, const QuadratureOptions& opt = {}) {
    const int wd = opt.digits + opt.guard_digits;
    const Real lo = a.with_digits(wd);
    const Real half_pi = ldexp(Real::pi(wd), -1);
    const double span = std::max(cutoff.to_double() - a.to_double(), 2.0);
    const double t_hi = std::asinh(2.0 * std::log(span) / M_PI) + 0.25;
    const double t_lo = -std::asinh(2.0 * detail::tail_exponent(opt) * std::log(10.0) / M_PI) - 0.25;
    auto term = [&](const Real& t) {
        Real offset = exp(half_pi * sinh(t));
        Real weight = half_pi * cosh(t) * offset;
        return weight * f(lo + offset, offset);
    };
    return detail::de_levels(term, t_lo, t_hi, opt);
}

/// f(x) integrated over the real line; |x| > cutoff is assumed negligible.
template <class F>
QuadratureResult sinh_sinh(F&& f, const Real& cutoff, const QuadratureOptions& opt = {}) {
    const int wd = opt.digits + opt.guard_digits;
    const Real half_pi = ldexp(Real::pi(wd), -1);
    const double t_max = std::asinh(2.0 * std::asinh(std::max(cutoff.to_double(), 2.0)) / M_PI) + 0.25;
    auto term = [&](const Real& t) {
        Real s = half_pi * sinh(t);
        Real weight = half_pi * cosh(t) * cosh(s);
        return weight * f(sinh(s));
    };
    return detail::de_levels(term, -t_max, t_max, opt);
}

}  // namespace momentlab::numerics
