#pragma once

/**
 * @file sturm.hpp
 * @brief Exact real-root counting for rational polynomials via Sturm chains.
 *
 * Polynomials here are plain ascending coefficient vectors of Rational.
 * Interval endpoints are optional; an absent endpoint means -inf / +inf.
 */

#include "momentlab/scalar.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace momentlab::numerics::sturm {

using RatPoly = std::vector<Rational>;

inline void trim(RatPoly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

inline Rational eval(const RatPoly& p, const Rational& x) {
    Rational acc = 0;
    for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * x + *it;
    return acc;
}

inline RatPoly derivative(const RatPoly& p) {
    RatPoly d;
    for (std::size_t j = 1; j < p.size(); ++j) d.push_back(p[j] * static_cast<long>(j));
    trim(d);
    return d;
}

/// Remainder of a / b (b nonzero).
inline RatPoly remainder(RatPoly a, const RatPoly& b) {
    trim(a);
    while (a.size() >= b.size() && !a.empty()) {
        const std::size_t shift = a.size() - b.size();
        Rational f = a.back() / b.back();
        for (std::size_t j = 0; j < b.size(); ++j) a[j + shift] -= f * b[j];
        a.pop_back();
        trim(a);
    }
    return a;
}

/// Exact quotient a / b, assuming b divides a.
inline RatPoly quotient(RatPoly a, const RatPoly& b) {
    trim(a);
    if (a.size() < b.size()) return {};
    RatPoly q(a.size() - b.size() + 1);
    while (a.size() >= b.size() && !a.empty()) {
        const std::size_t shift = a.size() - b.size();
        Rational f = a.back() / b.back();
        q[shift] = f;
        for (std::size_t j = 0; j < b.size(); ++j) a[j + shift] -= f * b[j];
        a.pop_back();
        trim(a);
    }
    return q;
}

inline RatPoly monic(RatPoly p) {
    if (p.empty()) return p;
    Rational lead = p.back();
    for (auto& c : p) c /= lead;
    return p;
}

inline RatPoly gcd(RatPoly a, RatPoly b) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        RatPoly r = remainder(a, b);
        a = std::move(b);
        b = std::move(r);
    }
    return monic(a);
}

/// p / gcd(p, p'): same distinct roots, all simple.
inline RatPoly square_free(const RatPoly& p) {
    RatPoly d = derivative(p);
    if (d.empty()) return p;
    return quotient(p, gcd(p, d));
}

inline std::vector<RatPoly> chain(const RatPoly& p) {
    std::vector<RatPoly> seq{p, derivative(p)};
    while (!seq.back().empty()) {
        RatPoly r = remainder(seq[seq.size() - 2], seq.back());
        for (auto& c : r) c = -c;
        if (r.empty()) break;
        // positive rescaling keeps coefficient growth down without changing signs
        Rational scale = abs(r.back());
        for (auto& c : r) c /= scale;
        seq.push_back(std::move(r));
    }
    if (seq.back().empty()) seq.pop_back();
    return seq;
}

// Sign of p at -inf (dir < 0) or +inf (dir > 0).
inline int sign_at_infinity(const RatPoly& p, int dir) {
    if (p.empty()) return 0;
    int s = sgn(p.back());
    if (dir < 0 && (p.size() - 1) % 2 == 1) s = -s;
    return s;
}

inline int variations(const std::vector<RatPoly>& seq, const std::optional<Rational>& x, int dir) {
    int count = 0;
    int last = 0;
    for (const auto& q : seq) {
        int s = x ? sgn(eval(q, *x)) : sign_at_infinity(q, dir);
        if (s == 0) continue;
        if (last != 0 && s != last) ++count;
        last = s;
    }
    return count;
}

/// Number of distinct real roots of p in the closed interval [lo, hi].
inline std::size_t count_roots(const RatPoly& poly, const std::optional<Rational>& lo, const std::optional<Rational>& hi) {
    RatPoly p = poly;
    trim(p);
    if (p.empty()) throw std::invalid_argument("zero polynomial has infinitely many roots");
    if (p.size() == 1) return 0;
    if (lo && hi && *hi < *lo) return 0;
    RatPoly sf = square_free(p);
    auto seq = chain(sf);
    int v_lo = variations(seq, lo, -1);
    int v_hi = variations(seq, hi, +1);
    int n = v_lo - v_hi;
    if (lo && eval(sf, *lo) == 0) ++n;
    return static_cast<std::size_t>(n);
}

/// Cauchy bound: every real root lies in [-B, B].
inline Rational root_bound(const RatPoly& poly) {
    RatPoly p = poly;
    trim(p);
    Rational m = 0;
    for (std::size_t j = 0; j + 1 < p.size(); ++j) {
        Rational r = abs(p[j] / p.back());
        if (r > m) m = r;
    }
    return m + 1;
}

}  // namespace momentlab::numerics::sturm
