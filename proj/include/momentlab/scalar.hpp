#pragma once

/**
 * @file scalar.hpp
 * @brief Scalar: an exact rational or a precision-tagged real.
 *
 * Exact values stay exact under + - * /. Mixing an exact value with a real
 * promotes the exact operand to the real operand's precision. Dividing by an
 * exact zero throws std::domain_error.
 */

#include "momentlab/real.hpp"

#include <gmpxx.h>

#include <cctype>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace momentlab {

using Rational = mpq_class;
using Integer = mpz_class;

namespace numerics {

enum class ScalarKind { exact, real };

class Scalar {
public:
    Scalar() : v_(Rational(0)) {}
    Scalar(int value) : v_(Rational(value)) {}
    Scalar(long value) : v_(Rational(value)) {}
    Scalar(long long value) : v_(Rational(Integer(std::to_string(value)))) {}
    Scalar(unsigned long value) : v_(Rational(value)) {}
    Scalar(const Integer& value) : v_(Rational(value)) {}
    Scalar(Rational value) : v_(canonical(std::move(value))) {}
    Scalar(Real value) : v_(std::move(value)) {}

    static Scalar ratio(long num, long den) {
        if (den == 0) throw std::domain_error("zero denominator");
        return Scalar(Rational(num, den));
    }

    /// "7", "-3/4" parse as exact; anything else as a real at `digits`.
    static Scalar parse(std::string_view text, int digits = kDefaultPrecision);

    ScalarKind kind() const { return std::holds_alternative<Rational>(v_) ? ScalarKind::exact : ScalarKind::real; }
    bool is_exact() const { return kind() == ScalarKind::exact; }
    bool is_real() const { return kind() == ScalarKind::real; }

    /// Decimal working precision; 0 for exact values.
    int precision() const { return is_exact() ? 0 : std::get<Real>(v_).digits(); }

    const Rational& rational() const {
        if (!is_exact()) throw std::logic_error("scalar is not exact");
        return std::get<Rational>(v_);
    }
    const Real& real() const {
        if (is_exact()) throw std::logic_error("scalar is not real");
        return std::get<Real>(v_);
    }

    Real to_real(int digits) const {
        if (is_exact()) return Real(std::get<Rational>(v_), digits);
        return std::get<Real>(v_).with_digits(digits);
    }

    /// Exact value; for reals the binary expansion is converted without rounding.
    Rational to_rational() const { return is_exact() ? rational() : real().to_rational(); }

    double to_double() const { return is_exact() ? rational().get_d() : real().to_double(); }

    int sign() const { return is_exact() ? sgn(rational()) : real().sign(); }
    bool is_zero() const { return sign() == 0; }
    bool is_integer() const { return is_exact() && rational().get_den() == 1; }

    /// "num/den" for exact values, scientific notation for reals.
    std::string to_string() const {
        if (is_exact()) {
            const Rational& q = rational();
            return q.get_num().get_str() + "/" + q.get_den().get_str();
        }
        return real().to_string();
    }

    /// Rounded display, exact values unchanged.
    std::string to_display(int significant) const {
        if (is_exact()) return to_string();
        return real().to_string(significant);
    }

    friend Scalar operator+(const Scalar& a, const Scalar& b) {
        if (a.is_exact() && b.is_exact()) return Scalar(Rational(a.rational() + b.rational()));
        return promote(a, b, [](const Real& x, const Real& y) { return x + y; });
    }
    friend Scalar operator-(const Scalar& a, const Scalar& b) {
        if (a.is_exact() && b.is_exact()) return Scalar(Rational(a.rational() - b.rational()));
        return promote(a, b, [](const Real& x, const Real& y) { return x - y; });
    }
    friend Scalar operator*(const Scalar& a, const Scalar& b) {
        if (a.is_exact() && b.is_exact()) return Scalar(Rational(a.rational() * b.rational()));
        return promote(a, b, [](const Real& x, const Real& y) { return x * y; });
    }
    friend Scalar operator/(const Scalar& a, const Scalar& b) {
        if (b.is_zero()) throw std::domain_error("division by zero");
        if (a.is_exact() && b.is_exact()) return Scalar(Rational(a.rational() / b.rational()));
        return promote(a, b, [](const Real& x, const Real& y) { return x / y; });
    }
    friend Scalar operator-(const Scalar& a) {
        if (a.is_exact()) return Scalar(Rational(-a.rational()));
        return Scalar(-a.real());
    }

    Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
    Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
    Scalar& operator*=(const Scalar& o) { return *this = *this * o; }
    Scalar& operator/=(const Scalar& o) { return *this = *this / o; }

    /// Value comparison; mixed kinds compare exactly.
    friend int compare(const Scalar& a, const Scalar& b) {
        if (a.is_exact() && b.is_exact()) return cmp(a.rational(), b.rational());
        if (a.is_real() && b.is_real()) return compare(a.real(), b.real());
        if (a.is_real()) return compare(a.real(), b.rational());
        return -compare(b.real(), a.rational());
    }

    friend bool operator==(const Scalar& a, const Scalar& b) { return compare(a, b) == 0; }
    friend bool operator!=(const Scalar& a, const Scalar& b) { return compare(a, b) != 0; }
    friend bool operator<(const Scalar& a, const Scalar& b) { return compare(a, b) < 0; }
    friend bool operator>(const Scalar& a, const Scalar& b) { return compare(a, b) > 0; }
    friend bool operator<=(const Scalar& a, const Scalar& b) { return compare(a, b) <= 0; }
    friend bool operator>=(const Scalar& a, const Scalar& b) { return compare(a, b) >= 0; }

    /// Identical kind, precision and value (bitwise for reals).
    bool identical(const Scalar& o) const {
        if (kind() != o.kind()) return false;
        if (is_exact()) return rational() == o.rational();
        return precision() == o.precision() && compare(real(), o.real()) == 0;
    }

private:
    static Rational canonical(Rational q) {
        q.canonicalize();
        return q;
    }

    template <class Fn>
    static Scalar promote(const Scalar& a, const Scalar& b, Fn fn) {
        int digits = std::max(a.precision(), b.precision());
        return Scalar(fn(a.to_real(digits), b.to_real(digits)));
    }

    std::variant<Rational, Real> v_;
};

inline Scalar abs(const Scalar& a) { return a.sign() < 0 ? -a : a; }

/// Integer power; 0^0 = 1. Negative exponents divide.
inline Scalar pow(const Scalar& base, long n) {
    if (base.is_exact()) {
        if (n < 0) {
            if (base.is_zero()) throw std::domain_error("division by zero");
            return Scalar(1) / pow(base, -n);
        }
        Integer num, den;
        mpz_pow_ui(num.get_mpz_t(), base.rational().get_num_mpz_t(), static_cast<unsigned long>(n));
        mpz_pow_ui(den.get_mpz_t(), base.rational().get_den_mpz_t(), static_cast<unsigned long>(n));
        return Scalar(Rational(num, den));
    }
    if (n < 0 && base.is_zero()) throw std::domain_error("division by zero");
    return Scalar(pow(base.real(), n));
}

/// Working precision for results that cannot stay exact.
inline int working_digits(const Scalar& a, int fallback) { return a.is_exact() ? fallback : a.precision(); }

inline Scalar sqrt(const Scalar& a, int digits = kDefaultPrecision) {
    if (a.sign() < 0) throw std::domain_error("square root of a negative number");
    if (a.is_exact()) {
        const Rational& q = a.rational();
        if (mpz_perfect_square_p(q.get_num_mpz_t()) && mpz_perfect_square_p(q.get_den_mpz_t())) {
            return Scalar(Rational(Integer(sqrt(q.get_num())), Integer(sqrt(q.get_den()))));
        }
    }
    return Scalar(sqrt(a.to_real(working_digits(a, digits))));
}

/// Real power base^e for base > 0 (or base = 0 with e > 0). Exact when e is an integer.
inline Scalar pow(const Scalar& base, const Scalar& e, int digits = kDefaultPrecision) {
    if (e.is_integer() && e.rational().get_num().fits_slong_p()) {
        return pow(base, e.rational().get_num().get_si());
    }
    if (base.sign() < 0) throw std::domain_error("non-integer power of a negative number");
    if (base.is_zero()) {
        if (e.sign() > 0) return base.is_exact() ? Scalar(0) : Scalar(Real(working_digits(base, digits)));
        throw std::domain_error("zero to a non-positive power");
    }
    int d = std::max(working_digits(base, digits), working_digits(e, digits));
    return Scalar(pow(base.to_real(d), e.to_real(d)));
}

inline Scalar Scalar::parse(std::string_view text, int digits) {
    std::string s;
    for (char c : text) {
        if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
    }
    if (s.empty()) throw std::invalid_argument("empty number");
    auto is_int = [](std::string_view t) {
        std::size_t i = (!t.empty() && (t[0] == '-' || t[0] == '+')) ? 1 : 0;
        if (i >= t.size()) return false;
        for (; i < t.size(); ++i) {
            if (!std::isdigit(static_cast<unsigned char>(t[i]))) return false;
        }
        return true;
    };
    auto strip_plus = [](std::string t) {
        if (!t.empty() && t[0] == '+') t.erase(0, 1);
        return t;
    };
    auto slash = s.find('/');
    if (slash != std::string::npos) {
        std::string num = s.substr(0, slash), den = s.substr(slash + 1);
        if (!is_int(num) || !is_int(den)) throw std::invalid_argument("not a rational: '" + s + "'");
        Integer n(strip_plus(num)), d(strip_plus(den));
        if (d == 0) throw std::domain_error("zero denominator in '" + s + "'");
        return Scalar(Rational(n, d));
    }
    if (is_int(s)) return Scalar(Integer(strip_plus(s)));
    return Scalar(Real::parse(s, std::max(digits, kMinPrecision)));
}

/// Count of significant mantissa digits in a decimal literal such as "-1.250e-3".
inline int mantissa_digits(std::string_view text) {
    int count = 0;
    bool leading = true;
    for (char c : text) {
        if (c == 'e' || c == 'E') break;
        if (!std::isdigit(static_cast<unsigned char>(c))) continue;
        if (leading && c == '0') continue;
        leading = false;
        ++count;
    }
    return count;
}

/// Promote a list to a uniform kind: all exact, or all real at the largest precision present.
inline std::vector<Scalar> unify_kind(std::vector<Scalar> values) {
    int digits = 0;
    for (const auto& v : values) digits = std::max(digits, v.precision());
    if (digits == 0) return values;
    for (auto& v : values) {
        if (v.is_exact() || v.precision() != digits) v = Scalar(v.to_real(digits));
    }
    return values;
}

}  // namespace numerics

using numerics::Scalar;
using numerics::ScalarKind;

}  // namespace momentlab
