#pragma once

/**
 * @file real.hpp
 * @brief Arbitrary-precision real numbers carried with a decimal working precision.
 *
 * Thin RAII owner of an mpfr_t. Every value remembers the number of decimal
 * digits it was computed at; binary operations run at the larger of the two
 * operand precisions. All rounding is to nearest.
 */

#include <mpfr.h>
#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace momentlab {

inline constexpr int kDefaultPrecision = 60;
inline constexpr int kMinPrecision = 10;

class Real {
public:
    static mpfr_prec_t bits_for(int digits) {
        return static_cast<mpfr_prec_t>(std::ceil(digits * 3.3219280948873623)) + 4;
    }

    explicit Real(int digits = kDefaultPrecision) : digits_(clamp_digits(digits)) {
        mpfr_init2(v_, bits_for(digits_));
        mpfr_set_zero(v_, 1);
    }

    Real(long value, int digits) : Real(digits) { mpfr_set_si(v_, value, MPFR_RNDN); }

    Real(const mpq_class& value, int digits) : Real(digits) {
        mpfr_set_q(v_, value.get_mpq_t(), MPFR_RNDN);
    }

    Real(const mpz_class& value, int digits) : Real(digits) {
        mpfr_set_z(v_, value.get_mpz_t(), MPFR_RNDN);
    }

    Real(const Real& other) : digits_(other.digits_) {
        mpfr_init2(v_, mpfr_get_prec(other.v_));
        mpfr_set(v_, other.v_, MPFR_RNDN);
    }

    Real(Real&& other) noexcept : digits_(other.digits_) {
        mpfr_init2(v_, MPFR_PREC_MIN);
        mpfr_swap(v_, other.v_);
    }

    Real& operator=(const Real& other) {
        if (this != &other) {
            digits_ = other.digits_;
            mpfr_set_prec(v_, mpfr_get_prec(other.v_));
            mpfr_set(v_, other.v_, MPFR_RNDN);
        }
        return *this;
    }

    Real& operator=(Real&& other) noexcept {
        std::swap(digits_, other.digits_);
        mpfr_swap(v_, other.v_);
        return *this;
    }

    ~Real() { mpfr_clear(v_); }

    /// Parses a decimal string ("1.25", "-3e-7", "42").
    static Real parse(std::string_view text, int digits) {
        Real r(digits);
        std::string s(text);
        if (s.empty() || mpfr_set_str(r.v_, s.c_str(), 10, MPFR_RNDN) != 0) {
            throw std::invalid_argument("not a decimal number: '" + s + "'");
        }
        return r;
    }

    static Real from_double(double value, int digits) {
        Real r(digits);
        mpfr_set_d(r.v_, value, MPFR_RNDN);
        return r;
    }

    static Real pi(int digits) {
        Real r(digits);
        mpfr_const_pi(r.v_, MPFR_RNDN);
        return r;
    }

    int digits() const { return digits_; }

    /// Same value re-rounded to another precision.
    Real with_digits(int digits) const {
        Real r(digits);
        mpfr_set(r.v_, v_, MPFR_RNDN);
        return r;
    }

    int sign() const { return mpfr_sgn(v_); }
    bool is_zero() const { return mpfr_zero_p(v_) != 0; }
    bool is_finite() const { return mpfr_number_p(v_) != 0; }
    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

    /// Exact rational value of the binary floating-point number.
    mpq_class to_rational() const {
        if (!is_finite()) throw std::domain_error("non-finite real has no rational value");
        mpq_class q;
        mpfr_get_q(q.get_mpq_t(), v_);
        return q;
    }

    /// Scientific notation with `digits()` significant digits, e.g. "7.853e-01".
    std::string to_string() const { return to_string(digits_); }

    std::string to_string(int significant) const {
        if (mpfr_nan_p(v_)) return "nan";
        if (mpfr_inf_p(v_)) return sign() < 0 ? "-inf" : "inf";
        significant = std::max(significant, 1);
        mpfr_exp_t exp = 0;
        char* raw = mpfr_get_str(nullptr, &exp, 10, static_cast<size_t>(significant), v_, MPFR_RNDN);
        std::string mant(raw);
        mpfr_free_str(raw);
        std::string out;
        if (!mant.empty() && mant[0] == '-') {
            out.push_back('-');
            mant.erase(0, 1);
        }
        long e10 = is_zero() ? 0 : static_cast<long>(exp) - 1;
        out.push_back(mant[0]);
        if (mant.size() > 1) {
            out.push_back('.');
            out.append(mant, 1, std::string::npos);
        }
        out.push_back('e');
        out.push_back(e10 < 0 ? '-' : '+');
        std::string ee = std::to_string(e10 < 0 ? -e10 : e10);
        if (ee.size() < 2) ee.insert(0, "0");
        out += ee;
        return out;
    }

    friend int compare(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_); }
    friend int compare(const Real& a, const mpq_class& b) { return mpfr_cmp_q(a.v_, b.get_mpq_t()); }

    friend bool operator==(const Real& a, const Real& b) { return compare(a, b) == 0; }
    friend bool operator<(const Real& a, const Real& b) { return compare(a, b) < 0; }
    friend bool operator>(const Real& a, const Real& b) { return compare(a, b) > 0; }
    friend bool operator<=(const Real& a, const Real& b) { return compare(a, b) <= 0; }
    friend bool operator>=(const Real& a, const Real& b) { return compare(a, b) >= 0; }

    friend Real operator+(const Real& a, const Real& b) { return binary(a, b, mpfr_add); }
    friend Real operator-(const Real& a, const Real& b) { return binary(a, b, mpfr_sub); }
    friend Real operator*(const Real& a, const Real& b) { return binary(a, b, mpfr_mul); }
    friend Real operator/(const Real& a, const Real& b) {
        if (b.is_zero()) throw std::domain_error("division by zero");
        return binary(a, b, mpfr_div);
    }
    friend Real operator-(const Real& a) {
        Real r(a.digits_);
        mpfr_neg(r.v_, a.v_, MPFR_RNDN);
        return r;
    }

    Real& operator+=(const Real& o) { return *this = *this + o; }
    Real& operator-=(const Real& o) { return *this = *this - o; }
    Real& operator*=(const Real& o) { return *this = *this * o; }
    Real& operator/=(const Real& o) { return *this = *this / o; }

    friend Real abs(const Real& a) { return unary(a, mpfr_abs); }
    friend Real sqrt(const Real& a) {
        if (a.sign() < 0) throw std::domain_error("square root of a negative number");
        return unary(a, mpfr_sqrt);
    }
    friend Real exp(const Real& a) { return unary(a, mpfr_exp); }
    friend Real log(const Real& a) {
        if (a.sign() <= 0) throw std::domain_error("logarithm of a non-positive number");
        return unary(a, mpfr_log);
    }
    friend Real log1p(const Real& a) { return unary(a, mpfr_log1p); }
    friend Real expm1(const Real& a) { return unary(a, mpfr_expm1); }
    friend Real sinh(const Real& a) { return unary(a, mpfr_sinh); }
    friend Real cosh(const Real& a) { return unary(a, mpfr_cosh); }
    friend Real tgamma(const Real& a) { return unary(a, mpfr_gamma); }
    friend Real lgamma(const Real& a) {
        Real r(a.digits_);
        int sign = 0;
        mpfr_lgamma(r.v_, &sign, a.v_, MPFR_RNDN);
        return r;
    }

    friend Real pow(const Real& base, long n) {
        Real r(base.digits_);
        mpfr_pow_si(r.v_, base.v_, n, MPFR_RNDN);
        return r;
    }
    friend Real pow(const Real& base, const Real& e) { return binary(base, e, mpfr_pow); }

    /// 2^k scaling, exact.
    friend Real ldexp(const Real& a, long k) {
        Real r(a.digits_);
        mpfr_mul_2si(r.v_, a.v_, k, MPFR_RNDN);
        return r;
    }

private:
    using BinaryFn = int (*)(mpfr_ptr, mpfr_srcptr, mpfr_srcptr, mpfr_rnd_t);
    using UnaryFn = int (*)(mpfr_ptr, mpfr_srcptr, mpfr_rnd_t);

    static int clamp_digits(int digits) { return std::max(digits, 1); }

    static Real binary(const Real& a, const Real& b, BinaryFn fn) {
        Real r(std::max(a.digits_, b.digits_));
        fn(r.v_, a.v_, b.v_, MPFR_RNDN);
        return r;
    }

    static Real unary(const Real& a, UnaryFn fn) {
        Real r(a.digits_);
        fn(r.v_, a.v_, MPFR_RNDN);
        return r;
    }

    int digits_;
    mpfr_t v_;
};

}  // namespace momentlab
