#pragma once

/**
 * @file measures.hpp
 * @brief Probability measures, their closed-form moments, and divided moments
 *        int x^k / P(x) dA(x) evaluated exactly (atomic) or by quadrature.
 */

#include "momentlab/families.hpp"
#include "momentlab/moment_sequence.hpp"
#include "momentlab/polynomial.hpp"
#include "momentlab/quadrature.hpp"
#include "momentlab/scalar.hpp"
#include "momentlab/scalar_json.hpp"
#include "momentlab/sturm.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace momentlab::measures {

struct Atom {
    Scalar location;
    Scalar weight;
};

/// Atomic measure, normalized to total mass 1 on construction.
class FiniteAtomic {
public:
    FiniteAtomic() : atoms_{{Scalar(0), Scalar(1)}} {}

    explicit FiniteAtomic(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
        if (atoms_.empty()) throw std::invalid_argument("finite-atomic measure needs at least one atom");
        Scalar total(0);
        for (const auto& a : atoms_) {
            if (a.weight.sign() < 0) throw std::invalid_argument("finite-atomic weights must be nonnegative");
            total += a.weight;
        }
        if (total.is_zero()) throw std::invalid_argument("finite-atomic weights sum to zero");
        if (total != Scalar(1) || !total.is_exact()) {
            for (auto& a : atoms_) a.weight = a.weight / total;
        }
    }

    const std::vector<Atom>& atoms() const { return atoms_; }

private:
    std::vector<Atom> atoms_;
};

struct Uniform { Scalar a{0}; Scalar b{1}; };
struct ExponentialWeight {};
struct GaussianWeight {};
struct GammaWeight { Scalar alpha{1}; };
struct BetaWeight { Scalar alpha{1}; Scalar beta{1}; };
struct CatalanArc {};
struct LogWeight { Scalar k{0}; };
struct Poisson { Scalar lambda{1}; };

using MeasureSpec = std::variant<FiniteAtomic, Uniform, ExponentialWeight, GaussianWeight, GammaWeight, BetaWeight,
                                 CatalanArc, LogWeight, Poisson>;

class DivisorError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// ---------------------------------------------------------------------------
// Support

struct Support {
    enum class Kind { interval, atoms, nonnegative_integers };
    Kind kind = Kind::interval;
    std::optional<Scalar> lo;  ///< absent = -inf
    std::optional<Scalar> hi;  ///< absent = +inf
    std::vector<Scalar> points;
};

inline Support support(const MeasureSpec& spec) {
    using K = Support::Kind;
    return std::visit(
        [](const auto& m) -> Support {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, FiniteAtomic>) {
                Support s{K::atoms, std::nullopt, std::nullopt, {}};
                for (const auto& a : m.atoms()) {
                    if (!a.weight.is_zero()) s.points.push_back(a.location);
                }
                return s;
            } else if constexpr (std::is_same_v<T, Uniform>) {
                return {K::interval, m.a, m.b, {}};
            } else if constexpr (std::is_same_v<T, ExponentialWeight> || std::is_same_v<T, GammaWeight>) {
                return {K::interval, Scalar(0), std::nullopt, {}};
            } else if constexpr (std::is_same_v<T, GaussianWeight>) {
                return {K::interval, std::nullopt, std::nullopt, {}};
            } else if constexpr (std::is_same_v<T, BetaWeight> || std::is_same_v<T, LogWeight>) {
                return {K::interval, Scalar(0), Scalar(1), {}};
            } else if constexpr (std::is_same_v<T, CatalanArc>) {
                return {K::interval, Scalar(0), Scalar(4), {}};
            } else {
                if (m.lambda.is_zero()) return {K::atoms, std::nullopt, std::nullopt, {Scalar(0)}};
                return {K::nonnegative_integers, Scalar(0), std::nullopt, {}};
            }
        },
        spec);
}

inline bool is_continuous(const MeasureSpec& spec) {
    return !std::holds_alternative<FiniteAtomic>(spec) && !std::holds_alternative<Poisson>(spec);
}

// ---------------------------------------------------------------------------
// Names and JSON

inline std::string measure_name(const MeasureSpec& spec) {
    static constexpr const char* names[] = {"finite-atomic", "uniform",    "exponential", "gaussian", "gamma",
                                            "beta",          "catalan-arc", "log-weight",  "poisson"};
    return names[spec.index()];
}

inline void validate(const MeasureSpec& spec) {
    std::visit(
        [](const auto& m) {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, Uniform>) {
                if (!(m.a < m.b)) throw std::invalid_argument("uniform requires a < b");
            } else if constexpr (std::is_same_v<T, GammaWeight>) {
                if (m.alpha.sign() <= 0) throw std::invalid_argument("gamma requires alpha > 0");
            } else if constexpr (std::is_same_v<T, BetaWeight>) {
                if (m.alpha.sign() <= 0 || m.beta.sign() <= 0) {
                    throw std::invalid_argument("beta requires alpha > 0 and beta > 0");
                }
            } else if constexpr (std::is_same_v<T, LogWeight>) {
                if (m.k <= Scalar(-1)) throw std::invalid_argument("log-weight requires k > -1");
            } else if constexpr (std::is_same_v<T, Poisson>) {
                if (m.lambda.sign() < 0) throw std::invalid_argument("poisson requires lambda >= 0");
            }
        },
        spec);
}

inline nlohmann::json measure_to_json(const MeasureSpec& spec) {
    using numerics::scalar_to_json;
    nlohmann::json params = nlohmann::json::object();
    std::visit(
        [&](const auto& m) {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, FiniteAtomic>) {
                nlohmann::json atoms = nlohmann::json::array();
                for (const auto& a : m.atoms()) {
                    atoms.push_back({{"location", scalar_to_json(a.location)}, {"weight", scalar_to_json(a.weight)}});
                }
                params["atoms"] = atoms;
            } else if constexpr (std::is_same_v<T, Uniform>) {
                params["a"] = scalar_to_json(m.a);
                params["b"] = scalar_to_json(m.b);
            } else if constexpr (std::is_same_v<T, GammaWeight>) {
                params["alpha"] = scalar_to_json(m.alpha);
            } else if constexpr (std::is_same_v<T, BetaWeight>) {
                params["alpha"] = scalar_to_json(m.alpha);
                params["beta"] = scalar_to_json(m.beta);
            } else if constexpr (std::is_same_v<T, LogWeight>) {
                params["k"] = scalar_to_json(m.k);
            } else if constexpr (std::is_same_v<T, Poisson>) {
                params["lambda"] = scalar_to_json(m.lambda);
            }
        },
        spec);
    return {{"variant", measure_name(spec)}, {"params", params}};
}

inline MeasureSpec measure_from_json(const nlohmann::json& j, int digits = kDefaultPrecision) {
    using numerics::param_or;
    using numerics::param_required;
    using numerics::scalar_from_json;
    const std::string v = j.at("variant").get<std::string>();
    const nlohmann::json params = j.contains("params") ? j.at("params") : nlohmann::json::object();
    MeasureSpec spec;
    if (v == "finite-atomic") {
        std::vector<Atom> atoms;
        for (const auto& a : params.at("atoms")) {
            if (a.is_object()) {
                atoms.push_back({scalar_from_json(a.at("location"), digits),
                                 a.contains("weight") ? scalar_from_json(a.at("weight"), digits) : Scalar(1)});
            } else {
                throw std::invalid_argument("atoms must be objects {\"location\": ..., \"weight\": ...}");
            }
        }
        spec = FiniteAtomic(std::move(atoms));
    } else if (v == "uniform") {
        spec = Uniform{param_or(params, "a", Scalar(0), digits), param_or(params, "b", Scalar(1), digits)};
    } else if (v == "uniform01") {
        spec = Uniform{Scalar(0), Scalar(1)};
    } else if (v == "exponential") {
        spec = ExponentialWeight{};
    } else if (v == "gaussian") {
        spec = GaussianWeight{};
    } else if (v == "gamma") {
        spec = GammaWeight{param_required(params, "alpha", digits)};
    } else if (v == "beta") {
        spec = BetaWeight{param_required(params, "alpha", digits), param_required(params, "beta", digits)};
    } else if (v == "catalan-arc") {
        spec = CatalanArc{};
    } else if (v == "log-weight") {
        spec = LogWeight{param_required(params, "k", digits)};
    } else if (v == "poisson") {
        spec = Poisson{param_required(params, "lambda", digits)};
    } else {
        throw std::invalid_argument("unknown measure '" + v + "'");
    }
    validate(spec);
    return spec;
}

// ---------------------------------------------------------------------------
// Moments

/// n-th moment in closed form; exact whenever the parameters are.
inline Scalar moment(const MeasureSpec& spec, std::size_t n, int digits = kDefaultPrecision) {
    validate(spec);
    return std::visit(
        [&](const auto& m) -> Scalar {
            using T = std::decay_t<decltype(m)>;
            const long ln = static_cast<long>(n);
            if constexpr (std::is_same_v<T, FiniteAtomic>) {
                Scalar acc(0);
                for (const auto& a : m.atoms()) acc += a.weight * numerics::pow(a.location, ln);
                return acc;
            } else if constexpr (std::is_same_v<T, Uniform>) {
                return (numerics::pow(m.b, ln + 1) - numerics::pow(m.a, ln + 1)) /
                       (Scalar(ln + 1) * (m.b - m.a));
            } else if constexpr (std::is_same_v<T, ExponentialWeight>) {
                return sequences::rising_factorial(Scalar(1), n);
            } else if constexpr (std::is_same_v<T, GaussianWeight>) {
                if (n % 2 == 1) return Scalar(0);
                Integer df = 1;
                for (std::size_t k = 1; k < n; k += 2) df *= static_cast<unsigned long>(k);
                return Scalar(df);
            } else if constexpr (std::is_same_v<T, GammaWeight>) {
                return sequences::rising_factorial(m.alpha, n);
            } else if constexpr (std::is_same_v<T, BetaWeight>) {
                return sequences::rising_factorial(m.alpha, n) / sequences::rising_factorial(m.alpha + m.beta, n);
            } else if constexpr (std::is_same_v<T, CatalanArc>) {
                return Scalar(sequences::catalan_numbers(n + 1).back());
            } else if constexpr (std::is_same_v<T, LogWeight>) {
                return Scalar(1) / numerics::pow(Scalar(ln + 1), m.k + Scalar(1), digits);
            } else {
                return sequences::family_sequence(sequences::Touchard{m.lambda}, n + 1, digits).values().back();
            }
        },
        spec);
}

inline MomentSequence moment_sequence(const MeasureSpec& spec, std::size_t count, int digits = kDefaultPrecision) {
    if (count == 0) throw std::invalid_argument("moment_sequence: count must be >= 1");
    validate(spec);
    std::vector<Scalar> values;
    if (const auto* p = std::get_if<Poisson>(&spec)) {
        values = sequences::family_sequence(sequences::Touchard{p->lambda}, count, digits).values();
    } else if (std::holds_alternative<CatalanArc>(spec)) {
        for (auto& c : sequences::catalan_numbers(count)) values.emplace_back(c);
    } else {
        values.reserve(count);
        for (std::size_t n = 0; n < count; ++n) values.push_back(moment(spec, n, digits));
    }
    return MomentSequence(std::move(values), {{"source", "measure"}, {"spec", measure_to_json(spec)}});
}

// ---------------------------------------------------------------------------
// Divisor validation

enum class DivisorVerdict { positive, sign_changing, singular };

inline std::string to_string(DivisorVerdict v) {
    switch (v) {
        case DivisorVerdict::positive: return "positive";
        case DivisorVerdict::sign_changing: return "sign-changing";
        case DivisorVerdict::singular: return "singular";
    }
    return "singular";
}

/// Sign behaviour of P on the support of the measure (exact, via Sturm chains).
inline DivisorVerdict validate_divisor(const MeasureSpec& spec, const Polynomial& p) {
    if (p.is_zero()) throw std::invalid_argument("divisor polynomial is zero");
    namespace st = numerics::sturm;
    const st::RatPoly q = numerics::exact_coefficients(p);
    const Support s = support(spec);
    auto classify_points = [&](const std::vector<Rational>& pts, int sign_beyond) {
        bool negative = sign_beyond < 0;
        for (const auto& x : pts) {
            int sg = sgn(st::eval(q, x));
            if (sg == 0) return DivisorVerdict::singular;
            if (sg < 0) negative = true;
        }
        return negative ? DivisorVerdict::sign_changing : DivisorVerdict::positive;
    };
    switch (s.kind) {
        case Support::Kind::atoms: {
            std::vector<Rational> pts;
            for (const auto& x : s.points) pts.push_back(x.to_rational());
            return classify_points(pts, 0);
        }
        case Support::Kind::nonnegative_integers: {
            Rational bound = st::root_bound(q);
            Integer last = bound.get_num() / bound.get_den() + 1;
            std::vector<Rational> pts;
            for (Integer i = 0; i <= last; ++i) pts.push_back(Rational(i));
            return classify_points(pts, st::sign_at_infinity(q, +1));
        }
        case Support::Kind::interval: {
            std::optional<Rational> lo, hi;
            if (s.lo) lo = s.lo->to_rational();
            if (s.hi) hi = s.hi->to_rational();
            if (st::count_roots(q, lo, hi) > 0) return DivisorVerdict::singular;
            Rational probe = lo && hi ? Rational((*lo + *hi) / 2) : lo ? Rational(*lo + 1) : hi ? Rational(*hi - 1) : Rational(0);
            return sgn(st::eval(q, probe)) > 0 ? DivisorVerdict::positive : DivisorVerdict::sign_changing;
        }
    }
    return DivisorVerdict::singular;
}

// ---------------------------------------------------------------------------
// Divided moments

namespace detail {

inline Real eval_real(const std::vector<Real>& c, const Real& x) {
    Real acc(x.digits());
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
    return acc;
}

// Solves X = base + slope * ln X by fixed-point iteration (X grows slowly).
inline double tail_cutoff(double base, double slope) {
    double x = std::max(base, 2.0);
    for (int i = 0; i < 50; ++i) x = base + slope * std::log(std::max(x, 2.0));
    return std::max(x, 2.0);
}

inline Real pow_scalar(const Real& x, const Scalar& e, int wd) {
    if (e.is_integer() && e.rational().get_num().fits_slong_p()) return pow(x, e.rational().get_num().get_si());
    return pow(x, e.to_real(wd));
}

}  // namespace detail

/// int x^k / P(x) dA(x). Exact for exact atomic measures; otherwise at `digits`.
inline Scalar divided_moment(const MeasureSpec& spec, const Polynomial& p, std::size_t k, int digits = kDefaultPrecision) {
    validate(spec);
    if (p.is_zero()) throw std::invalid_argument("divisor polynomial is zero");
    if (validate_divisor(spec, p) == DivisorVerdict::singular) {
        throw DivisorError("divisor has a root on the support of the " + measure_name(spec) + " measure");
    }
    const long lk = static_cast<long>(k);

    if (const auto* fa = std::get_if<FiniteAtomic>(&spec)) {
        Scalar acc(0);
        for (const auto& a : fa->atoms()) {
            if (a.weight.is_zero()) continue;
            acc += a.weight * numerics::pow(a.location, lk) / numerics::poly_eval(p, a.location);
        }
        return acc;
    }

    const int wd = digits + 15;
    const Real eps = pow(Real(10L, wd), static_cast<long>(-digits));
    std::vector<Real> pc;
    for (const auto& c : p.coeffs()) pc.push_back(c.to_real(wd));

    if (const auto* po = std::get_if<Poisson>(&spec)) {
        if (po->lambda.is_zero()) {
            return numerics::pow(Scalar(0), lk) / numerics::poly_eval(p, Scalar(0));
        }
        const Real lambda = po->lambda.to_real(wd);
        const double lam = lambda.to_double();
        const double min_j = 2.0 * lam + static_cast<double>(k) + 2.0 * static_cast<double>(p.degree()) +
                             numerics::sturm::root_bound(numerics::exact_coefficients(p)).get_d();
        Real weight = exp(-lambda);
        Real acc(wd);
        for (long j = 0;; ++j) {
            Real x(j, wd);
            Real term = weight * pow(x, lk) / detail::eval_real(pc, x);
            acc += term;
            Real next = weight * lambda / Real(j + 1, wd);
            if (j > min_j) {
                // sum_{i > j} p_i <= p_{j+1} / (1 - lambda / (j + 2))
                Real tail = next / (Real(1L, wd) - lambda / Real(j + 2, wd));
                if (tail < eps && abs(term) < eps) break;
            }
            if (j > 1000000) throw numerics::QuadratureError("poisson divided moment did not converge");
            weight = std::move(next);
        }
        return Scalar(acc.with_digits(digits));
    }

    numerics::QuadratureOptions opt;
    opt.digits = digits;
    opt.tolerance_exponent = digits - 10;
    auto rational_part = [&](const Real& x) { return pow(x, lk) / detail::eval_real(pc, x); };
    const double log_eps = (wd + 10) * std::log(10.0);

    Real value = std::visit(
        [&](const auto& m) -> Real {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, Uniform>) {
                const Real a = m.a.to_real(wd), b = m.b.to_real(wd);
                const Real inv = Real(1L, wd) / (b - a);
                auto f = [&](const Real& x, const Real&, const Real&) { return rational_part(x) * inv; };
                return numerics::tanh_sinh(f, a, b, opt).value;
            } else if constexpr (std::is_same_v<T, ExponentialWeight>) {
                auto f = [&](const Real& x, const Real&) { return rational_part(x) * exp(-x); };
                const double cut = detail::tail_cutoff(log_eps, static_cast<double>(k) + 1);
                return numerics::exp_sinh(f, Real(wd), Real::from_double(cut, wd), opt).value;
            } else if constexpr (std::is_same_v<T, GammaWeight>) {
                const Real alpha = m.alpha.to_real(wd);
                const Real norm = Real(1L, wd) / tgamma(alpha);
                const Scalar am1 = m.alpha - Scalar(1);
                auto f = [&](const Real& x, const Real&) {
                    return rational_part(x) * detail::pow_scalar(x, am1, wd) * exp(-x) * norm;
                };
                const double cut = detail::tail_cutoff(log_eps, static_cast<double>(k) + alpha.to_double() + 1);
                return numerics::exp_sinh(f, Real(wd), Real::from_double(cut, wd), opt).value;
            } else if constexpr (std::is_same_v<T, GaussianWeight>) {
                const Real norm = Real(1L, wd) / sqrt(ldexp(Real::pi(wd), 1));
                auto f = [&](const Real& x) { return rational_part(x) * exp(-ldexp(x * x, -1)) * norm; };
                const double cut = std::sqrt(2.0 * detail::tail_cutoff(log_eps, static_cast<double>(k) + 1));
                return numerics::sinh_sinh(f, Real::from_double(cut, wd), opt).value;
            } else if constexpr (std::is_same_v<T, BetaWeight>) {
                const Real alpha = m.alpha.to_real(wd), beta = m.beta.to_real(wd);
                const Real norm = tgamma(alpha + beta) / (tgamma(alpha) * tgamma(beta));
                const Scalar am1 = m.alpha - Scalar(1), bm1 = m.beta - Scalar(1);
                auto f = [&](const Real& x, const Real& from0, const Real& to1) {
                    return rational_part(x) * detail::pow_scalar(from0, am1, wd) * detail::pow_scalar(to1, bm1, wd) * norm;
                };
                return numerics::tanh_sinh(f, Real(wd), Real(1L, wd), opt).value;
            } else if constexpr (std::is_same_v<T, CatalanArc>) {
                const Real norm = Real(1L, wd) / ldexp(Real::pi(wd), 1);
                auto f = [&](const Real& x, const Real& from0, const Real& to4) {
                    return rational_part(x) * sqrt(to4 / from0) * norm;
                };
                return numerics::tanh_sinh(f, Real(wd), Real(4L, wd), opt).value;
            } else if constexpr (std::is_same_v<T, LogWeight>) {
                const Real norm = Real(1L, wd) / tgamma(m.k.to_real(wd) + Real(1L, wd));
                const Real half = ldexp(Real(1L, wd), -1);
                auto f = [&](const Real& x, const Real& from0, const Real& to1) {
                    Real neg_log = from0 < half ? -log(from0) : -log1p(-to1);
                    return rational_part(x) * detail::pow_scalar(neg_log, m.k, wd) * norm;
                };
                return numerics::tanh_sinh(f, Real(wd), Real(1L, wd), opt).value;
            } else {
                throw std::logic_error("unreachable measure variant");
            }
        },
        spec);
    return Scalar(value.with_digits(digits));
}

}  // namespace momentlab::measures
