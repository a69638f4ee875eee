#pragma once

/**
 * @file families.hpp
 * @brief Exact generators for classical positive-moment sequence families.
 *
 * Powers{a}            a^n
 * Factorial            n!
 * GaussianAbs          1, 0, 1, 0, 3, 0, 15, ...  ((2k-1)!! at n = 2k)
 * Catalan              binom(2n, n) / (n + 1)
 * InversePowers{k}     1 / (n + 1)^(k + 1), k > -1
 * RisingFactorial{a}   a (a + 1) ... (a + n - 1)
 * BetaRatio{a, b}      a^(n) / (a + b)^(n)
 * FibShift{s}          F_{n+s}, s odd
 * FibEven              F_{2n+2}
 * FibAveraged{which}   F_{n+1}/(n+1), F_{2n+2}/(n+1), (F_{n+2}-1)/(n+1), (F_{2n+1}-1)/(n+1) for n >= 1
 * Touchard{lambda}     sum_j S(n, j) lambda^j
 * Bell, BellShift      B_n, B_{n+1}
 */

#include "momentlab/moment_sequence.hpp"
#include "momentlab/scalar.hpp"
#include "momentlab/scalar_json.hpp"

#include <nlohmann/json.hpp>

#include <array>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace momentlab::sequences {

struct Powers { Scalar a{1}; };
struct Factorial {};
struct GaussianAbs {};
struct Catalan {};
struct InversePowers { Scalar k{0}; };
struct RisingFactorial { Scalar alpha{1}; };
struct BetaRatio { Scalar alpha{1}; Scalar beta{1}; };
struct FibShift { unsigned shift = 1; };
struct FibEven {};

enum class FibAverage { shift_one, even, partial_sum, odd_partial_sum };
struct FibAveraged { FibAverage which = FibAverage::shift_one; };

struct Touchard { Scalar lambda{1}; };
struct Bell {};
struct BellShift {};

using FamilySpec = std::variant<Powers, Factorial, GaussianAbs, Catalan, InversePowers, RisingFactorial, BetaRatio,
                                FibShift, FibEven, FibAveraged, Touchard, Bell, BellShift>;

// ---------------------------------------------------------------------------
// Integer sequences

inline Integer fibonacci_integer(std::size_t n) {
    Integer a = 0, b = 1;
    for (std::size_t i = 0; i < n; ++i) {
        Integer t = a + b;
        a = b;
        b = t;
    }
    return a;
}

/// F_n with F_0 = 0, F_1 = 1.
inline Scalar fibonacci(std::size_t n) { return Scalar(fibonacci_integer(n)); }

/// Rows 0..n of the Stirling triangle of the second kind.
inline std::vector<std::vector<Integer>> stirling2_rows(std::size_t n) {
    std::vector<std::vector<Integer>> rows;
    rows.reserve(n + 1);
    rows.push_back({Integer(1)});
    for (std::size_t m = 0; m < n; ++m) {
        const auto& prev = rows.back();
        std::vector<Integer> next(m + 2, Integer(0));
        for (std::size_t j = 1; j <= m + 1; ++j) {
            Integer keep = j <= m ? Integer(prev[j] * static_cast<unsigned long>(j)) : Integer(0);
            next[j] = keep + prev[j - 1];
        }
        rows.push_back(std::move(next));
    }
    return rows;
}

/// S(n, j): partitions of an n-set into j nonempty blocks.
inline Scalar stirling2(std::size_t n, std::size_t j) {
    if (j > n) throw std::out_of_range("stirling2: j = " + std::to_string(j) + " exceeds n = " + std::to_string(n));
    return Scalar(stirling2_rows(n)[n][j]);
}

/// B_0..B_{count-1} from the Bell triangle.
inline std::vector<Integer> bell_numbers(std::size_t count) {
    std::vector<Integer> out;
    if (count == 0) return out;
    out.push_back(1);
    std::vector<Integer> row{Integer(1)};
    while (out.size() < count) {
        std::vector<Integer> next{row.back()};
        for (const auto& x : row) next.push_back(next.back() + x);
        out.push_back(next.front());
        row = std::move(next);
    }
    return out;
}

inline std::vector<Integer> catalan_numbers(std::size_t count) {
    std::vector<Integer> out;
    Integer c = 1;
    for (std::size_t n = 0; n < count; ++n) {
        out.push_back(c);
        c = c * static_cast<unsigned long>(2 * (2 * n + 1)) / static_cast<unsigned long>(n + 2);
    }
    return out;
}

/// alpha (alpha + 1) ... (alpha + n - 1); empty product is 1.
inline Scalar rising_factorial(const Scalar& alpha, std::size_t n) {
    Scalar acc(1);
    for (std::size_t i = 0; i < n; ++i) acc *= alpha + Scalar(static_cast<long>(i));
    return acc;
}

// ---------------------------------------------------------------------------
// Families

inline std::string family_name(const FamilySpec& spec) {
    static constexpr std::array<const char*, 13> names{
        "powers",        "factorial", "gaussian-abs", "catalan",    "inverse-powers", "rising-factorial", "beta-ratio",
        "fib-shift",     "fib-even",  "fib-averaged", "touchard",   "bell",           "bell-shift"};
    return names[spec.index()];
}

inline std::string fib_average_name(FibAverage w) {
    switch (w) {
        case FibAverage::shift_one: return "shift-one";
        case FibAverage::even: return "even";
        case FibAverage::partial_sum: return "partial-sum";
        case FibAverage::odd_partial_sum: return "odd-partial-sum";
    }
    return "shift-one";
}

inline void validate(const FamilySpec& spec) {
    std::visit(
        [](const auto& f) {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, InversePowers>) {
                if (f.k <= Scalar(-1)) throw std::invalid_argument("inverse-powers requires k > -1");
            } else if constexpr (std::is_same_v<T, RisingFactorial>) {
                if (f.alpha.sign() < 0) throw std::invalid_argument("rising-factorial requires alpha >= 0");
            } else if constexpr (std::is_same_v<T, BetaRatio>) {
                if (f.alpha.sign() <= 0 || f.beta.sign() <= 0) {
                    throw std::invalid_argument("beta-ratio requires alpha > 0 and beta > 0");
                }
            } else if constexpr (std::is_same_v<T, FibShift>) {
                if (f.shift % 2 == 0) throw std::invalid_argument("fib-shift requires an odd shift 2k+1");
            } else if constexpr (std::is_same_v<T, Touchard>) {
                if (f.lambda.sign() < 0) throw std::invalid_argument("touchard requires lambda >= 0");
            }
        },
        spec);
}

/// Whether the family's representing measure lives on [0, inf).
inline bool nonnegative_support(const FamilySpec& spec) {
    return std::visit(
        [](const auto& f) {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, Powers>) return f.a.sign() >= 0;
            else if constexpr (std::is_same_v<T, GaussianAbs> || std::is_same_v<T, FibShift> ||
                               std::is_same_v<T, FibEven> || std::is_same_v<T, FibAveraged>)
                return false;
            else return true;
        },
        spec);
}

inline nlohmann::json family_to_json(const FamilySpec& spec) {
    using numerics::scalar_to_json;
    nlohmann::json params = nlohmann::json::object();
    std::visit(
        [&](const auto& f) {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, Powers>) params["a"] = scalar_to_json(f.a);
            else if constexpr (std::is_same_v<T, InversePowers>) params["k"] = scalar_to_json(f.k);
            else if constexpr (std::is_same_v<T, RisingFactorial>) params["alpha"] = scalar_to_json(f.alpha);
            else if constexpr (std::is_same_v<T, BetaRatio>) {
                params["alpha"] = scalar_to_json(f.alpha);
                params["beta"] = scalar_to_json(f.beta);
            } else if constexpr (std::is_same_v<T, FibShift>) params["shift"] = f.shift;
            else if constexpr (std::is_same_v<T, FibAveraged>) params["which"] = fib_average_name(f.which);
            else if constexpr (std::is_same_v<T, Touchard>) params["lambda"] = scalar_to_json(f.lambda);
        },
        spec);
    return {{"variant", family_name(spec)}, {"params", params}};
}

inline FamilySpec family_from_json(const nlohmann::json& j, int digits = kDefaultPrecision) {
    using numerics::param_or;
    using numerics::param_required;
    const std::string v = j.at("variant").get<std::string>();
    const nlohmann::json params = j.contains("params") ? j.at("params") : nlohmann::json::object();
    FamilySpec spec;
    if (v == "powers") spec = Powers{param_required(params, "a", digits)};
    else if (v == "factorial") spec = Factorial{};
    else if (v == "gaussian-abs") spec = GaussianAbs{};
    else if (v == "catalan") spec = Catalan{};
    else if (v == "inverse-powers") spec = InversePowers{param_required(params, "k", digits)};
    else if (v == "rising-factorial") spec = RisingFactorial{param_required(params, "alpha", digits)};
    else if (v == "beta-ratio") spec = BetaRatio{param_required(params, "alpha", digits), param_required(params, "beta", digits)};
    else if (v == "fib-shift") {
        Scalar s = param_or(params, "shift", Scalar(1), digits);
        if (!s.is_integer() || s.sign() < 0) throw std::invalid_argument("fib-shift requires a nonnegative integer shift");
        spec = FibShift{static_cast<unsigned>(s.rational().get_num().get_ui())};
    } else if (v == "fib-even") spec = FibEven{};
    else if (v == "fib-averaged") {
        std::string w = params.contains("which") ? params.at("which").get<std::string>() : "shift-one";
        FibAverage which;
        if (w == "shift-one") which = FibAverage::shift_one;
        else if (w == "even") which = FibAverage::even;
        else if (w == "partial-sum") which = FibAverage::partial_sum;
        else if (w == "odd-partial-sum") which = FibAverage::odd_partial_sum;
        else throw std::invalid_argument("unknown fib-averaged variant '" + w + "'");
        spec = FibAveraged{which};
    } else if (v == "touchard") spec = Touchard{param_required(params, "lambda", digits)};
    else if (v == "bell") spec = Bell{};
    else if (v == "bell-shift") spec = BellShift{};
    else throw std::invalid_argument("unknown family '" + v + "'");
    validate(spec);
    return spec;
}

/// Exact prefix of a family (real only when a parameter is real or k is non-integral).
inline MomentSequence family_sequence(const FamilySpec& spec, std::size_t count, int digits = kDefaultPrecision) {
    if (count == 0) throw std::invalid_argument("family_sequence: count must be >= 1");
    validate(spec);
    std::vector<Scalar> v;
    v.reserve(count);
    std::size_t offset = 0;
    std::visit(
        [&](const auto& f) {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, Powers>) {
                Scalar p(1);
                for (std::size_t n = 0; n < count; ++n, p *= f.a) v.push_back(p);
            } else if constexpr (std::is_same_v<T, Factorial>) {
                Integer p = 1;
                for (std::size_t n = 0; n < count; ++n) {
                    v.push_back(Scalar(p));
                    p *= static_cast<unsigned long>(n + 1);
                }
            } else if constexpr (std::is_same_v<T, GaussianAbs>) {
                Integer dfact = 1;
                for (std::size_t n = 0; n < count; ++n) {
                    if (n % 2 == 1) {
                        v.push_back(Scalar(0));
                    } else {
                        if (n >= 2) dfact *= static_cast<unsigned long>(n - 1);
                        v.push_back(Scalar(dfact));
                    }
                }
            } else if constexpr (std::is_same_v<T, Catalan>) {
                for (auto& c : catalan_numbers(count)) v.push_back(Scalar(c));
            } else if constexpr (std::is_same_v<T, InversePowers>) {
                Scalar e = f.k + Scalar(1);
                for (std::size_t n = 0; n < count; ++n) {
                    v.push_back(Scalar(1) / numerics::pow(Scalar(static_cast<long>(n + 1)), e, digits));
                }
            } else if constexpr (std::is_same_v<T, RisingFactorial>) {
                Scalar acc(1);
                for (std::size_t n = 0; n < count; ++n) {
                    v.push_back(acc);
                    acc *= f.alpha + Scalar(static_cast<long>(n));
                }
            } else if constexpr (std::is_same_v<T, BetaRatio>) {
                Scalar acc(1);
                const Scalar ab = f.alpha + f.beta;
                for (std::size_t n = 0; n < count; ++n) {
                    v.push_back(acc);
                    acc *= (f.alpha + Scalar(static_cast<long>(n))) / (ab + Scalar(static_cast<long>(n)));
                }
            } else if constexpr (std::is_same_v<T, FibShift>) {
                for (std::size_t n = 0; n < count; ++n) v.push_back(fibonacci(n + f.shift));
            } else if constexpr (std::is_same_v<T, FibEven>) {
                for (std::size_t n = 0; n < count; ++n) v.push_back(fibonacci(2 * n + 2));
            } else if constexpr (std::is_same_v<T, FibAveraged>) {
                if (f.which == FibAverage::odd_partial_sum) offset = 1;
                for (std::size_t i = 0; i < count; ++i) {
                    const std::size_t n = i + offset;
                    const Rational den(static_cast<long>(n + 1));
                    Integer num;
                    switch (f.which) {
                        case FibAverage::shift_one: num = fibonacci_integer(n + 1); break;
                        case FibAverage::even: num = fibonacci_integer(2 * n + 2); break;
                        case FibAverage::partial_sum: num = fibonacci_integer(n + 2) - 1; break;
                        case FibAverage::odd_partial_sum: num = fibonacci_integer(2 * n + 1) - 1; break;
                    }
                    v.push_back(Scalar(Rational(Rational(num) / den)));
                }
            } else if constexpr (std::is_same_v<T, Touchard>) {
                auto rows = stirling2_rows(count - 1);
                for (std::size_t n = 0; n < count; ++n) {
                    Scalar acc(0), lp(1);
                    for (std::size_t j = 0; j <= n; ++j, lp *= f.lambda) acc += Scalar(rows[n][j]) * lp;
                    v.push_back(acc);
                }
            } else if constexpr (std::is_same_v<T, Bell>) {
                for (auto& b : bell_numbers(count)) v.push_back(Scalar(b));
            } else if constexpr (std::is_same_v<T, BellShift>) {
                auto b = bell_numbers(count + 1);
                for (std::size_t n = 1; n <= count; ++n) v.push_back(Scalar(b[n]));
            }
        },
        spec);
    nlohmann::json prov = {{"source", "family"}, {"spec", family_to_json(spec)}};
    if (offset) prov["first_index"] = offset;
    return MomentSequence(std::move(v), std::move(prov), offset);
}

/// Binet form F_n = w_1 phi^n + w_2 psi^n at a given precision.
struct BinetRepresentation {
    std::array<Scalar, 2> roots;    ///< phi, psi
    std::array<Scalar, 2> weights;  ///< 1/sqrt5, -1/sqrt5

    /// w_1 phi^n + w_2 psi^n.
    Scalar evaluate(long n) const {
        return weights[0] * numerics::pow(roots[0], n) + weights[1] * numerics::pow(roots[1], n);
    }

    /// Weights of the shifted sequence F_{n+s}: w_i * root_i^s.
    std::array<Scalar, 2> shifted_weights(long s) const {
        return {weights[0] * numerics::pow(roots[0], s), weights[1] * numerics::pow(roots[1], s)};
    }
};

inline BinetRepresentation binet_weights(int digits = kDefaultPrecision) {
    Real five(5L, digits);
    Real s5 = sqrt(five);
    Real one(1L, digits);
    Real phi = ldexp(one + s5, -1);
    Real psi = ldexp(one - s5, -1);
    Real w = one / s5;
    return BinetRepresentation{{Scalar(phi), Scalar(psi)}, {Scalar(w), Scalar(-w)}};
}

}  // namespace momentlab::sequences
