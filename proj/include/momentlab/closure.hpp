#pragma once

/**
 * @file closure.hpp
 * @brief Operations that map positive moment sequences to positive moment
 *        sequences, Hausdorff means, and the exponential partial-sum check.
 */

#include "momentlab/moment_sequence.hpp"
#include "momentlab/real.hpp"
#include "momentlab/scalar.hpp"
#include "momentlab/scalar_json.hpp"

#include <nlohmann/json.hpp>

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace momentlab::closure {

struct PointMass { Scalar theta = Scalar::ratio(1, 2); };
struct BetaOneWeight { Scalar beta{1}; };  ///< density beta (1-x)^(beta-1) on [0,1]
struct Uniform01 {};

using ChiSpec = std::variant<PointMass, BetaOneWeight, Uniform01>;

inline std::string chi_name(const ChiSpec& chi) {
    static constexpr const char* names[] = {"point-mass", "beta-one", "uniform01"};
    return names[chi.index()];
}

inline void validate(const ChiSpec& chi) {
    if (const auto* p = std::get_if<PointMass>(&chi)) {
        if (p->theta.sign() <= 0 || p->theta >= Scalar(1)) throw std::invalid_argument("point-mass requires 0 < theta < 1");
    } else if (const auto* b = std::get_if<BetaOneWeight>(&chi)) {
        if (b->beta.sign() < 0) throw std::invalid_argument("beta-one requires beta >= 0");
    }
}

inline nlohmann::json chi_to_json(const ChiSpec& chi) {
    nlohmann::json params = nlohmann::json::object();
    if (const auto* p = std::get_if<PointMass>(&chi)) params["theta"] = numerics::scalar_to_json(p->theta);
    if (const auto* b = std::get_if<BetaOneWeight>(&chi)) params["beta"] = numerics::scalar_to_json(b->beta);
    return {{"variant", chi_name(chi)}, {"params", params}};
}

inline ChiSpec chi_from_json(const nlohmann::json& j, int digits = kDefaultPrecision) {
    const std::string v = j.is_string() ? j.get<std::string>() : j.at("variant").get<std::string>();
    const nlohmann::json params = j.is_object() && j.contains("params") ? j.at("params") : nlohmann::json::object();
    ChiSpec chi;
    if (v == "point-mass") chi = PointMass{numerics::param_required(params, "theta", digits)};
    else if (v == "beta-one") chi = BetaOneWeight{numerics::param_required(params, "beta", digits)};
    else if (v == "uniform01") chi = Uniform01{};
    else throw std::invalid_argument("unknown chi variant '" + v + "'");
    validate(chi);
    return chi;
}

struct HausdorffWeights {
    std::size_t n = 0;
    std::vector<Scalar> h;  ///< h[i] = h_{i,n}
};

namespace detail {

inline Integer binomial(std::size_t n, std::size_t k) {
    Integer r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

inline Integer factorial(std::size_t n) {
    Integer r;
    mpz_fac_ui(r.get_mpz_t(), n);
    return r;
}

}  // namespace detail

/// h_{i,n} = binom(n,i) * integral of t^i (1-t)^(n-i) over chi.
inline HausdorffWeights hausdorff_weights(const ChiSpec& chi, std::size_t n) {
    validate(chi);
    HausdorffWeights w{n, {}};
    w.h.reserve(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        if (std::holds_alternative<Uniform01>(chi)) {
            w.h.push_back(Scalar::ratio(1, static_cast<long>(n + 1)));
        } else if (const auto* p = std::get_if<PointMass>(&chi)) {
            w.h.push_back(Scalar(detail::binomial(n, i)) * numerics::pow(p->theta, static_cast<long>(i)) *
                          numerics::pow(Scalar(1) - p->theta, static_cast<long>(n - i)));
        } else {
            // beta n!/(n-i)! / prod_{t=n-i}^{n} (t + beta); the beta cancels at i = n
            const Scalar& beta = std::get<BetaOneWeight>(chi).beta;
            Scalar denom(1);
            for (std::size_t t = (i == n ? 1 : n - i); t <= n; ++t) denom = denom * (Scalar(static_cast<long>(t)) + beta);
            Scalar num = Scalar(detail::factorial(n)) / Scalar(detail::factorial(n - i));
            if (i != n) num = num * beta;
            w.h.push_back(num / denom);
        }
    }
    return w;
}

namespace detail {

inline void require_equal(const MomentSequence& a, const MomentSequence& b, const char* op) {
    if (a.size() != b.size()) {
        throw std::invalid_argument(std::string(op) + ": operand lengths differ (" + std::to_string(a.size()) + " vs " +
                                    std::to_string(b.size()) + ")");
    }
    if (a.empty()) throw std::invalid_argument(std::string(op) + ": empty operand");
}

inline void require_nonnegative(const Scalar& x, const char* name) {
    if (x.sign() < 0) throw std::invalid_argument(std::string(name) + " must be nonnegative");
}

inline nlohmann::json provenance(const std::string& op, nlohmann::json params, std::vector<const MomentSequence*> operands) {
    nlohmann::json ops = nlohmann::json::array();
    for (const auto* s : operands) ops.push_back(s->provenance());
    return {{"source", "closure"}, {"op", op}, {"params", std::move(params)}, {"operands", std::move(ops)}};
}

}  // namespace detail

/// alpha a_n + beta b_n
inline MomentSequence combine_linear(const MomentSequence& a, const MomentSequence& b, const Scalar& alpha, const Scalar& beta) {
    detail::require_equal(a, b, "combine_linear");
    detail::require_nonnegative(alpha, "alpha");
    detail::require_nonnegative(beta, "beta");
    std::vector<Scalar> out;
    for (std::size_t n = 0; n < a.size(); ++n) out.push_back(alpha * a[n] + beta * b[n]);
    return MomentSequence(std::move(out),
                          detail::provenance("combine-linear",
                                             {{"alpha", numerics::scalar_to_json(alpha)}, {"beta", numerics::scalar_to_json(beta)}},
                                             {&a, &b}));
}

/// c_n = sum_i h_{i,n}(chi) alpha^i a_i beta^(n-i) b_(n-i), for n < count (default: shorter operand).
inline MomentSequence hausdorff_convolve(const MomentSequence& a, const MomentSequence& b, const Scalar& alpha, const Scalar& beta,
                                         const ChiSpec& chi, std::optional<std::size_t> count = std::nullopt) {
    detail::require_nonnegative(alpha, "alpha");
    detail::require_nonnegative(beta, "beta");
    const std::size_t len = count.value_or(std::min(a.size(), b.size()));
    if (len == 0 || len > a.size() || len > b.size()) {
        throw std::invalid_argument("hausdorff_convolve: operands shorter than requested count " + std::to_string(len));
    }
    std::vector<Scalar> apow{Scalar(1)}, bpow{Scalar(1)};
    for (std::size_t i = 1; i < len; ++i) {
        apow.push_back(apow.back() * alpha);
        bpow.push_back(bpow.back() * beta);
    }
    std::vector<Scalar> out;
    for (std::size_t n = 0; n < len; ++n) {
        const HausdorffWeights w = hausdorff_weights(chi, n);
        Scalar c(0);
        for (std::size_t i = 0; i <= n; ++i) c = c + w.h[i] * apow[i] * a[i] * bpow[n - i] * b[n - i];
        out.push_back(std::move(c));
    }
    return MomentSequence(std::move(out), detail::provenance("hausdorff-convolve",
                                                             {{"alpha", numerics::scalar_to_json(alpha)},
                                                              {"beta", numerics::scalar_to_json(beta)},
                                                              {"chi", chi_to_json(chi)}},
                                                             {&a, &b}));
}

/// (1/(n+1)) sum_i a_i b_(n-i)
inline MomentSequence average_convolution(const MomentSequence& a, const MomentSequence& b) {
    detail::require_equal(a, b, "average_convolution");
    std::vector<Scalar> out;
    for (std::size_t n = 0; n < a.size(); ++n) {
        Scalar c(0);
        for (std::size_t i = 0; i <= n; ++i) c = c + a[i] * b[n - i];
        out.push_back(c / Scalar(static_cast<long>(n + 1)));
    }
    return MomentSequence(std::move(out), detail::provenance("average-convolution", nlohmann::json::object(), {&a, &b}));
}

inline MomentSequence pointwise_product(const MomentSequence& a, const MomentSequence& b) {
    detail::require_equal(a, b, "pointwise_product");
    std::vector<Scalar> out;
    for (std::size_t n = 0; n < a.size(); ++n) out.push_back(a[n] * b[n]);
    return MomentSequence(std::move(out), detail::provenance("product", nlohmann::json::object(), {&a, &b}));
}

/// a_0, a_k, a_2k, ...; count defaults to every available entry.
inline MomentSequence subsample(const MomentSequence& a, std::size_t k, std::optional<std::size_t> count = std::nullopt) {
    if (k == 0) throw std::invalid_argument("subsample: k must be >= 1");
    if (a.empty()) throw std::invalid_argument("subsample: empty operand");
    const std::size_t len = count.value_or((a.size() - 1) / k + 1);
    if (len == 0 || k * (len - 1) + 1 > a.size()) {
        throw std::invalid_argument("subsample: need " + std::to_string(k * (len - 1) + 1) + " entries, have " +
                                    std::to_string(a.size()));
    }
    std::vector<Scalar> out;
    for (std::size_t n = 0; n < len; ++n) out.push_back(a[k * n]);
    return MomentSequence(std::move(out), detail::provenance("subsample", {{"k", k}}, {&a}));
}

enum class EmbedMode { zero_odd, square_root };

inline std::string to_string(EmbedMode m) { return m == EmbedMode::zero_odd ? "zero-odd" : "square-root"; }

inline EmbedMode embed_mode_from_string(const std::string& s) {
    if (s == "zero-odd") return EmbedMode::zero_odd;
    if (s == "square-root") return EmbedMode::square_root;
    throw std::invalid_argument("unknown even_embed mode '" + s + "'");
}

/// zero-odd: keep even entries, zero odd ones. square-root: c_2k = a_k, c_2k+1 = 0 (length 2 len - 1).
inline MomentSequence even_embed(const MomentSequence& a, EmbedMode mode) {
    if (a.empty()) throw std::invalid_argument("even_embed: empty operand");
    std::vector<Scalar> out;
    const Scalar zero = a.is_exact() ? Scalar(0) : Scalar(Real(a.precision()));
    if (mode == EmbedMode::zero_odd) {
        for (std::size_t n = 0; n < a.size(); ++n) out.push_back(n % 2 == 0 ? a[n] : zero);
    } else {
        for (std::size_t k = 0; k < a.size(); ++k) {
            if (a[k].sign() < 0) {
                throw std::invalid_argument("even_embed square-root: a_" + std::to_string(k) + " is negative");
            }
            if (k > 0) out.push_back(zero);
            out.push_back(a[k]);
        }
    }
    return MomentSequence(std::move(out), detail::provenance("even-embed", {{"mode", to_string(mode)}}, {&a}));
}

/// a_s, a_(s+1), ... for even s >= 2.
inline MomentSequence shift(const MomentSequence& a, std::size_t s) {
    if (s < 2 || s % 2 != 0) throw std::invalid_argument("shift: s must be even and >= 2, got " + std::to_string(s));
    if (a.size() <= s) {
        throw std::invalid_argument("shift: need more than " + std::to_string(s) + " entries, have " + std::to_string(a.size()));
    }
    std::vector<Scalar> out(a.values().begin() + static_cast<long>(s), a.values().end());
    return MomentSequence(std::move(out), detail::provenance("shift", {{"s", s}}, {&a}));
}

// ---------------------------------------------------------------------------
// Diagnostics

struct DegenerateReport {
    bool degenerate = false;
    Scalar variance;       ///< a_2 - a_1^2
    Scalar max_deviation;  ///< max |a_n - a_1^n| (degenerate case only)
    std::optional<std::size_t> worst_index;
    std::string message;
};

/// Flags a prefix whose variance a_2 - a_1^2 is within tol of 0 and reports how far it is from a_1^n.
inline DegenerateReport degenerate_diagnose(const MomentSequence& a, const Scalar& tol) {
    if (a.size() < 3) throw std::invalid_argument("degenerate_diagnose needs at least 3 entries");
    if (numerics::abs(a[0] - Scalar(1)) > tol) {
        throw std::invalid_argument("degenerate_diagnose expects a_0 = 1, got " + a[0].to_string());
    }
    DegenerateReport r;
    r.variance = a[2] - a[1] * a[1];
    if (numerics::abs(r.variance) > tol) {
        r.message = "non-degenerate";
        return r;
    }
    r.degenerate = true;
    Scalar p(1);
    for (std::size_t n = 0; n < a.size(); ++n) {
        Scalar dev = numerics::abs(a[n] - p);
        if (!r.worst_index || dev > r.max_deviation) {
            r.max_deviation = dev;
            r.worst_index = n;
        }
        p = p * a[1];
    }
    r.message = "degenerate: a_n should equal a_1^n";
    return r;
}

inline nlohmann::json degenerate_to_json(const DegenerateReport& r) {
    nlohmann::json j = {{"degenerate", r.degenerate}, {"variance", numerics::scalar_to_json(r.variance)}, {"message", r.message}};
    if (r.degenerate) {
        j["max_deviation"] = numerics::scalar_to_json(r.max_deviation);
        j["worst_index"] = *r.worst_index;
    }
    return j;
}

struct PartialSumReport {
    Real minimum;
    Real argmin;
    bool nonnegative = false;
    Real tolerance;
};

/**
 * Minimum of p(x) = sum_{j<=2n} a_j x^j / j! over [lo, hi]: uniform grid of
 * `samples` points, then golden-section search around the best grid point.
 * A numerical search, not a proof of nonnegativity.
 */
inline PartialSumReport exp_partial_sum_check(const MomentSequence& a, std::size_t n, const Scalar& lo = Scalar(-50),
                                              const Scalar& hi = Scalar(50), std::size_t samples = 4001,
                                              int digits = kDefaultPrecision) {
    if (a.size() < 2 * n + 1) {
        throw std::invalid_argument("exp_partial_sum_check: need " + std::to_string(2 * n + 1) + " entries, have " +
                                    std::to_string(a.size()));
    }
    if (samples < 2) throw std::invalid_argument("exp_partial_sum_check: samples must be >= 2");
    if (!(lo < hi)) throw std::invalid_argument("exp_partial_sum_check: empty range");
    const int wd = a.is_exact() ? digits : a.precision();
    std::vector<Real> c;
    Real fact(1L, wd);
    for (std::size_t j = 0; j <= 2 * n; ++j) {
        if (j > 0) fact *= Real(static_cast<long>(j), wd);
        c.push_back(a[j].to_real(wd) / fact);
    }
    auto p = [&](const Real& x) {
        Real acc(wd);
        for (std::size_t j = c.size(); j-- > 0;) acc = acc * x + c[j];
        return acc;
    };
    // scale of the terms at x, for the nonnegativity tolerance
    auto magnitude = [&](const Real& x) {
        Real m(1L, wd), xp(1L, wd);
        for (const auto& cj : c) {
            Real t = abs(cj * xp);
            if (t > m) m = t;
            xp *= x;
        }
        return m;
    };
    const Real rlo = lo.to_real(wd), rhi = hi.to_real(wd);
    const Real step = (rhi - rlo) / Real(static_cast<long>(samples - 1), wd);
    std::size_t best = 0;
    Real best_val = p(rlo);
    for (std::size_t i = 1; i < samples; ++i) {
        Real v = p(rlo + step * Real(static_cast<long>(i), wd));
        if (v < best_val) {
            best_val = v;
            best = i;
        }
    }
    Real left = best == 0 ? rlo : rlo + step * Real(static_cast<long>(best - 1), wd);
    Real right = best + 1 >= samples ? rhi : rlo + step * Real(static_cast<long>(best + 1), wd);
    const Real invphi = (sqrt(Real(5L, wd)) - Real(1L, wd)) / Real(2L, wd);
    Real x1 = right - invphi * (right - left), x2 = left + invphi * (right - left);
    Real f1 = p(x1), f2 = p(x2);
    for (int it = 0; it < 160; ++it) {
        if (f1 < f2) {
            right = x2;
            x2 = x1;
            f2 = f1;
            x1 = right - invphi * (right - left);
            f1 = p(x1);
        } else {
            left = x1;
            x1 = x2;
            f1 = f2;
            x2 = left + invphi * (right - left);
            f2 = p(x2);
        }
    }
    PartialSumReport r{best_val, rlo + step * Real(static_cast<long>(best), wd), false, Real(wd)};
    for (const Real* x : {&x1, &x2}) {
        Real v = p(*x);
        if (v < r.minimum) {
            r.minimum = v;
            r.argmin = *x;
        }
    }
    r.tolerance = pow(Real(10L, wd), static_cast<long>(-(wd - 10))) * magnitude(r.argmin);
    r.nonnegative = r.minimum >= -r.tolerance;
    return r;
}

inline nlohmann::json partial_sum_to_json(const PartialSumReport& r) {
    return {{"minimum", r.minimum.to_string()},
            {"argmin", r.argmin.to_string()},
            {"nonnegative", r.nonnegative},
            {"tolerance", r.tolerance.to_string()}};
}

}  // namespace momentlab::closure
