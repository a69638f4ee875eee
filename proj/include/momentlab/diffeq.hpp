#pragma once

/**
 * @file diffeq.hpp
 * @brief Linear difference equations with constant coefficients
 *        sum_j d_j r_{n+j} = c_n, their spectral form, and the construction of
 *        the moments of dA/P by forward recurrence.
 */

#include "momentlab/families.hpp"
#include "momentlab/hankel.hpp"
#include "momentlab/linalg.hpp"
#include "momentlab/measures.hpp"
#include "momentlab/moment_sequence.hpp"
#include "momentlab/polynomial.hpp"
#include "momentlab/scalar.hpp"
#include "momentlab/scalar_json.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <variant>
#include <vector>

namespace momentlab::diffeq {

// ---------------------------------------------------------------------------
// Forcing sequences

struct ZeroSource {};
struct ExplicitSource { MomentSequence values; };
struct MeasureSource { measures::MeasureSpec spec; };
struct FamilySource { sequences::FamilySpec spec; };

using SequenceSource = std::variant<ZeroSource, ExplicitSource, MeasureSource, FamilySource>;

/// Entries 0..count-1 of the source.
inline std::vector<Scalar> source_values(const SequenceSource& src, std::size_t count, int digits = kDefaultPrecision) {
    if (count == 0) return {};
    return std::visit(
        [&](const auto& s) -> std::vector<Scalar> {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, ZeroSource>) {
                return std::vector<Scalar>(count, Scalar(0));
            } else if constexpr (std::is_same_v<T, ExplicitSource>) {
                if (s.values.size() < count) {
                    throw std::out_of_range("input sequence exhausted: need " + std::to_string(count) + " entries, have " +
                                            std::to_string(s.values.size()));
                }
                return std::vector<Scalar>(s.values.values().begin(), s.values.values().begin() + static_cast<long>(count));
            } else if constexpr (std::is_same_v<T, MeasureSource>) {
                return measures::moment_sequence(s.spec, count, digits).values();
            } else {
                return sequences::family_sequence(s.spec, count, digits).values();
            }
        },
        src);
}

inline nlohmann::json source_to_json(const SequenceSource& src) {
    return std::visit(
        [](const auto& s) -> nlohmann::json {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, ZeroSource>) return {{"variant", "zero"}};
            else if constexpr (std::is_same_v<T, ExplicitSource>)
                return {{"variant", "explicit"}, {"values", numerics::scalars_to_json(s.values.values())}};
            else if constexpr (std::is_same_v<T, MeasureSource>)
                return {{"variant", "measure"}, {"spec", measures::measure_to_json(s.spec)}};
            else return {{"variant", "family"}, {"spec", sequences::family_to_json(s.spec)}};
        },
        src);
}

inline SequenceSource source_from_json(const nlohmann::json& j, int digits = kDefaultPrecision) {
    if (j.is_null()) return ZeroSource{};
    if (j.is_array()) return ExplicitSource{sequence_from_json(j, digits)};
    const std::string v = j.at("variant").get<std::string>();
    if (v == "zero") return ZeroSource{};
    if (v == "explicit") return ExplicitSource{sequence_from_json(j, digits)};
    if (v == "measure") return MeasureSource{measures::measure_from_json(j.at("spec"), digits)};
    if (v == "family") return FamilySource{sequences::family_from_json(j.at("spec"), digits)};
    throw std::invalid_argument("unknown input variant '" + v + "'");
}

// ---------------------------------------------------------------------------
// Equations

class DifferenceEquation {
public:
    DifferenceEquation(std::vector<Scalar> coeffs, SequenceSource input, std::vector<Scalar> initial)
        : coeffs_(std::move(coeffs)), input_(std::move(input)), initial_(std::move(initial)) {
        if (coeffs_.size() < 2) throw std::invalid_argument("difference equation needs order m >= 1");
        if (coeffs_.back().is_zero()) throw std::invalid_argument("leading coefficient d_m must be nonzero");
        if (initial_.size() != order()) {
            throw std::invalid_argument("expected " + std::to_string(order()) + " initial conditions, got " +
                                        std::to_string(initial_.size()));
        }
    }

    std::size_t order() const { return coeffs_.size() - 1; }
    const std::vector<Scalar>& coeffs() const { return coeffs_; }
    const SequenceSource& input() const { return input_; }
    const std::vector<Scalar>& initial() const { return initial_; }

private:
    std::vector<Scalar> coeffs_;
    SequenceSource input_;
    std::vector<Scalar> initial_;
};

inline nlohmann::json equation_to_json(const DifferenceEquation& eq) {
    return {{"coeffs", numerics::scalars_to_json(eq.coeffs())},
            {"initial", numerics::scalars_to_json(eq.initial())},
            {"input", source_to_json(eq.input())}};
}

inline DifferenceEquation equation_from_json(const nlohmann::json& j, int digits = kDefaultPrecision) {
    return DifferenceEquation(numerics::scalars_from_json(j.at("coeffs"), digits),
                              source_from_json(j.contains("input") ? j.at("input") : nlohmann::json(nullptr), digits),
                              numerics::scalars_from_json(j.at("initial"), digits));
}

/// sum_j d_j x^j
inline Polynomial characteristic_polynomial(const DifferenceEquation& eq) { return Polynomial(eq.coeffs()); }

/// r_{n+m} = (c_n - sum_{j<m} d_j r_{n+j}) / d_m, starting from the initial conditions.
inline MomentSequence solve(const DifferenceEquation& eq, std::size_t count, int digits = kDefaultPrecision) {
    if (count == 0) throw std::invalid_argument("solve: count must be >= 1");
    const std::size_t m = eq.order();
    const auto& d = eq.coeffs();
    std::vector<Scalar> r(eq.initial().begin(), eq.initial().begin() + static_cast<long>(std::min(count, m)));
    if (count > m) {
        const std::vector<Scalar> c = source_values(eq.input(), count - m, digits);
        for (std::size_t n = 0; n + m < count; ++n) {
            Scalar acc = c[n];
            for (std::size_t j = 0; j < m; ++j) acc = acc - d[j] * r[n + j];
            r.push_back(acc / d[m]);
        }
    }
    return MomentSequence(std::move(r), {{"source", "difference-equation"}, {"equation", equation_to_json(eq)}});
}

/// sum_j d_j r_{n+j} - c_n for every n the sequence covers.
inline std::vector<Scalar> residuals(const DifferenceEquation& eq, const MomentSequence& r, int digits = kDefaultPrecision) {
    const std::size_t m = eq.order();
    if (r.size() <= m) return {};
    const std::vector<Scalar> c = source_values(eq.input(), r.size() - m, digits);
    std::vector<Scalar> out;
    for (std::size_t n = 0; n + m < r.size(); ++n) {
        Scalar acc = -c[n];
        for (std::size_t j = 0; j <= m; ++j) acc = acc + eq.coeffs()[j] * r[n + j];
        out.push_back(std::move(acc));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Spectral form r_n = sum_k alpha_k b_k^n

struct SpectralSystem {
    std::vector<Scalar> roots;
    std::vector<Scalar> weights;
};

namespace detail {

inline void require_distinct(const std::vector<Scalar>& roots) {
    if (roots.empty()) throw std::invalid_argument("spectral system needs at least one root");
    for (std::size_t i = 0; i < roots.size(); ++i) {
        for (std::size_t j = i + 1; j < roots.size(); ++j) {
            if (roots[i] == roots[j]) throw std::invalid_argument("roots must be pairwise distinct");
        }
    }
}

}  // namespace detail

/// The sequence sum_k alpha_k b_k^n and its homogeneous equation with d_{m-j} = (-1)^j S_j(b).
inline std::pair<MomentSequence, DifferenceEquation> homogeneous_from_spectrum(const SpectralSystem& sys, std::size_t count) {
    detail::require_distinct(sys.roots);
    if (sys.weights.size() != sys.roots.size()) throw std::invalid_argument("one weight per root required");
    if (count == 0) throw std::invalid_argument("count must be >= 1");
    const std::size_t m = sys.roots.size();
    std::vector<Scalar> values;
    for (std::size_t n = 0; n < std::max(count, m); ++n) {
        Scalar acc(0);
        for (std::size_t k = 0; k < m; ++k) acc = acc + sys.weights[k] * numerics::pow(sys.roots[k], static_cast<long>(n));
        values.push_back(std::move(acc));
    }
    values = numerics::unify_kind(std::move(values));
    DifferenceEquation eq(numerics::poly_from_roots(sys.roots).coeffs(), ZeroSource{},
                          std::vector<Scalar>(values.begin(), values.begin() + static_cast<long>(m)));
    values.resize(count);
    return {MomentSequence(std::move(values), {{"source", "spectrum"},
                                               {"roots", numerics::scalars_to_json(sys.roots)},
                                               {"weights", numerics::scalars_to_json(sys.weights)}}),
            std::move(eq)};
}

struct WeightRecovery {
    std::vector<Scalar> weights;
    bool all_nonnegative = false;
};

/// Solves the Vandermonde system sum_j alpha_j b_j^k = p_k, k < m.
inline WeightRecovery weights_from_initial(const std::vector<Scalar>& roots, const std::vector<Scalar>& initial) {
    detail::require_distinct(roots);
    if (initial.size() != roots.size()) throw std::invalid_argument("one initial value per root required");
    const std::size_t m = roots.size();
    numerics::Matrix v(m, std::vector<Scalar>(m));
    for (std::size_t k = 0; k < m; ++k) {
        for (std::size_t j = 0; j < m; ++j) v[k][j] = numerics::pow(roots[j], static_cast<long>(k));
    }
    WeightRecovery w{numerics::solve_linear(std::move(v), initial), true};
    for (const auto& a : w.weights) w.all_nonnegative = w.all_nonnegative && a.sign() >= 0;
    return w;
}

// ---------------------------------------------------------------------------
// Moments of dB = dA / P

struct DividedOptions {
    int digits = kDefaultPrecision;
    std::optional<std::size_t> max_order;
    std::optional<Scalar> zero_threshold;
    unsigned threads = 1;
};

struct DividedResult {
    MomentSequence sequence;
    hankel::HankelReport report;
    measures::DivisorVerdict divisor = measures::DivisorVerdict::positive;
    std::vector<Scalar> initial;  ///< initial conditions actually used
};

/// b_k = integral of x^k / P(x) dA(x) for k < deg P.
inline std::vector<Scalar> divided_initial_conditions(const measures::MeasureSpec& spec, const Polynomial& p,
                                                      int digits = kDefaultPrecision) {
    if (p.degree() < 1) throw std::invalid_argument("divisor must have degree >= 1");
    std::vector<Scalar> b;
    for (long k = 0; k < p.degree(); ++k) b.push_back(measures::divided_moment(spec, p, static_cast<std::size_t>(k), digits));
    return numerics::unify_kind(std::move(b));
}

/// Runs sum_j c_j b_{n+j} = a_n forward from given initial conditions and attaches the Hankel report.
inline DividedResult divided_from_initial(const measures::MeasureSpec& spec, const Polynomial& p, std::vector<Scalar> initial,
                                          std::size_t count, const DividedOptions& opt = {}) {
    const auto verdict = measures::validate_divisor(spec, p);
    if (verdict == measures::DivisorVerdict::singular) {
        throw measures::DivisorError("divisor has a root on the support of the measure");
    }
    DifferenceEquation eq(p.coeffs(), MeasureSource{spec}, initial);
    MomentSequence seq = solve(eq, count, opt.digits);
    nlohmann::json prov = {{"source", "divided-measure"},
                           {"measure", measures::measure_to_json(spec)},
                           {"divisor", numerics::scalars_to_json(p.coeffs())},
                           {"divisor_verdict", measures::to_string(verdict)},
                           {"initial", numerics::scalars_to_json(initial)}};
    if (verdict == measures::DivisorVerdict::sign_changing) {
        prov["warning"] = "divisor is not positive on the support; dA/P is not a positive measure";
    }
    seq = seq.with_provenance(std::move(prov));
    const std::size_t max_order = std::min(opt.max_order.value_or(hankel::default_max_order(seq)), hankel::default_max_order(seq));
    auto report = hankel::check_pm(seq, max_order, opt.zero_threshold, opt.threads);
    return DividedResult{std::move(seq), std::move(report), verdict, std::move(initial)};
}

inline DividedResult divided_measure_moments(const measures::MeasureSpec& spec, const Polynomial& p, std::size_t count,
                                             const DividedOptions& opt = {}) {
    if (p.degree() < 1) throw std::invalid_argument("divisor must have degree >= 1");
    if (measures::validate_divisor(spec, p) == measures::DivisorVerdict::singular) {
        throw measures::DivisorError("divisor has a root on the support of the measure");
    }
    if (count < static_cast<std::size_t>(p.degree())) {
        throw std::invalid_argument("count must cover the " + std::to_string(p.degree()) + " initial conditions");
    }
    return divided_from_initial(spec, p, divided_initial_conditions(spec, p, opt.digits), count, opt);
}

inline nlohmann::json divided_to_json(const DividedResult& r) {
    return {{"sequence", sequence_to_json(r.sequence)},
            {"initial", numerics::scalars_to_json(r.initial)},
            {"divisor_verdict", measures::to_string(r.divisor)},
            {"hankel", hankel::report_to_json(r.report)}};
}

// ---------------------------------------------------------------------------
// Sensitivity of the construction to its initial conditions

struct SweepRow {
    Scalar delta;
    std::optional<std::size_t> first_negative_index;
    hankel::Verdict verdict = hankel::Verdict::pm_consistent;
    std::vector<Scalar> dets;
};

/// One row per delta: initial[perturbed_index] += delta on the computed initial conditions.
inline std::vector<SweepRow> sensitivity_sweep(const measures::MeasureSpec& spec, const Polynomial& p, std::size_t perturbed_index,
                                               const std::vector<Scalar>& deltas, std::size_t count, std::size_t max_order,
                                               const DividedOptions& opt = {}) {
    if (p.degree() < 1) throw std::invalid_argument("divisor must have degree >= 1");
    if (perturbed_index >= static_cast<std::size_t>(p.degree())) {
        throw std::invalid_argument("perturbed index " + std::to_string(perturbed_index) + " must be below deg P = " +
                                    std::to_string(p.degree()));
    }
    if (count < 2 * max_order + 1) {
        throw std::invalid_argument("count " + std::to_string(count) + " too short for Hankel order " + std::to_string(max_order));
    }
    if (measures::validate_divisor(spec, p) == measures::DivisorVerdict::singular) {
        throw measures::DivisorError("divisor has a root on the support of the measure");
    }
    const std::vector<Scalar> base = divided_initial_conditions(spec, p, opt.digits);
    std::vector<SweepRow> rows(deltas.size());
    DividedOptions inner = opt;
    inner.max_order = max_order;
    inner.threads = 1;
    auto work = [&](std::size_t i) {
        std::vector<Scalar> init = base;
        init[perturbed_index] = init[perturbed_index] + deltas[i];
        DividedResult r = divided_from_initial(spec, p, std::move(init), count, inner);
        rows[i] = SweepRow{deltas[i], r.report.first_negative_index, r.report.verdict, std::move(r.report.dets)};
    };
    if (opt.threads <= 1 || deltas.size() < 2) {
        for (std::size_t i = 0; i < deltas.size(); ++i) work(i);
        return rows;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < std::min<std::size_t>(opt.threads, deltas.size()); ++t) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < deltas.size(); i = next++) work(i);
        });
    }
    for (auto& th : pool) th.join();
    return rows;
}

/// Scalar as a CSV cell: "num/den" for exact, full decimal otherwise.
inline std::string csv_cell(const Scalar& s) {
    if (s.is_exact()) return s.rational().get_num().get_str() + "/" + s.rational().get_den().get_str();
    return s.to_string();
}

inline std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
    std::ostringstream out;
    const std::size_t width = rows.empty() ? 0 : rows.front().dets.size();
    out << "delta,first_negative_index";
    for (std::size_t n = 0; n < width; ++n) out << ",det_" << n;
    out << '\n';
    for (const auto& r : rows) {
        out << csv_cell(r.delta) << ',';
        if (r.first_negative_index) out << *r.first_negative_index;
        for (const auto& d : r.dets) out << ',' << csv_cell(d);
        out << '\n';
    }
    return out.str();
}

inline nlohmann::json sweep_to_json(const std::vector<SweepRow>& rows) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& r : rows) {
        out.push_back({{"delta", numerics::scalar_to_json(r.delta)},
                       {"first_negative_index", r.first_negative_index ? nlohmann::json(*r.first_negative_index) : nlohmann::json(nullptr)},
                       {"verdict", hankel::to_string(r.verdict)},
                       {"dets", numerics::scalars_to_json(r.dets)}});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Closed-form cross-checks

struct ClosedFormReport {
    std::vector<Scalar> solved;
    std::vector<Scalar> closed_form;
    std::optional<std::size_t> first_mismatch;
    std::vector<Scalar> hankel;           ///< orders 0..2 of the solved sequence
    std::vector<Scalar> expected_hankel;  ///< the closed-form triple
    bool hankel_matches = false;
    hankel::Verdict verdict = hankel::Verdict::pm_consistent;
    bool verdict_matches = true;
    bool passed = false;
};

namespace detail {

inline void finish(ClosedFormReport& r, const MomentSequence& seq) {
    for (std::size_t n = 0; n < r.solved.size(); ++n) {
        if (r.solved[n] != r.closed_form[n]) {
            r.first_mismatch = n;
            break;
        }
    }
    auto report = hankel::check_pm(seq, 2);
    r.hankel = report.dets;
    r.verdict = report.verdict;
    r.hankel_matches = std::equal(r.hankel.begin(), r.hankel.end(), r.expected_hankel.begin(), r.expected_hankel.end());
    r.passed = !r.first_mismatch && r.hankel_matches && r.verdict_matches;
}

inline void require_count(std::size_t count) {
    if (count < 5) throw std::invalid_argument("closed-form checks need count >= 5 (Hankel orders 0..2)");
}

}  // namespace detail

/// r_{n+1} - a r_n = d^n, r_0 = p0 against r_n = (a^n - d^n)/(a - d) + p0 a^n; Hankel p0, p0(d-a) - 1, 0.
inline ClosedFormReport first_order_solution_check(const Scalar& a, const Scalar& d, const Scalar& p0, std::size_t count) {
    if (a == d) throw std::invalid_argument("first-order check requires a != d");
    detail::require_count(count);
    DifferenceEquation eq({-a, Scalar(1)}, FamilySource{sequences::Powers{d}}, {p0});
    MomentSequence seq = solve(eq, count);
    ClosedFormReport r;
    r.solved = seq.values();
    for (std::size_t n = 0; n < count; ++n) {
        const long ln = static_cast<long>(n);
        r.closed_form.push_back((numerics::pow(a, ln) - numerics::pow(d, ln)) / (a - d) + p0 * numerics::pow(a, ln));
    }
    r.expected_hankel = {p0, p0 * (d - a) - Scalar(1), Scalar(0)};
    detail::finish(r, seq);
    return r;
}

/// r_{n+2} - 2a r_{n+1} + a^2 r_n = 0, r = 1, r1 against r_n = a^(n-1)(n r1 - a(n-1)); Hankel 1, -(r1-a)^2, 0.
inline ClosedFormReport double_root_check(const Scalar& a, const Scalar& r1, std::size_t count) {
    if (a.is_zero()) throw std::invalid_argument("double-root check requires a != 0");
    detail::require_count(count);
    DifferenceEquation eq({a * a, Scalar(-2) * a, Scalar(1)}, ZeroSource{}, {Scalar(1), r1});
    MomentSequence seq = solve(eq, count);
    ClosedFormReport r;
    r.solved = seq.values();
    for (std::size_t n = 0; n < count; ++n) {
        const long ln = static_cast<long>(n);
        r.closed_form.push_back(numerics::pow(a, ln - 1) * (Scalar(ln) * r1 - a * Scalar(ln - 1)));
    }
    r.expected_hankel = {Scalar(1), -numerics::pow(r1 - a, 2), Scalar(0)};
    detail::finish(r, seq);
    // a pm sequence only in the trivial case r1 = a
    const bool expect_pm = r1 == a;
    r.verdict_matches = expect_pm == (r.verdict == hankel::Verdict::pm_consistent);
    r.passed = r.passed && r.verdict_matches;
    return r;
}

inline nlohmann::json closed_form_to_json(const ClosedFormReport& r) {
    return {{"solved", numerics::scalars_to_json(r.solved)},
            {"closed_form", numerics::scalars_to_json(r.closed_form)},
            {"first_mismatch", r.first_mismatch ? nlohmann::json(*r.first_mismatch) : nlohmann::json(nullptr)},
            {"hankel", numerics::scalars_to_json(r.hankel)},
            {"expected_hankel", numerics::scalars_to_json(r.expected_hankel)},
            {"hankel_matches", r.hankel_matches},
            {"verdict", hankel::to_string(r.verdict)},
            {"verdict_matches", r.verdict_matches},
            {"passed", r.passed}};
}

struct ComplexRootReport {
    MomentSequence sequence;
    hankel::HankelReport report;
    /// Orders 0..3 in closed form, when r0 = 1/(a^2+b^2) and b != 0.
    std::optional<std::vector<Scalar>> closed_form;
};

/**
 * r_{n+2} + a^2 r_n = b^n (zero forcing when b = 0). With r0 = 1/s, s = a^2+b^2,
 * the Hankel transform is 1/s, (b - r1 s)(b + r1 s)/s^2, -(b - r1 s)^2/s, 0.
 */
inline ComplexRootReport complex_root_forcing_check(const Scalar& a, const Scalar& b, const Scalar& r0, const Scalar& r1,
                                                    std::size_t count, std::optional<Scalar> zero_threshold = std::nullopt) {
    if (a.is_zero()) throw std::invalid_argument("complex-root check requires a != 0");
    if (count < 3) throw std::invalid_argument("complex-root check needs count >= 3");
    SequenceSource input = b.is_zero() ? SequenceSource{ZeroSource{}} : SequenceSource{FamilySource{sequences::Powers{b}}};
    DifferenceEquation eq({a * a, Scalar(0), Scalar(1)}, std::move(input), {r0, r1});
    MomentSequence seq = solve(eq, count);
    ComplexRootReport out{seq, hankel::check_pm(seq, std::nullopt, std::move(zero_threshold)), std::nullopt};
    const Scalar s = a * a + b * b;
    if (!b.is_zero() && r0 == Scalar(1) / s) {
        const Scalar u = b - r1 * s;
        out.closed_form = std::vector<Scalar>{Scalar(1) / s, u * (b + r1 * s) / (s * s), -(u * u) / s, Scalar(0)};
    }
    return out;
}

}  // namespace momentlab::diffeq
