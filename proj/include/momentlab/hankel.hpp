#pragma once

/**
 * @file hankel.hpp
 * @brief Hankel matrices, Hankel transforms, positive-moment verdicts,
 *        finite-support rank detection and the classical moment inequalities.
 */

#include "momentlab/linalg.hpp"
#include "momentlab/moment_sequence.hpp"
#include "momentlab/scalar.hpp"
#include "momentlab/scalar_json.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace momentlab::hankel {

using numerics::Matrix;

inline void require_length(const MomentSequence& seq, std::size_t order) {
    if (seq.size() < 2 * order + 1) {
        throw std::invalid_argument("Hankel order " + std::to_string(order) + " needs " + std::to_string(2 * order + 1) +
                                    " entries, sequence has " + std::to_string(seq.size()));
    }
}

/// Largest order the sequence supports: floor((len - 1) / 2).
inline std::size_t default_max_order(const MomentSequence& seq) {
    if (seq.empty()) throw std::invalid_argument("empty sequence");
    return (seq.size() - 1) / 2;
}

/// (n+1) x (n+1) matrix with entry (i, j) = seq[i + j].
inline Matrix hankel_matrix(const MomentSequence& seq, std::size_t n) {
    require_length(seq, n);
    Matrix m(n + 1, std::vector<Scalar>(n + 1));
    for (std::size_t i = 0; i <= n; ++i) {
        for (std::size_t j = 0; j <= n; ++j) m[i][j] = seq[i + j];
    }
    return m;
}

/// Determinants of orders 0..max_order. Orders are independent, so `threads` > 1 splits them.
inline std::vector<Scalar> hankel_transform(const MomentSequence& seq, std::size_t max_order, unsigned threads = 1) {
    require_length(seq, max_order);
    std::vector<Scalar> dets(max_order + 1);
    auto work = [&](std::size_t n) { dets[n] = numerics::determinant(hankel_matrix(seq, n)); };
    if (threads <= 1 || max_order == 0) {
        for (std::size_t n = 0; n <= max_order; ++n) work(n);
        return dets;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    const unsigned count = std::min<unsigned>(threads, static_cast<unsigned>(max_order + 1));
    for (unsigned t = 0; t < count; ++t) {
        pool.emplace_back([&] {
            for (std::size_t n = next++; n <= max_order; n = next++) work(n);
        });
    }
    for (auto& th : pool) th.join();
    return dets;
}

enum class Verdict { pm_consistent, not_pm, inconclusive };

inline std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::pm_consistent: return "pm-consistent";
        case Verdict::not_pm: return "not-pm";
        case Verdict::inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

struct HankelReport {
    std::vector<Scalar> dets;
    std::optional<std::size_t> first_negative_index;
    std::optional<std::size_t> rank_drop_index;
    std::optional<std::size_t> borderline_index;  ///< first order inside the zero band, if any
    Verdict verdict = Verdict::pm_consistent;
    Scalar zero_threshold;           ///< base threshold (0 for exact sequences)
    std::vector<Scalar> thresholds;  ///< effective threshold per order
    std::size_t max_order = 0;
};

/// Per-order cutoff 10^-(p/2) * max(1, max |entry|)^(order+1) for real sequences; 0 for exact ones.
inline std::vector<Scalar> scaled_thresholds(const MomentSequence& seq, std::size_t max_order, const Scalar& base) {
    std::vector<Scalar> out;
    out.reserve(max_order + 1);
    Scalar largest(1);
    std::size_t seen = 0;
    for (std::size_t n = 0; n <= max_order; ++n) {
        for (; seen <= 2 * n; ++seen) largest = std::max(largest, numerics::abs(seq[seen]));
        out.push_back(base * numerics::pow(largest, static_cast<long>(n + 1)));
    }
    return out;
}

inline Scalar default_base_threshold(const MomentSequence& seq) {
    if (seq.is_exact()) return Scalar(0);
    const int p = seq.precision();
    return Scalar(pow(Real(10L, p), static_cast<long>(-(p / 2))));
}

namespace detail {

inline std::optional<std::size_t> rank_drop(const std::vector<Scalar>& dets, const std::vector<Scalar>& thresholds) {
    std::optional<std::size_t> drop;
    for (std::size_t n = dets.size(); n-- > 0;) {
        if (numerics::abs(dets[n]) <= thresholds[n]) drop = n;
        else break;
    }
    return drop;
}

}  // namespace detail

/**
 * Hankel-positivity certificate up to `max_order`.
 *
 * With an explicit `zero_threshold` the same absolute band is used at every
 * order; otherwise exact sequences use 0 and real ones the scale-aware default.
 * A real-kind determinant that is negative beyond the band after an earlier
 * in-band determinant yields `inconclusive` rather than `not-pm`.
 */
inline HankelReport check_pm(const MomentSequence& seq, std::optional<std::size_t> max_order = std::nullopt,
                             std::optional<Scalar> zero_threshold = std::nullopt, unsigned threads = 1) {
    HankelReport r;
    r.max_order = max_order.value_or(default_max_order(seq));
    r.dets = hankel_transform(seq, r.max_order, threads);
    if (zero_threshold) {
        if (zero_threshold->sign() < 0) throw std::invalid_argument("zero threshold must be nonnegative");
        r.zero_threshold = *zero_threshold;
        r.thresholds.assign(r.max_order + 1, *zero_threshold);
    } else {
        r.zero_threshold = default_base_threshold(seq);
        r.thresholds = scaled_thresholds(seq, r.max_order, r.zero_threshold);
    }
    std::optional<std::size_t> negative;
    for (std::size_t n = 0; n <= r.max_order; ++n) {
        if (numerics::abs(r.dets[n]) <= r.thresholds[n]) {
            if (!r.borderline_index) r.borderline_index = n;
        } else if (r.dets[n] < -r.thresholds[n]) {
            negative = n;
            break;
        }
    }
    r.rank_drop_index = detail::rank_drop(r.dets, r.thresholds);
    if (!negative) {
        r.verdict = Verdict::pm_consistent;
    } else if (seq.is_exact() || !r.borderline_index || *r.borderline_index > *negative) {
        r.verdict = Verdict::not_pm;
        r.first_negative_index = negative;
    } else {
        r.verdict = Verdict::inconclusive;
    }
    return r;
}

/// Order from which every computed determinant vanishes (within threshold), if any.
inline std::optional<std::size_t> rank_detect(const MomentSequence& seq, std::optional<std::size_t> max_order = std::nullopt,
                                              std::optional<Scalar> zero_threshold = std::nullopt) {
    return check_pm(seq, max_order, std::move(zero_threshold)).rank_drop_index;
}

inline nlohmann::json report_to_json(const HankelReport& r) {
    auto opt = [](const std::optional<std::size_t>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); };
    return {{"dets", numerics::scalars_to_json(r.dets)},
            {"first_negative_index", opt(r.first_negative_index)},
            {"rank_drop_index", opt(r.rank_drop_index)},
            {"borderline_index", opt(r.borderline_index)},
            {"verdict", to_string(r.verdict)},
            {"zero_threshold", numerics::scalar_to_json(r.zero_threshold)},
            {"max_order", r.max_order}};
}

// ---------------------------------------------------------------------------
// Moment inequalities

struct InequalityViolation {
    std::string inequality;  ///< "even-nonnegativity", "cauchy-schwarz", "even-root-monotonicity", ...
    std::vector<std::size_t> indices;
    std::string detail;
};

/**
 * Checks, on the prefix normalized to m_0 = 1:
 *   m_{2i} >= 0;
 *   m_n^2 <= m_{2(n-m)} m_{2m} for 0 <= m <= n;
 *   m_{2n}^{1/(2n)} non-decreasing in n;
 *   with `nonneg_support`: m_n >= 0 and m_n^{1/n} non-decreasing.
 * Exact sequences are compared exactly (root inequalities by raising to integer powers).
 */
inline std::vector<InequalityViolation> moment_inequality_report(const MomentSequence& seq, bool nonneg_support) {
    if (seq.empty() || seq[0].sign() <= 0) throw std::invalid_argument("moment inequalities need m_0 > 0");
    const bool exact = seq.is_exact();
    const int p = exact ? kDefaultPrecision : seq.precision();
    const Scalar tol = exact ? Scalar(0) : Scalar(pow(Real(10L, p), static_cast<long>(-(p - 10))));
    std::vector<Scalar> m;
    for (const auto& v : seq.values()) m.push_back(v / seq[0]);
    const std::size_t len = m.size();
    std::vector<InequalityViolation> out;

    // a <= b up to relative tolerance
    auto leq = [&](const Scalar& a, const Scalar& b) {
        if (exact) return a <= b;
        Scalar scale = std::max({Scalar(1), numerics::abs(a), numerics::abs(b)});
        return a <= b + tol * scale;
    };
    // x^(1/i) <= y^(1/j) for x, y >= 0
    auto root_leq = [&](const Scalar& x, long i, const Scalar& y, long j) {
        if (exact) return numerics::pow(x, j) <= numerics::pow(y, i);
        if (x.is_zero()) return true;
        if (y.is_zero()) return leq(x, Scalar(0));
        Real rx = pow(x.to_real(p), Real(1L, p) / Real(i, p));
        Real ry = pow(y.to_real(p), Real(1L, p) / Real(j, p));
        return leq(Scalar(rx), Scalar(ry));
    };

    for (std::size_t i = 0; 2 * i < len; ++i) {
        if (!leq(Scalar(0), m[2 * i])) {
            out.push_back({"even-nonnegativity", {2 * i}, "m_" + std::to_string(2 * i) + " = " + m[2 * i].to_string() + " < 0"});
        }
    }
    for (std::size_t n = 0; 2 * n < len; ++n) {
        for (std::size_t k = 0; k <= n; ++k) {
            Scalar lhs = m[n] * m[n];
            Scalar rhs = m[2 * (n - k)] * m[2 * k];
            if (!leq(lhs, rhs)) {
                out.push_back({"cauchy-schwarz",
                               {n, k},
                               "m_" + std::to_string(n) + "^2 = " + lhs.to_string() + " > m_" + std::to_string(2 * (n - k)) +
                                   " m_" + std::to_string(2 * k) + " = " + rhs.to_string()});
            }
        }
    }
    for (std::size_t n = 1; 2 * n + 2 < len; ++n) {
        const Scalar& a = m[2 * n];
        const Scalar& b = m[2 * n + 2];
        if (a.sign() < 0 || b.sign() < 0) continue;  // already reported as even-nonnegativity
        if (!root_leq(a, static_cast<long>(2 * n), b, static_cast<long>(2 * n + 2))) {
            out.push_back({"even-root-monotonicity",
                           {2 * n, 2 * n + 2},
                           "m_" + std::to_string(2 * n) + "^(1/" + std::to_string(2 * n) + ") > m_" + std::to_string(2 * n + 2) +
                               "^(1/" + std::to_string(2 * n + 2) + ")"});
        }
    }
    if (nonneg_support) {
        for (std::size_t n = 0; n < len; ++n) {
            if (!leq(Scalar(0), m[n])) {
                out.push_back({"nonnegativity", {n}, "m_" + std::to_string(n) + " < 0 with support in [0, inf)"});
            }
        }
        for (std::size_t n = 1; n + 1 < len; ++n) {
            if (m[n].sign() < 0 || m[n + 1].sign() < 0) continue;
            if (!root_leq(m[n], static_cast<long>(n), m[n + 1], static_cast<long>(n + 1))) {
                out.push_back({"root-monotonicity",
                               {n, n + 1},
                               "m_" + std::to_string(n) + "^(1/" + std::to_string(n) + ") > m_" + std::to_string(n + 1) +
                                   "^(1/" + std::to_string(n + 1) + ")"});
            }
        }
    }
    return out;
}

inline nlohmann::json violations_to_json(const std::vector<InequalityViolation>& vs) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& v : vs) out.push_back({{"inequality", v.inequality}, {"indices", v.indices}, {"detail", v.detail}});
    return out;
}

}  // namespace momentlab::hankel
