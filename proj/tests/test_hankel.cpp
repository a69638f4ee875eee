#include "momentlab/families.hpp"
#include "momentlab/hankel.hpp"
#include "momentlab/measures.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace momentlab;
using namespace momentlab::hankel;

namespace {

Scalar q(long p, long r = 1) { return Scalar::ratio(p, r); }

MomentSequence seq(std::initializer_list<long> xs) {
    std::vector<Scalar> v;
    for (long x : xs) v.emplace_back(x);
    return MomentSequence(v);
}

MomentSequence catalan(std::size_t n) { return sequences::family_sequence(sequences::Catalan{}, n); }

MomentSequence real_seq(std::initializer_list<const char*> xs, int digits) {
    std::vector<Scalar> v;
    for (const char* x : xs) v.emplace_back(Real::parse(x, digits));
    return MomentSequence(v);
}

}  // namespace

TEST(HankelMatrix, Examples) {
    auto m0 = hankel_matrix(seq({7}), 0);
    EXPECT_EQ(m0, (numerics::Matrix{{q(7)}}));
    EXPECT_EQ(hankel_matrix(seq({1, 1, 2}), 1), (numerics::Matrix{{q(1), q(1)}, {q(1), q(2)}}));
    EXPECT_EQ(hankel_matrix(catalan(5), 2), (numerics::Matrix{{q(1), q(1), q(2)}, {q(1), q(2), q(5)}, {q(2), q(5), q(14)}}));
}

TEST(HankelMatrix, InsufficientLengthThrows) {
    EXPECT_THROW(hankel_matrix(seq({1, 1}), 1), std::invalid_argument);
    EXPECT_THROW(hankel_transform(seq({1, 1, 2, 5}), 2), std::invalid_argument);
    EXPECT_THROW(check_pm(seq({1, 1, 2}), 2), std::invalid_argument);
}

TEST(HankelTransform, Examples) {
    EXPECT_EQ(hankel_transform(catalan(7), 3), (std::vector<Scalar>{q(1), q(1), q(1), q(1)}));
    auto p2 = sequences::family_sequence(sequences::Powers{q(2)}, 5);
    EXPECT_EQ(hankel_transform(p2, 2), (std::vector<Scalar>{q(1), q(0), q(0)}));
}

TEST(HankelTransform, MatchesCofactorOracle) {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 60; ++trial) {
        std::vector<Scalar> v;
        std::vector<oracle::Q> o;
        for (int i = 0; i < 9; ++i) {
            o.push_back(oracle::random_rational(rng, 12, 5));
            v.emplace_back(o.back());
        }
        auto dets = hankel_transform(MomentSequence(v), 4);
        for (std::size_t n = 0; n <= 4; ++n) EXPECT_EQ(dets[n].rational(), oracle::cofactor_det(oracle::hankel(o, n)));
    }
}

TEST(HankelTransform, ThreadCountDoesNotChangeResult) {
    auto s = sequences::family_sequence(sequences::Bell{}, 21);
    auto a = hankel_transform(s, 10, 1);
    auto b = hankel_transform(s, 10, 4);
    EXPECT_EQ(a, b);
    auto r = measures::moment_sequence(measures::GammaWeight{Scalar(Real::parse("0.7", 50))}, 15);
    auto x = hankel_transform(r, 7, 1);
    auto y = hankel_transform(r, 7, 3);
    for (std::size_t n = 0; n < x.size(); ++n) EXPECT_TRUE(x[n].identical(y[n]));
}

TEST(CheckPm, Examples) {
    auto c = check_pm(catalan(11), 5);
    EXPECT_EQ(c.verdict, Verdict::pm_consistent);
    EXPECT_FALSE(c.first_negative_index);
    EXPECT_EQ(c.dets.size(), 6u);

    auto bad = check_pm(seq({1, 0, -1}), 1);
    EXPECT_EQ(bad.verdict, Verdict::not_pm);
    ASSERT_TRUE(bad.first_negative_index);
    EXPECT_EQ(*bad.first_negative_index, 1u);
    EXPECT_EQ(bad.dets[1], q(-1));
}

TEST(CheckPm, DefaultMaxOrderUsesEveryEntry) {
    EXPECT_EQ(check_pm(catalan(12)).max_order, 5u);
    EXPECT_EQ(check_pm(catalan(13)).max_order, 6u);
}

TEST(CheckPm, ExactZeroThenNegativeIsNotPm) {
    auto r = check_pm(seq({1, 0, 0, 1, 1}));
    EXPECT_EQ(r.dets, (std::vector<Scalar>{q(1), q(0), q(-1)}));
    EXPECT_EQ(r.verdict, Verdict::not_pm);
    EXPECT_EQ(*r.first_negative_index, 2u);
    EXPECT_EQ(*r.borderline_index, 1u);
}

TEST(CheckPm, RealBorderlineZeroThenNegativeIsInconclusive) {
    auto r = check_pm(real_seq({"1", "0", "1e-25", "1", "1"}, 30));
    EXPECT_EQ(r.verdict, Verdict::inconclusive);
    EXPECT_FALSE(r.first_negative_index);
    EXPECT_EQ(*r.borderline_index, 1u);
    EXPECT_LT(r.dets[2].to_double(), -0.5);
}

TEST(CheckPm, RealNegativeWithoutBorderlineIsNotPm) {
    auto r = check_pm(real_seq({"1", "0.5", "0.2"}, 30));
    EXPECT_EQ(r.verdict, Verdict::not_pm);
    EXPECT_EQ(*r.first_negative_index, 1u);
}

TEST(CheckPm, DefaultRealThresholdIsScaleAware) {
    auto s = real_seq({"1", "2", "5", "14", "42"}, 40);
    auto r = check_pm(s);
    ASSERT_EQ(r.thresholds.size(), 3u);
    // 10^-20 * 42^(n+1) for the order-2 window, 10^-20 * 5^2 for order 1
    EXPECT_NEAR(r.thresholds[1].to_double(), 25e-20, 1e-30);
    EXPECT_NEAR(r.thresholds[2].to_double(), 42.0 * 42 * 42 * 1e-20, 1e-25);
    EXPECT_NEAR(r.zero_threshold.to_double(), 1e-20, 1e-32);
}

TEST(CheckPm, ExplicitThresholdIsAbsolute) {
    auto s = real_seq({"1", "1", "1.001"}, 30);
    EXPECT_EQ(check_pm(s).verdict, Verdict::pm_consistent);
    auto r = check_pm(s, std::nullopt, Scalar::parse("0.01"));
    EXPECT_EQ(*r.rank_drop_index, 1u);
    EXPECT_THROW(check_pm(s, std::nullopt, q(-1)), std::invalid_argument);
}

TEST(CheckPm, DeterministicOnRealSequences) {
    auto s = measures::moment_sequence(measures::BetaWeight{Scalar(Real::parse("0.3", 60)), q(2)}, 17);
    auto a = report_to_json(check_pm(s)).dump();
    auto b = report_to_json(check_pm(s)).dump();
    EXPECT_EQ(a, b);
}

TEST(CheckPm, ScalingCovariance) {
    std::vector<MomentSequence> bases{catalan(13), sequences::family_sequence(sequences::Factorial{}, 13),
                                      sequences::family_sequence(sequences::FibShift{1}, 13), seq({1, 0, -1, 2, 5})};
    for (const Scalar& c : {q(3), q(2, 7)}) {
        for (const auto& s : bases) {
            std::vector<Scalar> scaled;
            for (const auto& x : s.values()) scaled.push_back(c * x);
            auto a = check_pm(s);
            auto b = check_pm(MomentSequence(scaled));
            EXPECT_EQ(a.verdict, b.verdict);
            for (std::size_t n = 0; n < a.dets.size(); ++n) {
                EXPECT_EQ(b.dets[n], numerics::pow(c, static_cast<long>(n + 1)) * a.dets[n]);
            }
        }
    }
}

TEST(CheckPm, JsonFields) {
    auto j = report_to_json(check_pm(seq({1, 0, -1})));
    for (const char* key : {"dets", "first_negative_index", "rank_drop_index", "verdict", "zero_threshold"}) {
        EXPECT_TRUE(j.contains(key)) << key;
    }
    EXPECT_EQ(j["verdict"], "not-pm");
    EXPECT_EQ(j["first_negative_index"], 1);
}

TEST(RankDetect, Examples) {
    measures::FiniteAtomic two({{q(1), q(1, 2)}, {q(2), q(1, 2)}});
    auto s2 = measures::moment_sequence(two, 11);
    EXPECT_EQ(rank_detect(s2), std::optional<std::size_t>(2));
    auto d = hankel_transform(s2, 1);
    EXPECT_EQ(d[1], q(1, 4));

    auto s1 = measures::moment_sequence(measures::FiniteAtomic({{q(5), q(1)}}), 9);
    EXPECT_EQ(rank_detect(s1), std::optional<std::size_t>(1));

    EXPECT_FALSE(rank_detect(catalan(17), 8).has_value());
}

TEST(RankDetect, EqualsAtomCountForRandomAtomicMeasures) {
    std::mt19937_64 rng(4242);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t k = 1 + trial % 4;
        std::vector<measures::Atom> atoms;
        std::vector<oracle::Q> used;
        while (atoms.size() < k) {
            oracle::Q x = oracle::random_rational(rng, 10, 4);
            if (std::find(used.begin(), used.end(), x) != used.end()) continue;
            used.push_back(x);
            oracle::Q w = oracle::random_rational(rng, 9, 5);
            if (w <= 0) w = -w + 1;
            atoms.push_back({Scalar(x), Scalar(w)});
        }
        auto s = measures::moment_sequence(measures::FiniteAtomic(atoms), 2 * (k + 2) + 1);
        auto r = check_pm(s);
        EXPECT_EQ(r.rank_drop_index, std::optional<std::size_t>(k));
        for (std::size_t n = 0; n < k; ++n) EXPECT_GT(r.dets[n].sign(), 0);
    }
}

TEST(Inequalities, Examples) {
    EXPECT_TRUE(moment_inequality_report(sequences::family_sequence(sequences::Factorial{}, 21), true).empty());
    EXPECT_TRUE(moment_inequality_report(seq({1, 0, 1, 0, 3}), false).empty());
    auto v = moment_inequality_report(seq({1, 3, 1}), false);
    ASSERT_FALSE(v.empty());
    EXPECT_EQ(v[0].inequality, "cauchy-schwarz");
    EXPECT_EQ(v[0].indices, (std::vector<std::size_t>{1, 0}));
    EXPECT_NE(v[0].detail.find("9"), std::string::npos);
}

TEST(Inequalities, EvenRootMonotonicity) {
    // m_2 = 4 but m_4 = 5 < 16 = m_2^2 breaks Cauchy-Schwarz and root monotonicity
    auto v = moment_inequality_report(seq({1, 0, 4, 0, 5}), false);
    bool root = false;
    for (const auto& x : v) root = root || x.inequality == "even-root-monotonicity";
    EXPECT_TRUE(root);
}

TEST(Inequalities, NonnegativeSupport) {
    auto v = moment_inequality_report(seq({1, -1, 1, -1, 1}), true);
    bool neg = false;
    for (const auto& x : v) neg = neg || x.inequality == "nonnegativity";
    EXPECT_TRUE(neg);
    EXPECT_TRUE(moment_inequality_report(seq({1, -1, 1, -1, 1}), false).empty());
    // m_1 = 2, m_2 = 3: sqrt(3) < 2 breaks n-th root monotonicity on [0, inf)
    auto w = moment_inequality_report(MomentSequence({q(1), q(2), q(3), q(9), q(81)}), true);
    bool mono = false;
    for (const auto& x : w) mono = mono || x.inequality == "root-monotonicity";
    EXPECT_TRUE(mono);
}

TEST(Inequalities, RealSequencesUseRoots) {
    auto s = measures::moment_sequence(measures::GammaWeight{Scalar(Real::parse("1.5", 50))}, 21);
    EXPECT_TRUE(moment_inequality_report(s, true).empty());
    EXPECT_THROW(moment_inequality_report(seq({0, 1}), false), std::invalid_argument);
}
