#include "momentlab/families.hpp"
#include "momentlab/hankel.hpp"
#include "momentlab/measures.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace momentlab;
using namespace momentlab::sequences;

namespace {

Scalar q(long p, long r = 1) { return Scalar::ratio(p, r); }

std::vector<Scalar> ints(std::initializer_list<long> xs) {
    std::vector<Scalar> v;
    for (long x : xs) v.emplace_back(x);
    return v;
}

}  // namespace

TEST(Fibonacci, Examples) {
    EXPECT_EQ(fibonacci(0), q(0));
    EXPECT_EQ(fibonacci(1), q(1));
    EXPECT_EQ(fibonacci(10), q(55));
    for (unsigned n = 0; n < 200; n += 7) EXPECT_EQ(fibonacci(n).rational(), oracle::fib(n)) << n;
}

TEST(Fibonacci, PartialSums) {
    oracle::Z sum = 0;
    for (unsigned n = 1; n <= 20; ++n) {
        sum += oracle::fib(n);
        EXPECT_EQ(Scalar(oracle::Q(sum)), fibonacci(n + 2) - q(1));
    }
}

TEST(Stirling, Examples) {
    for (std::size_t n = 0; n < 8; ++n) EXPECT_EQ(stirling2(n, n), q(1));
    EXPECT_EQ(stirling2(3, 2), q(3));
    EXPECT_EQ(stirling2(4, 2), q(7));
    EXPECT_THROW(stirling2(3, 4), std::out_of_range);
}

TEST(Stirling, MatchesPartitionEnumeration) {
    for (unsigned n = 0; n <= 9; ++n) {
        auto counts = oracle::partition_counts(n);
        for (unsigned j = 0; j <= n; ++j) EXPECT_EQ(stirling2(n, j).rational(), counts[j]) << n << "," << j;
    }
}

TEST(Bell, BinomialRecurrence) {
    auto b = bell_numbers(17);
    for (std::size_t n = 0; n <= 15; ++n) {
        Integer sum = 0;
        for (std::size_t j = 0; j <= n; ++j) sum += oracle::binomial(n, j) * b[j];
        EXPECT_EQ(b[n + 1], sum);
    }
    auto o = oracle::bell(17);
    EXPECT_EQ(b, o);
}

TEST(FamilySequence, Examples) {
    EXPECT_EQ(family_sequence(Factorial{}, 4).values(), ints({1, 1, 2, 6}));
    EXPECT_EQ(family_sequence(GaussianAbs{}, 5).values(), ints({1, 0, 1, 0, 3}));
    EXPECT_EQ(family_sequence(FibShift{1}, 5).values(), ints({1, 1, 2, 3, 5}));
    EXPECT_EQ(family_sequence(FibShift{3}, 4).values(), ints({2, 3, 5, 8}));
    EXPECT_EQ(family_sequence(FibEven{}, 4).values(), ints({1, 3, 8, 21}));
    EXPECT_EQ(family_sequence(Catalan{}, 6).values(), ints({1, 1, 2, 5, 14, 42}));
    EXPECT_EQ(family_sequence(Powers{q(2)}, 4).values(), ints({1, 2, 4, 8}));
    EXPECT_EQ(family_sequence(Bell{}, 6).values(), ints({1, 1, 2, 5, 15, 52}));
    EXPECT_EQ(family_sequence(BellShift{}, 5).values(), ints({1, 2, 5, 15, 52}));
    EXPECT_EQ(family_sequence(RisingFactorial{q(2)}, 4).values(), ints({1, 2, 6, 24}));
    EXPECT_EQ(family_sequence(InversePowers{q(1)}, 3).values(), (std::vector<Scalar>{q(1), q(1, 4), q(1, 9)}));
    EXPECT_EQ(family_sequence(BetaRatio{q(1), q(1)}, 3).values(), (std::vector<Scalar>{q(1), q(1, 2), q(1, 3)}));
}

TEST(FamilySequence, FibonacciAveragesAreExact) {
    auto s1 = family_sequence(FibAveraged{FibAverage::shift_one}, 5);
    EXPECT_EQ(s1.values(), (std::vector<Scalar>{q(1), q(1, 2), q(2, 3), q(3, 4), q(1)}));
    auto s2 = family_sequence(FibAveraged{FibAverage::even}, 4);
    EXPECT_EQ(s2.values(), (std::vector<Scalar>{q(1), q(3, 2), q(8, 3), q(21, 4)}));
    auto s3 = family_sequence(FibAveraged{FibAverage::partial_sum}, 4);
    EXPECT_EQ(s3.values(), (std::vector<Scalar>{q(0), q(1, 2), q(2, 3), q(1)}));
    auto s4 = family_sequence(FibAveraged{FibAverage::odd_partial_sum}, 3);
    EXPECT_EQ(s4.offset(), 1u);
    EXPECT_EQ(s4.provenance()["first_index"], 1);
    // (F_{2n+1} - 1)/(n+1) for n = 1, 2, 3
    EXPECT_EQ(s4.values(), (std::vector<Scalar>{q(1, 2), q(4, 3), q(3)}));
}

TEST(FamilySequence, TouchardMatchesPoissonMoments) {
    for (const Scalar& lambda : {q(1), q(1, 3), q(7, 2)}) {
        auto t = family_sequence(Touchard{lambda}, 13);
        auto p = measures::moment_sequence(measures::Poisson{lambda}, 13);
        EXPECT_EQ(t.values(), p.values());
    }
}

TEST(FamilySequence, CatalanMatchesArcQuadrature) {
    auto c = family_sequence(Catalan{}, 13);
    const Polynomial one({Scalar(1)});
    for (std::size_t n = 0; n < 13; ++n) {
        EXPECT_EQ(c[n].rational(), oracle::catalan(n));
        Scalar quad = measures::divided_moment(measures::CatalanArc{}, one, n, 60);
        Real rel = abs(quad.real() - c[n].to_real(60)) / c[n].to_real(60);
        EXPECT_LT(rel.to_double(), 1e-48) << n;
    }
}

TEST(FamilySequence, InvalidParametersRejected) {
    EXPECT_THROW(family_sequence(Touchard{q(-1)}, 3), std::invalid_argument);
    EXPECT_THROW(family_sequence(BetaRatio{q(0), q(1)}, 3), std::invalid_argument);
    EXPECT_THROW(family_sequence(RisingFactorial{q(-1)}, 3), std::invalid_argument);
    EXPECT_THROW(family_sequence(InversePowers{q(-1)}, 3), std::invalid_argument);
    EXPECT_THROW(family_sequence(FibShift{2}, 3), std::invalid_argument);
    EXPECT_THROW(family_sequence(Factorial{}, 0), std::invalid_argument);
}

TEST(FamilySequence, JsonRoundTrip) {
    std::vector<FamilySpec> specs{Powers{q(3, 2)},   Factorial{},  GaussianAbs{},          Catalan{},
                                  InversePowers{q(1, 2)}, RisingFactorial{q(3)}, BetaRatio{q(1), q(2)},
                                  FibShift{5},       FibEven{},    FibAveraged{FibAverage::odd_partial_sum},
                                  Touchard{q(2)},    Bell{},       BellShift{}};
    for (const auto& s : specs) {
        auto j = family_to_json(s);
        EXPECT_EQ(family_to_json(family_from_json(j)), j);
        EXPECT_EQ(family_sequence(family_from_json(j), 6).values(), family_sequence(s, 6).values());
    }
}

TEST(Binet, GoldenRatioAndEvaluation) {
    const int p = 60;
    auto b = binet_weights(p);
    Real phi = (Real(1L, p) + sqrt(Real(5L, p))) / Real(2L, p);
    EXPECT_LT(abs(b.roots[0].real() - phi).to_double(), 1e-58);
    EXPECT_NEAR(b.roots[0].to_double(), 1.6180339887, 1e-10);
    const Real tol = pow(Real(10L, p), static_cast<long>(-(p - 5)));
    for (long n = 0; n <= 30; ++n) {
        Real f = fibonacci(static_cast<std::size_t>(n)).to_real(p);
        Real scale = f > Real(1L, p) ? f : Real(1L, p);
        EXPECT_LE(abs(b.evaluate(n).real() - f) / scale, tol) << n;
    }
}

TEST(Binet, ShiftedWeightForFibPlusThreeIsPositive) {
    auto b = binet_weights(60);
    auto w = b.shifted_weights(3);
    // -(1/sqrt5) psi^3 = 1 - 2/sqrt5
    Real want = Real(1L, 60) - Real(2L, 60) / sqrt(Real(5L, 60));
    EXPECT_LT(abs(w[1].real() - want).to_double(), 1e-55);
    EXPECT_GT(w[1].sign(), 0);
    EXPECT_GT(w[0].sign(), 0);
}

// Families with an explicit positive representing measure.
TEST(FamilySequence, ProvablyPmFamiliesPassCheckPm) {
    std::vector<FamilySpec> specs{Powers{q(2)},       Powers{q(-3, 2)},       Factorial{},           GaussianAbs{},
                                  Catalan{},          InversePowers{q(1, 2)}, RisingFactorial{q(0)}, RisingFactorial{q(5, 2)},
                                  BetaRatio{q(1, 2), q(3)}, FibShift{1},      FibShift{3},           FibShift{7},
                                  FibAveraged{FibAverage::shift_one},         Touchard{q(1, 2)},     Bell{},
                                  BellShift{}};
    for (const auto& s : specs) {
        auto r = hankel::check_pm(family_sequence(s, 17), 8);
        EXPECT_EQ(r.verdict, hankel::Verdict::pm_consistent) << family_to_json(s).dump();
    }
}

TEST(FamilySequence, FibEvenHasNegativeSecondDeterminant) {
    auto r = hankel::check_pm(family_sequence(FibEven{}, 5), 2);
    EXPECT_EQ(r.dets[1], q(-1));
    EXPECT_EQ(r.verdict, hankel::Verdict::not_pm);
}
