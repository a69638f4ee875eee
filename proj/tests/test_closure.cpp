#include "momentlab/closure.hpp"
#include "momentlab/families.hpp"
#include "momentlab/hankel.hpp"
#include "momentlab/measures.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace momentlab;
using namespace momentlab::closure;

namespace {

Scalar q(long p, long r = 1) { return Scalar::ratio(p, r); }

MomentSequence seq(std::initializer_list<Scalar> xs) { return MomentSequence(std::vector<Scalar>(xs)); }

MomentSequence fam(const sequences::FamilySpec& s, std::size_t n) { return sequences::family_sequence(s, n); }

MomentSequence powers(const Scalar& x, std::size_t n) { return fam(sequences::Powers{x}, n); }

}  // namespace

TEST(HausdorffWeights, Examples) {
    EXPECT_EQ(hausdorff_weights(Uniform01{}, 3).h, (std::vector<Scalar>{q(1, 4), q(1, 4), q(1, 4), q(1, 4)}));
    EXPECT_EQ(hausdorff_weights(PointMass{}, 2).h, (std::vector<Scalar>{q(1, 4), q(1, 2), q(1, 4)}));
    EXPECT_EQ(hausdorff_weights(BetaOneWeight{q(1)}, 2).h, (std::vector<Scalar>{q(1, 3), q(1, 3), q(1, 3)}));
    EXPECT_EQ(hausdorff_weights(PointMass{q(1, 3)}, 1).h, (std::vector<Scalar>{q(2, 3), q(1, 3)}));
    // beta = 2: binom(n,i) * 2 * B(i+1, n-i+2)
    EXPECT_EQ(hausdorff_weights(BetaOneWeight{q(2)}, 2).h, (std::vector<Scalar>{q(1, 2), q(1, 3), q(1, 6)}));
    EXPECT_EQ(hausdorff_weights(BetaOneWeight{q(0)}, 3).h, (std::vector<Scalar>{q(0), q(0), q(0), q(1)}));
}

TEST(HausdorffWeights, SumToOneAndNonnegative) {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 30; ++trial) {
        oracle::Q t = oracle::random_rational(rng, 20, 21);
        if (t <= 0) t = -t;
        if (t == 0 || t >= 1) t = oracle::Q(1, 3);
        oracle::Q b = oracle::random_rational(rng, 9, 4);
        if (b < 0) b = -b;
        for (const ChiSpec& chi : {ChiSpec(PointMass{Scalar(t)}), ChiSpec(BetaOneWeight{Scalar(b)}), ChiSpec(Uniform01{})}) {
            for (std::size_t n = 0; n <= 12; ++n) {
                auto w = hausdorff_weights(chi, n);
                Scalar sum(0);
                for (const auto& h : w.h) {
                    EXPECT_GE(h.sign(), 0);
                    sum += h;
                }
                EXPECT_EQ(sum, q(1)) << chi_to_json(chi).dump() << " n=" << n;
            }
        }
    }
}

TEST(HausdorffWeights, InvalidChiRejected) {
    EXPECT_THROW(hausdorff_weights(PointMass{q(0)}, 2), std::invalid_argument);
    EXPECT_THROW(hausdorff_weights(PointMass{q(1)}, 2), std::invalid_argument);
    EXPECT_THROW(hausdorff_weights(BetaOneWeight{q(-1)}, 2), std::invalid_argument);
}

TEST(Chi, JsonRoundTrip) {
    for (const ChiSpec& chi : {ChiSpec(PointMass{q(2, 5)}), ChiSpec(BetaOneWeight{q(3)}), ChiSpec(Uniform01{})}) {
        EXPECT_EQ(chi_to_json(chi_from_json(chi_to_json(chi))), chi_to_json(chi));
    }
    EXPECT_EQ(chi_name(chi_from_json("uniform01")), "uniform01");
    EXPECT_THROW(chi_from_json("gamma"), std::invalid_argument);
}

TEST(CombineLinear, Examples) {
    auto c = combine_linear(fam(sequences::Catalan{}, 5), fam(sequences::Factorial{}, 5), q(1, 2), q(1, 2));
    EXPECT_EQ(c.values(), (std::vector<Scalar>{q(1), q(1), q(2), q(11, 2), q(19)}));
    EXPECT_EQ(c.provenance()["op"], "combine-linear");
    EXPECT_EQ(c.provenance()["operands"].size(), 2u);
    EXPECT_THROW(combine_linear(powers(q(1), 3), powers(q(1), 4), q(1), q(1)), std::invalid_argument);
    EXPECT_THROW(combine_linear(powers(q(1), 3), powers(q(1), 3), q(-1), q(1)), std::invalid_argument);
}

TEST(HausdorffConvolve, PointMassOfPowersIsPowerOfMean) {
    const Scalar x = q(3), y = q(-2, 5);
    for (const Scalar& theta : {q(1, 2), q(1, 7), q(5, 6)}) {
        auto c = hausdorff_convolve(powers(x, 9), powers(y, 9), q(1), q(1), PointMass{theta});
        Scalar mean = theta * x + (q(1) - theta) * y;
        for (std::size_t n = 0; n < 9; ++n) EXPECT_EQ(c[n], numerics::pow(mean, static_cast<long>(n)));
    }
}

TEST(HausdorffConvolve, UniformOfPowersIsDividedDifference) {
    const Scalar x = q(2), y = q(1, 3);
    auto c = hausdorff_convolve(powers(x, 10), powers(y, 10), q(1), q(1), Uniform01{});
    for (std::size_t n = 0; n < 10; ++n) {
        const long k = static_cast<long>(n) + 1;
        Scalar want = (numerics::pow(x, k) - numerics::pow(y, k)) / (Scalar(k) * (x - y));
        EXPECT_EQ(c[n], want) << n;
    }
}

TEST(HausdorffConvolve, ScalesOperands) {
    auto c = hausdorff_convolve(powers(q(1), 6), powers(q(0), 6), q(3), q(1), PointMass{q(1, 2)});
    // a = 1, b = delta_0: c_n = h_{n,n} 3^n = (3/2)^n
    for (std::size_t n = 0; n < 6; ++n) EXPECT_EQ(c[n], numerics::pow(q(3, 2), static_cast<long>(n)));
}

TEST(HausdorffConvolve, UniformEqualsAverageConvolution) {
    auto a = fam(sequences::Catalan{}, 11), b = fam(sequences::Bell{}, 11);
    EXPECT_EQ(hausdorff_convolve(a, b, q(1), q(1), Uniform01{}).values(), average_convolution(a, b).values());
    EXPECT_EQ(hausdorff_convolve(a, b, q(1), q(1), BetaOneWeight{q(1)}).values(), average_convolution(a, b).values());
}

TEST(AverageConvolution, FibonacciAgainstOnes) {
    auto c = average_convolution(fam(sequences::FibShift{1}, 5), powers(q(1), 5));
    // (F_{n+3} - 1)/(n+1)
    EXPECT_EQ(c.values(), (std::vector<Scalar>{q(1), q(1), q(4, 3), q(7, 4), q(12, 5)}));
    for (unsigned n = 0; n < 5; ++n) {
        oracle::Q want(oracle::fib(n + 3) - 1, n + 1);
        want.canonicalize();
        EXPECT_EQ(c[n].rational(), want);
    }
}

TEST(PointwiseProduct, Examples) {
    EXPECT_EQ(pointwise_product(powers(q(2), 6), powers(q(3), 6)).values(), powers(q(6), 6).values());
    auto c = pointwise_product(fam(sequences::Catalan{}, 5), fam(sequences::Factorial{}, 5));
    EXPECT_EQ(c.values(), (std::vector<Scalar>{q(1), q(1), q(4), q(30), q(336)}));
}

TEST(Subsample, Examples) {
    auto c = fam(sequences::Catalan{}, 9);
    EXPECT_EQ(subsample(c, 2).values(), (std::vector<Scalar>{q(1), q(2), q(14), q(132), q(1430)}));
    EXPECT_EQ(subsample(c, 3).values(), (std::vector<Scalar>{q(1), q(5), q(132)}));
    EXPECT_EQ(subsample(c, 2, 2).size(), 2u);
    EXPECT_EQ(subsample(c, 1).values(), c.values());
    EXPECT_THROW(subsample(c, 0), std::invalid_argument);
    EXPECT_THROW(subsample(c, 3, 4), std::invalid_argument);
}

TEST(EvenEmbed, Examples) {
    auto c = fam(sequences::Catalan{}, 5);
    EXPECT_EQ(even_embed(c, EmbedMode::zero_odd).values(), (std::vector<Scalar>{q(1), q(0), q(2), q(0), q(14)}));
    auto s = even_embed(seq({q(1), q(1), q(2)}), EmbedMode::square_root);
    EXPECT_EQ(s.values(), (std::vector<Scalar>{q(1), q(0), q(1), q(0), q(2)}));
    EXPECT_THROW(even_embed(seq({q(1), q(-1)}), EmbedMode::square_root), std::invalid_argument);
    EXPECT_EQ(embed_mode_from_string("square-root"), EmbedMode::square_root);
    EXPECT_THROW(embed_mode_from_string("odd"), std::invalid_argument);
}

TEST(EvenEmbed, SquareRootThenSubsampleRoundTrips) {
    for (const auto& spec : {sequences::FamilySpec(sequences::Catalan{}), sequences::FamilySpec(sequences::Factorial{}),
                             sequences::FamilySpec(sequences::Bell{})}) {
        auto a = fam(spec, 8);
        EXPECT_EQ(subsample(even_embed(a, EmbedMode::square_root), 2).values(), a.values());
    }
}

TEST(EvenEmbed, SquareRootOfStieltjesIsPm) {
    // Catalan lives on [0, 4]; the symmetric square-root pushforward is the semicircle
    auto s = even_embed(fam(sequences::Catalan{}, 8), EmbedMode::square_root);
    auto r = hankel::check_pm(s);
    EXPECT_EQ(r.verdict, hankel::Verdict::pm_consistent);
}

TEST(Shift, Examples) {
    auto c = fam(sequences::Catalan{}, 7);
    EXPECT_EQ(shift(c, 2).values(), (std::vector<Scalar>{q(2), q(5), q(14), q(42), q(132)}));
    EXPECT_EQ(shift(c, 4).values(), (std::vector<Scalar>{q(14), q(42), q(132)}));
    EXPECT_THROW(shift(c, 1), std::invalid_argument);
    EXPECT_THROW(shift(c, 0), std::invalid_argument);
    EXPECT_THROW(shift(c, 8), std::invalid_argument);
}

TEST(Degenerate, Examples) {
    auto r = degenerate_diagnose(seq({q(1), q(2), q(4), Scalar::parse("81/10")}), q(0));
    EXPECT_TRUE(r.degenerate);
    EXPECT_EQ(r.variance, q(0));
    EXPECT_EQ(r.max_deviation, q(1, 10));
    EXPECT_EQ(r.worst_index, std::optional<std::size_t>(3));

    auto c = degenerate_diagnose(fam(sequences::Catalan{}, 5), q(0));
    EXPECT_FALSE(c.degenerate);
    EXPECT_EQ(c.variance, q(1));

    EXPECT_THROW(degenerate_diagnose(seq({q(2), q(2), q(2)}), q(0)), std::invalid_argument);
    EXPECT_THROW(degenerate_diagnose(seq({q(1), q(2)}), q(0)), std::invalid_argument);
}

TEST(Degenerate, PointMassIsExactlyDegenerate) {
    auto r = degenerate_diagnose(powers(q(3, 2), 8), q(0));
    EXPECT_TRUE(r.degenerate);
    EXPECT_EQ(r.max_deviation, q(0));
    EXPECT_EQ(degenerate_to_json(r)["degenerate"], true);
}

TEST(PartialSum, Examples) {
    auto f = exp_partial_sum_check(fam(sequences::Factorial{}, 3), 1);
    EXPECT_NEAR(f.minimum.to_double(), 0.75, 1e-30);
    EXPECT_NEAR(f.argmin.to_double(), -0.5, 1e-20);
    EXPECT_TRUE(f.nonnegative);

    auto g = exp_partial_sum_check(fam(sequences::GaussianAbs{}, 5), 2);
    EXPECT_NEAR(g.minimum.to_double(), 1.0, 1e-30);
    EXPECT_TRUE(g.nonnegative);

    auto bad = exp_partial_sum_check(seq({q(1), q(0), q(-1)}), 1);
    EXPECT_FALSE(bad.nonnegative);
    EXPECT_THROW(exp_partial_sum_check(fam(sequences::Factorial{}, 3), 2), std::invalid_argument);
}

TEST(PartialSum, PmSequencesGiveNonnegativePolynomials) {
    for (const auto& spec : {sequences::FamilySpec(sequences::Catalan{}), sequences::FamilySpec(sequences::Factorial{}),
                             sequences::FamilySpec(sequences::Powers{q(-3)}), sequences::FamilySpec(sequences::Bell{})}) {
        auto a = fam(spec, 9);
        for (std::size_t n = 1; n <= 4; ++n) {
            EXPECT_TRUE(exp_partial_sum_check(a, n, q(-20), q(20), 801).nonnegative) << sequences::family_to_json(spec).dump();
        }
    }
}

TEST(Closure, RandomPmPairsStayPm) {
    std::mt19937_64 rng(11);
    auto random_atomic = [&] {
        std::vector<measures::Atom> atoms;
        for (int i = 0; i < 3; ++i) {
            oracle::Q w = oracle::random_rational(rng, 5, 3);
            if (w <= 0) w = -w + 1;
            atoms.push_back({Scalar(oracle::random_rational(rng, 6, 3)), Scalar(w)});
        }
        return measures::moment_sequence(measures::FiniteAtomic(atoms), 11);
    };
    auto is_not_negative = [](const MomentSequence& s) { return hankel::check_pm(s).verdict != hankel::Verdict::not_pm; };
    for (int trial = 0; trial < 15; ++trial) {
        auto a = random_atomic(), b = random_atomic();
        EXPECT_TRUE(is_not_negative(combine_linear(a, b, q(2, 3), q(1, 5))));
        EXPECT_TRUE(is_not_negative(hausdorff_convolve(a, b, q(1), q(2), PointMass{q(1, 3)})));
        EXPECT_TRUE(is_not_negative(hausdorff_convolve(a, b, q(1, 2), q(1), BetaOneWeight{q(5, 2)})));
        EXPECT_TRUE(is_not_negative(average_convolution(a, b)));
        EXPECT_TRUE(is_not_negative(pointwise_product(a, b)));
        EXPECT_TRUE(is_not_negative(subsample(a, 2)));
        EXPECT_TRUE(is_not_negative(even_embed(a, EmbedMode::zero_odd)));
        EXPECT_TRUE(is_not_negative(shift(a, 2)));
    }
}
