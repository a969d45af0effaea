#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace steingauge;
using R = Rational;

namespace {

R rat(int64_t n, int64_t d) { return ScalarTraits<R>::from_ratio(n, d); }

}  // namespace

TEST(ClassicPinskerCheck, SpotPair) {
    auto p = build_explicit<R>(0, {rat(1, 2), rat(1, 2)});
    auto q = build_explicit<R>(0, {rat(1, 4), rat(3, 4)});
    auto c = check_classic_pinsker(p, q);
    EXPECT_TRUE(c.passed);
    EXPECT_NEAR(c.lhs, 0.5, 1e-12);                        // 2 tv
    EXPECT_NEAR(c.rhs, std::sqrt(2 * 0.1308120359411370), 1e-12);
}

TEST(DirectionalChecks, PassOnSharedSupportPairs) {
    std::mt19937_64 gen(21);
    for (int t = 0; t < 60; ++t) {
        int64_t atoms = 3 + static_cast<int64_t>(gen() % 10);
        auto p = random_pmf<R>(0, atoms, gen);
        auto q = random_pmf<R>(0, atoms, gen);
        auto bwd = check_backward_bound(p, q);
        auto fwd = check_forward_bound(p, q);
        EXPECT_TRUE(bwd.passed) << bwd.reason;
        EXPECT_TRUE(fwd.passed) << fwd.reason;
        EXPECT_FALSE(bwd.skipped);
        EXPECT_FALSE(fwd.skipped);
        auto bk = check_backward_kolmogorov(p, q);
        auto fk = check_forward_kolmogorov(p, q);
        EXPECT_TRUE(bk.passed);
        EXPECT_TRUE(fk.passed);
    }
}

TEST(PoissonChecks, DecompositionExactOnRationals) {
    for (int64_t num : {5, 10, 20, 50}) {
        R lam = rat(num, 10);
        auto q = build_binomial<R>(40, lam / ScalarTraits<R>::from_int(40));
        auto c = check_poisson_decomposition_exact(lam, q, TruncationPolicy{});
        EXPECT_TRUE(c.passed) << c.reason;
        EXPECT_EQ(c.lhs, 0.0);
    }
    // a dense finite law is not in the finite branch: skipped with a reason
    std::mt19937_64 gen(23);
    auto q = random_pmf<R>(0, 6, gen);
    auto c = check_poisson_decomposition_exact(rat(3, 2), q, TruncationPolicy{});
    EXPECT_TRUE(c.skipped);
    EXPECT_FALSE(c.reason.empty());
}

TEST(PoissonChecks, InformationValueMatchesReciprocal) {
    // the check's lhs is already the deviation |I - 1/lambda|
    for (double lam : {0.5, 1.0, 2.0, 5.0}) {
        auto c = check_poisson_information_value(ScalarTraits<R>::from_double(lam),
                                                 TruncationPolicy{});
        EXPECT_TRUE(c.passed) << "lambda=" << lam << " reason=" << c.reason;
        EXPECT_LE(c.lhs, 1e-9);
    }
}

TEST(PoissonChecks, SelfComparisonBoundIsTight) {
    R lam = rat(2, 1);
    auto q = build_poisson<R>(lam, TruncationPolicy{});
    auto c = check_poisson_information_bound(lam, q, TruncationPolicy{});
    EXPECT_TRUE(c.passed) << c.reason;
    EXPECT_LE(c.lhs, 1e-10);
    EXPECT_LE(c.rhs, 1e-10);
}

TEST(PoissonChecks, ConstantSaturationAndCap) {
    for (double lam : {0.8, 1.0, 2.0, 5.0, 10.0}) {
        auto c = check_poisson_constant_saturation(lam);
        EXPECT_TRUE(c.passed);
        EXPECT_FALSE(c.skipped);
    }
    auto low = check_poisson_constant_saturation(0.5);
    EXPECT_TRUE(low.skipped);  // below the threshold equality is not claimed
    for (double lam : {0.1, 0.5, 1.0, 2.0, 10.0}) EXPECT_TRUE(check_poisson_constant_cap(lam).passed);
}

TEST(PoissonChecks, SharpConstantNeverBeatsReference) {
    TruncationPolicy pol;
    for (double lam : {0.1, 0.5, 2.0 / std::exp(1.0), 1.0, 2.0, 5.0, 10.0}) {
        R lamS = ScalarTraits<R>::from_double(lam);
        auto q = build_binomial<R>(40, lamS / ScalarTraits<R>::from_int(40));
        auto [sharp, ref] = check_poisson_constant_comparison(lamS, q, pol);
        EXPECT_FALSE(sharp.skipped) << sharp.reason;
        EXPECT_TRUE(sharp.passed) << "lambda=" << lam;
        EXPECT_TRUE(ref.passed) << "lambda=" << lam;
        EXPECT_LE(sharp.rhs, ref.rhs + 1e-12);
    }
    // mean mismatch trips the hypothesis gate instead of failing
    auto off = build_binomial<R>(10, rat(9, 10));
    auto [s2, r2] = check_poisson_constant_comparison(R(1), off, pol);
    EXPECT_TRUE(s2.skipped);
    EXPECT_TRUE(r2.skipped);
}

TEST(PoissonChecks, WeightedSupIndicator) {
    for (double lam : {1.0, 2.0, 5.0}) {
        for (Direction dir : {Direction::forward, Direction::backward}) {
            auto c = check_poisson_weighted_sup_indicator(ScalarTraits<R>::from_double(lam), dir,
                                                          TruncationPolicy{});
            EXPECT_TRUE(c.passed) << "lambda=" << lam;
            EXPECT_LE(c.lhs, c.rhs + 1e-9 + 64 * c.truncation_error);
        }
    }
}

TEST(RankChecks, WeightedSupLemmaConstant) {
    for (int64_t theta : {2, 3}) {
        auto c = check_rank_weighted_sup<R>(theta, TruncationPolicy{});
        EXPECT_TRUE(c.passed) << "theta=" << theta << " " << c.reason;
        double lemma = 1.0 / (theta * (double)theta) + 1.0 / ((double)theta * theta * theta);
        EXPECT_NEAR(c.rhs, lemma, 1e-15);
    }
}

TEST(RankExperimentRun, AnchorsAndChain) {
    auto ex = run_rank_experiment<R>(2, 6, 2, 0, 0x5ba1ced1);
    EXPECT_EQ(ex.theta, 2);
    ASSERT_EQ(ex.links.size(), 6u);
    const RankLink& first = ex.links.front();
    EXPECT_EQ(first.n, 1);
    EXPECT_NEAR(first.bound, 0.75, 1e-15);   // 3 / 2^2
    EXPECT_NEAR(first.moment, 1.5, 1e-15);   // 2 - 2^{-1}
    EXPECT_TRUE(first.moment_exact);
    for (const RankLink& lk : ex.links) {
        EXPECT_TRUE(lk.links_hold()) << "n=" << lk.n;
        EXPECT_LE(lk.tv, lk.weighted + 1e-15);
        EXPECT_LE(lk.weighted, lk.lemma + 1e-15);
        EXPECT_LE(lk.lemma, lk.cap + 1e-15);
        EXPECT_LE(lk.cap, lk.bound + 1e-15);
    }
    // bounds shrink geometrically in n
    for (size_t i = 1; i < ex.links.size(); ++i)
        EXPECT_LT(ex.links[i].tv, ex.links[i - 1].tv);
}

TEST(RankExperimentRun, MonteCarloAgreesLoosely) {
    auto ex = run_rank_experiment<R>(2, 4, 2, 20000, 0x5ba1ced1);
    EXPECT_EQ(ex.mc_samples, 20000);
    EXPECT_LE(ex.mc_tv, 0.05);
}

TEST(Suites, ClassicGridAllPass) {
    SuiteConfig cfg;
    cfg.pairs = 50;
    auto r = run_suite<R>(SuiteName::classic_pinsker, cfg);
    EXPECT_EQ(r.failed, 0);
    EXPECT_EQ(r.skipped, 0);
    EXPECT_EQ(r.total, static_cast<int>(r.checks.size()));
}

TEST(Suites, DirectionalGridsAllPass) {
    SuiteConfig cfg;
    cfg.pairs = 40;
    for (Direction dir : {Direction::backward, Direction::forward}) {
        auto r = run_suite<R>(dir == Direction::backward ? SuiteName::backward : SuiteName::forward, cfg);
        EXPECT_EQ(r.failed, 0) << r.suite;
        EXPECT_EQ(r.skipped, 0) << r.suite;
        EXPECT_GE(r.total, cfg.pairs);
    }
}

TEST(Suites, PoissonGridNoFailures) {
    SuiteConfig cfg;
    auto r = run_suite<R>(SuiteName::poisson, cfg);
    EXPECT_EQ(r.failed, 0);
    // exact-backend skips are hypothesis gates, never silent: each carries a reason
    for (const auto& c : r.checks)
        if (c.skipped) EXPECT_FALSE(c.reason.empty()) << c.name;
}

TEST(Suites, RankGridOneRowPerCase) {
    SuiteConfig cfg;
    cfg.thetas = {2, 3, 5};
    cfg.rank_n_max = 8;
    auto r = run_suite<R>(SuiteName::rank, cfg);
    EXPECT_EQ(r.failed, 0);
    EXPECT_EQ(r.total, 24);  // 3 thetas x 8 ranks, no Monte-Carlo rows by default
    for (const auto& c : r.checks) EXPECT_EQ(c.name, "rank_tv_bound");
}

TEST(Suites, RankGridWithMonteCarloRows) {
    SuiteConfig cfg;
    cfg.thetas = {2};
    cfg.rank_n_max = 3;
    cfg.mc_samples = 20000;
    auto r = run_suite<R>(SuiteName::rank, cfg);
    EXPECT_EQ(r.total, 4);
    EXPECT_EQ(r.checks.back().name, "rank_monte_carlo");
    EXPECT_EQ(r.failed, 0);
}

TEST(Suites, ZooAndCharacterizationPass) {
    SuiteConfig cfg;
    cfg.pairs = 20;
    auto z = run_suite<R>(SuiteName::zoo, cfg);
    EXPECT_EQ(z.failed, 0);
    EXPECT_EQ(z.skipped, 0);
    auto c = run_suite<R>(SuiteName::characterization, cfg);
    EXPECT_EQ(c.failed, 0);
    EXPECT_EQ(c.skipped, 0);
}

TEST(Suites, FloatBackendPassesWithPaddedComparisons) {
    SuiteConfig cfg;
    cfg.pairs = 30;
    EXPECT_EQ(run_suite<double>(SuiteName::classic_pinsker, cfg).failed, 0);
    EXPECT_EQ(run_suite<double>(SuiteName::backward, cfg).failed, 0);
    EXPECT_EQ(run_suite<double>(SuiteName::forward, cfg).failed, 0);
    EXPECT_EQ(run_suite<double>(SuiteName::poisson, cfg).failed, 0);
    EXPECT_EQ(run_suite<double>(SuiteName::zoo, cfg).failed, 0);
}

TEST(Suites, SameSeedSameReport) {
    SuiteConfig cfg;
    cfg.pairs = 25;
    auto a = run_suite<R>(SuiteName::classic_pinsker, cfg);
    auto b = run_suite<R>(SuiteName::classic_pinsker, cfg);
    ASSERT_EQ(a.checks.size(), b.checks.size());
    for (size_t i = 0; i < a.checks.size(); ++i) {
        EXPECT_EQ(a.checks[i].params, b.checks[i].params);
        EXPECT_EQ(a.checks[i].lhs, b.checks[i].lhs);
        EXPECT_EQ(a.checks[i].rhs, b.checks[i].rhs);
    }
    cfg.seed = 99;
    auto c = run_suite<R>(SuiteName::classic_pinsker, cfg);
    bool any_diff = false;
    for (size_t i = 0; i < std::min(a.checks.size(), c.checks.size()); ++i)
        any_diff |= a.checks[i].lhs != c.checks[i].lhs;
    EXPECT_TRUE(any_diff);
}

TEST(OperatorMean, VanishesForBoundaryClassMembers) {
    std::mt19937_64 gen(31);
    for (int t = 0; t < 20; ++t) {
        auto p = random_pmf<R>(0, 4 + gen() % 6, gen);
        auto f = random_member_function<R>(p, Direction::forward, gen);
        EXPECT_EQ(operator_mean(p, Direction::forward, f), R(0));
        auto g = random_member_function<R>(p, Direction::backward, gen);
        EXPECT_EQ(operator_mean(p, Direction::backward, g), R(0));
    }
}
