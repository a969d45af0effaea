#include "oracles.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace steingauge;
using R = Rational;

namespace {

R rat(int64_t n, int64_t d) { return ScalarTraits<R>::from_ratio(n, d); }

}  // namespace

TEST(Zoo, EveryClosedFormMatchesGenericOperator) {
    auto cases = default_zoo_cases<R>(TruncationPolicy{});
    ASSERT_EQ(cases.size(), 9u);
    std::set<ZooName> seen;
    for (const auto& zc : cases) {
        EXPECT_EQ(zoo_equivalence_residual(zc.op, zc.density, 32, 1), R(0))
            << zoo_name(zc.op.name);
        seen.insert(zc.op.name);
    }
    EXPECT_EQ(seen.size(), 9u);  // one of each
}

TEST(Zoo, FloatBackendStaysTiny) {
    for (const auto& zc : default_zoo_cases<double>(TruncationPolicy{}))
        EXPECT_LE(zoo_equivalence_residual(zc.op, zc.density, 16, 1), 1e-9)
            << zoo_name(zc.op.name);
}

TEST(Zoo, PoissonForwardSpotValue) {
    R lam = rat(3, 2);
    auto p = build_poisson<R>(lam, TruncationPolicy{});
    auto op = zoo_poisson_forward(lam, p);
    TestFunction<R> f0(0, {R(1), R(2), R(-1), R(1)});
    // lambda f0(x+1) - x f0(x) at x = 2
    EXPECT_EQ(op.apply(f0, 2), lam * R(1) - R(2) * R(-1));
    // substituted function is x f0(x)
    auto f = op.reparam(f0);
    EXPECT_EQ(f(0), R(0));
    EXPECT_EQ(f(2), R(-2));
}

TEST(Zoo, PoissonBackwardSpotValue) {
    R lam = R(2);
    auto p = build_poisson<R>(lam, TruncationPolicy{});
    auto op = zoo_poisson_backward(lam, p);
    TestFunction<R> f(0, {R(1), R(4), R(2)});
    // f(x) - (x/lambda) f(x-1) at x = 2
    EXPECT_EQ(op.apply(f, 2), R(2) - R(2) / lam * R(4));
}

TEST(Zoo, UrnEdgeTakesZeroNumeratorFirst) {
    // at x = n the leading factor n-x kills the term before the division,
    // which otherwise hits a zero denominator when beta = 1
    int64_t n = 5;
    auto p = build_polya<R>(n, R(1), R(1));
    auto op = zoo_urn_forward(n, R(1), R(1), p);
    TestFunction<R> f0(0, {R(1), R(1), R(1), R(1), R(1), R(1)});
    EXPECT_NO_THROW({
        R v = op.apply(f0, n);
        EXPECT_EQ(v, R(-5));  // -x f0(x) at x = 5
    });
    EXPECT_EQ(zoo_equivalence_residual(op, p, 16, 3), R(0));
}

TEST(Zoo, GibbsConstantPotentialReducesToPoisson) {
    // same omega, constant weights: the gibbs closed form IS the standard
    // Poisson operator, applied over the shared truncated window
    R omega = rat(3, 2);
    TruncationPolicy pol;
    auto p = build_gibbs_infinite<R>(omega, pol);
    auto po = build_poisson<R>(omega, pol);
    ASSERT_EQ(p.hi(), po.hi());

    std::vector<R> w(static_cast<std::size_t>(p.hi()) + 1, R(1));
    auto gibbs = zoo_gibbs_forward(w, omega, p);
    auto std_po = zoo_poisson_forward(omega, po);
    std::mt19937_64 gen(7);
    for (int t = 0; t < 8; ++t) {
        auto f0 = random_table<R>(p.lo(), p.hi(), gen);
        for (int64_t x = p.lo(); x < p.hi(); ++x)
            EXPECT_EQ(gibbs.apply(f0, x), std_po.apply(f0, x)) << "x=" << x;
    }
    EXPECT_EQ(total_variation(p, po), R(0));
}

TEST(Zoo, GibbsBackwardRefusesTruncatedSupports) {
    R omega = R(1);
    auto p = build_gibbs_infinite<R>(omega, TruncationPolicy{});
    std::vector<R> w(static_cast<std::size_t>(p.hi()) + 1, R(1));
    EXPECT_THROW(zoo_gibbs_backward(w, omega, p), std::invalid_argument);
}

TEST(Zoo, MismatchedDensityRejected) {
    R lam = R(2);
    auto p = build_poisson<R>(lam, TruncationPolicy{});
    auto other = build_poisson<R>(R(1), TruncationPolicy{});
    auto op = zoo_poisson_forward(lam, p);
    EXPECT_THROW(zoo_equivalence_residual(op, other), std::invalid_argument);
}
