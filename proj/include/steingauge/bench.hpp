#pragma once

// Inequality checks, randomized verification suites, and the matrix-rank
// experiment.  Every check reduces to a single comparison lhs <= rhs and is
// recorded as a BoundCheck.  Exact backends compare the underlying scalars
// with no tolerance; float backends get a small pad widened by the recorded
// truncation bounds.  Hypothesis failures (boundary-class violations,
// infinite information distances) mark a check skipped, never passed.

#include "steingauge/density.hpp"
#include "steingauge/distances.hpp"
#include "steingauge/families.hpp"
#include "steingauge/rank_sampler.hpp"
#include "steingauge/scalar.hpp"
#include "steingauge/stein.hpp"
#include "steingauge/test_function.hpp"
#include "steingauge/zoo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace steingauge {

struct BoundCheck {
    std::string name;
    std::string params;
    double lhs = 0.0;
    double rhs = 0.0;
    double slack = 0.0;             // rhs - lhs
    bool passed = false;
    bool skipped = false;           // hypothesis failure, not a violation
    std::string reason;             // skip reason or trivial-pass note
    double truncation_error = 0.0;  // summed dropped-tail bounds of the inputs
};

namespace detail {

inline double safe_root(double v) { return v > 0.0 ? std::sqrt(v) : 0.0; }

inline double float_pad(double scale, double trunc) {
    return 1e-10 * std::max(1.0, scale) + 64.0 * trunc;
}

template <class S>
bool le_with_pad(const S& a, const S& b, double trunc) {
    if (ScalarTraits<S>::is_exact) return a <= b;
    double bd = ScalarTraits<S>::to_double(b);
    return ScalarTraits<S>::to_double(a) <= bd + float_pad(std::fabs(bd), trunc);
}

// Both sides enter squared so exact backends never leave the scalar field.
template <class S>
BoundCheck finish_squared(BoundCheck c, const S& lhs_sq, const S& rhs_sq) {
    c.lhs = safe_root(ScalarTraits<S>::to_double(lhs_sq));
    c.rhs = safe_root(ScalarTraits<S>::to_double(rhs_sq));
    c.slack = c.rhs - c.lhs;
    c.passed = le_with_pad(lhs_sq, rhs_sq, c.truncation_error);
    return c;
}

template <class S>
std::string pair_params(const DiscreteDensity<S>& p, const DiscreteDensity<S>& q) {
    return p.description() + " | " + q.description();
}

}  // namespace detail

// E_p[T_p f]; exactly zero whenever f lies in the direction's boundary class.
template <class S>
S operator_mean(const DiscreteDensity<S>& p, Direction dir, const TestFunction<S>& f) {
    S acc(0);
    for (int64_t x = p.lo(); x <= p.hi(); ++x) acc += p.mass(x) * stein_operator(p, dir, f, x);
    return acc;
}

// ---------------------------------------------------------------------------
// Seeded random inputs.  All draws go through mt19937_64 so a seed pins the
// whole suite on every platform.

// Random pmf on [lo, lo+atoms-1]: a composition of 10^4 into `atoms` positive
// parts drawn as distinct cut points, exact on the rational backend.
template <class S>
DiscreteDensity<S> random_pmf(int64_t lo, int64_t atoms, std::mt19937_64& gen) {
    if (atoms < 2 || atoms > 256) throw std::invalid_argument("random_pmf: need 2..256 atoms");
    constexpr int64_t kGrain = 10000;
    std::vector<int64_t> cuts;
    cuts.reserve(static_cast<std::size_t>(atoms) + 1);
    while (cuts.size() + 1 < static_cast<std::size_t>(atoms)) {
        int64_t c = 1 + static_cast<int64_t>(gen() % (kGrain - 1));
        if (std::find(cuts.begin(), cuts.end(), c) == cuts.end()) cuts.push_back(c);
    }
    cuts.push_back(0);
    cuts.push_back(kGrain);
    std::sort(cuts.begin(), cuts.end());
    std::vector<S> pmf;
    pmf.reserve(static_cast<std::size_t>(atoms));
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
        pmf.push_back(ScalarTraits<S>::from_ratio(cuts[i + 1] - cuts[i], kGrain));
    return build_explicit<S>(lo, std::move(pmf));
}

// Random member of the boundary class F^eta(p): arbitrary values over the
// window with the direction's edge pinned to zero.
template <class S>
TestFunction<S> random_member_function(const DiscreteDensity<S>& p, Direction dir,
                                       std::mt19937_64& gen) {
    std::vector<S> v;
    v.reserve(static_cast<std::size_t>(p.hi() - p.lo() + 1));
    for (int64_t x = p.lo(); x <= p.hi(); ++x)
        v.push_back(ScalarTraits<S>::from_ratio(static_cast<int64_t>(gen() % 2001) - 1000, 1000));
    std::size_t edge = dir == Direction::forward ? 0 : v.size() - 1;
    v[edge] = S(0);
    return TestFunction<S>(p.lo(), std::move(v));
}

template <class S>
TestFunction<S> random_test_function(int64_t lo, int64_t hi, std::mt19937_64& gen) {
    std::vector<S> v;
    v.reserve(static_cast<std::size_t>(hi - lo + 1));
    for (int64_t x = lo; x <= hi; ++x)
        v.push_back(ScalarTraits<S>::from_ratio(static_cast<int64_t>(gen() % 2001) - 1000, 1000));
    return TestFunction<S>(lo, std::move(v));
}

// ---------------------------------------------------------------------------
// Individual inequality checks.

// 2 d_TV <= sqrt(2 d_KL); infinite relative entropy makes the bound trivial.
template <class S>
BoundCheck check_classic_pinsker(const DiscreteDensity<S>& p, const DiscreteDensity<S>& q) {
    BoundCheck c;
    c.name = "classic_pinsker";
    c.params = detail::pair_params(p, q);
    c.truncation_error = p.dropped_tail() + q.dropped_tail();
    Extended<double> kl = kl_divergence(q, p);
    c.lhs = 2.0 * ScalarTraits<S>::to_double(total_variation(p, q));
    if (kl.is_inf) {
        c.rhs = std::numeric_limits<double>::infinity();
        c.slack = c.rhs;
        c.passed = true;
        c.reason = std::string("relative entropy infinite (") + inf_reason_name(kl.reason) +
                   "); bound trivial";
        return c;
    }
    c.rhs = std::sqrt(2.0 * kl.value);
    c.slack = c.rhs - c.lhs;
    // relative entropy is float-valued on every backend, so the comparison
    // carries a pad even over rationals
    c.passed = c.lhs <= c.rhs + detail::float_pad(c.rhs, c.truncation_error) + 1e-12;
    return c;
}

// d_TV^2 <= kappa^2 J_gen with the backward score.
template <class S>
BoundCheck check_backward_bound(const DiscreteDensity<S>& p, const DiscreteDensity<S>& q) {
    BoundCheck c;
    c.name = "backward_tv_bound";
    c.params = detail::pair_params(p, q);
    c.truncation_error = p.dropped_tail() + q.dropped_tail();
    Extended<S> j = j_gen(p, q);
    if (j.is_inf) {
        c.skipped = true;
        c.reason = std::string("information distance infinite (") + inf_reason_name(j.reason) + ")";
        return c;
    }
    try {
        KappaSet<S> k = kappa_tv(p, q, Direction::backward);
        S tv = total_variation(p, q);
        return detail::finish_squared(std::move(c), tv * tv, k.exact_sq * j.value);
    } catch (const AssumptionError& e) {
        c.skipped = true;
        c.reason = e.what();
        return c;
    }
}

// d_TV^2 <= kappa^2 K_gen with the scaled forward score; stays applicable
// when q stops strictly inside the support of p.
template <class S>
BoundCheck check_forward_bound(const DiscreteDensity<S>& p, const DiscreteDensity<S>& q) {
    BoundCheck c;
    c.name = "forward_tv_bound";
    c.params = detail::pair_params(p, q);
    c.truncation_error = p.dropped_tail() + q.dropped_tail();
    try {
        KappaSet<S> k = kappa_tv(p, q, Direction::forward);
        S tv = total_variation(p, q);
        return detail::finish_squared(std::move(c), tv * tv, k.exact_sq * k_gen(p, q));
    } catch (const AssumptionError& e) {
        c.skipped = true;
        c.reason = e.what();
        return c;
    }
}

template <class S>
BoundCheck check_backward_kolmogorov(const DiscreteDensity<S>& p, const DiscreteDensity<S>& q) {
    BoundCheck c;
    c.name = "backward_kolmogorov_bound";
    c.params = detail::pair_params(p, q);
    c.truncation_error = p.dropped_tail() + q.dropped_tail();
    Extended<S> j = j_gen(p, q);
    if (j.is_inf) {
        c.skipped = true;
        c.reason = std::string("information distance infinite (") + inf_reason_name(j.reason) + ")";
        return c;
    }
    try {
        KappaSet<S> k = kappa_kolmogorov(p, q, Direction::backward);
        S kol = kolmogorov(p, q);
        return detail::finish_squared(std::move(c), kol * kol, k.exact_sq * j.value);
    } catch (const AssumptionError& e) {
        c.skipped = true;
        c.reason = e.what();
        return c;
    }
}

template <class S>
BoundCheck check_forward_kolmogorov(const DiscreteDensity<S>& p, const DiscreteDensity<S>& q) {
    BoundCheck c;
    c.name = "forward_kolmogorov_bound";
    c.params = detail::pair_params(p, q);
    c.truncation_error = p.dropped_tail() + q.dropped_tail();
    try {
        KappaSet<S> k = kappa_kolmogorov(p, q, Direction::forward);
        S kol = kolmogorov(p, q);
        return detail::finish_squared(std::move(c), kol * kol, k.exact_sq * k_gen(p, q));
    } catch (const AssumptionError& e) {
        c.skipped = true;
        c.reason = e.what();
        return c;
    }
}

// ---------------------------------------------------------------------------
// Poisson-target identities.

// lambda^2 J_gen(Po(lambda), q) decomposed over the materialized window of q:
//   sigma^2 + (mu - lambda)^2 - 2 lambda + lambda^2 I(q)
//     + 2 lambda q(N) (N + 1 - lambda),        N = top of the window.
// The identity is exact for any q; dropping the mean-defect and edge terms
// gives the display form valid for mean-lambda laws with negligible top mass.
template <class S>
struct PoissonDecomposition {
    bool j_infinite = false;
    S lambda{};
    S lambda_sq_j{};     // lambda^2 J_gen, finite branch only
    S mean{}, variance{}, info{};
    S mean_defect_sq{};  // (mean - lambda)^2
    S edge_term{};       // 2 lambda q(N) (N + 1 - lambda)

    S exact_rhs() const {
        return variance + mean_defect_sq - S(2) * lambda + lambda * lambda * info + edge_term;
    }
    S display_rhs() const { return variance - S(2) * lambda + lambda * lambda * info; }
};

template <class S>
PoissonDecomposition<S> poisson_decomposition(const S& lambda, const DiscreteDensity<S>& q,
                                              const TruncationPolicy& pol = {}) {
    auto po = detail::poisson_covering(lambda, q, pol);
    PoissonDecomposition<S> d;
    d.lambda = lambda;
    Extended<S> j = j_gen(po, q);
    d.j_infinite = j.is_inf;
    if (!j.is_inf) d.lambda_sq_j = lambda * lambda * j.value;
    Moments<S> m = moments(q);
    d.mean = m.mean;
    d.variance = m.variance;
    d.info = i_functional(q).value;
    S defect = m.mean - lambda;
    d.mean_defect_sq = defect * defect;
    int64_t top = q.hi();
    d.edge_term = S(2) * lambda * q.mass(top) * (ScalarTraits<S>::from_int(top + 1) - lambda);
    return d;
}

// Exact decomposition residual; zero on the rational backend.
template <class S>
BoundCheck check_poisson_decomposition_exact(const S& lambda, const DiscreteDensity<S>& q,
                                             const TruncationPolicy& pol = {}) {
    BoundCheck c;
    c.name = "poisson_decomposition_exact";
    c.params = "lambda=" + std::to_string(ScalarTraits<S>::to_double(lambda)) + " | " +
               q.description();
    c.truncation_error = q.dropped_tail();
    PoissonDecomposition<S> d = poisson_decomposition(lambda, q, pol);
    if (d.j_infinite) {
        c.skipped = true;
        c.reason = "information distance infinite";
        return c;
    }
    c.lhs = std::fabs(ScalarTraits<S>::to_double(d.lambda_sq_j - d.exact_rhs()));
    double lam = ScalarTraits<S>::to_double(lambda);
    double top = static_cast<double>(q.hi());
    c.rhs = ScalarTraits<S>::is_exact
                ? 0.0
                : 1e-12 * (1.0 + lam * lam) * (1.0 + top * top) + 64.0 * c.truncation_error;
    c.slack = c.rhs - c.lhs;
    c.passed = c.lhs <= c.rhs;
    return c;
}

// Display-form residual |J_gen - (sigma^2/lambda^2 - 2/lambda + I)| for
// mean-matched q; the dropped terms must be negligible for this to hold.
template <class S>
BoundCheck check_poisson_decomposition(const S& lambda, const DiscreteDensity<S>& q,
                                       const TruncationPolicy& pol = {}) {
    BoundCheck c;
    c.name = "poisson_decomposition";
    c.params = "lambda=" + std::to_string(ScalarTraits<S>::to_double(lambda)) + " | " +
               q.description();
    c.truncation_error = q.dropped_tail();
    PoissonDecomposition<S> d = poisson_decomposition(lambda, q, pol);
    if (d.j_infinite) {
        c.skipped = true;
        c.reason = "information distance infinite";
        return c;
    }
    double lam = ScalarTraits<S>::to_double(lambda);
    double defect = std::fabs(ScalarTraits<S>::to_double(d.mean) - lam);
    if (defect > 1e-6 * (1.0 + lam)) {
        c.skipped = true;
        c.reason = "mean not matched to lambda (defect " + std::to_string(defect) + ")";
        return c;
    }
    S lam_sq = lambda * lambda;
    c.lhs = std::fabs(ScalarTraits<S>::to_double(d.lambda_sq_j / lam_sq - d.display_rhs() / lam_sq));
    c.rhs = 1e-8;
    c.slack = c.rhs - c.lhs;
    c.passed = c.lhs <= c.rhs;
    return c;
}

// |I(Po(lambda)) - 1/lambda| small over the materialized window.
template <class S>
BoundCheck check_poisson_information_value(const S& lambda, const TruncationPolicy& pol = {}) {
    BoundCheck c;
    c.name = "poisson_information_value";
    c.params = "lambda=" + std::to_string(ScalarTraits<S>::to_double(lambda));
    auto po = build_poisson<S>(lambda, pol);
    c.truncation_error = po.dropped_tail();
    S info = i_functional(po).value;
    c.lhs = std::fabs(ScalarTraits<S>::to_double(info - S(1) / lambda));
    c.rhs = 1e-9;
    c.slack = c.rhs - c.lhs;
    c.passed = c.lhs <= c.rhs;
    return c;
}

// d_TV(Po(lambda), q) <= min(1, sqrt(2/(e lambda))) sqrt(radicand) with the
// radicand equal to lambda^2 J_gen through the exact decomposition.  A tiny
// negative float radicand is clamped to zero when it fits the truncation
// budget; beyond the budget the check fails.
template <class S>
BoundCheck check_poisson_information_bound(const S& lambda, const DiscreteDensity<S>& q,
                                           const TruncationPolicy& pol = {}) {
    BoundCheck c;
    c.name = "poisson_information_bound";
    c.params = "lambda=" + std::to_string(ScalarTraits<S>::to_double(lambda)) + " | " +
               q.description();
    auto po = detail::poisson_covering(lambda, q, pol);
    c.truncation_error = po.dropped_tail() + q.dropped_tail();
    Extended<S> j = j_gen(po, q);
    if (j.is_inf) {
        c.skipped = true;
        c.reason = std::string("information distance infinite (") + inf_reason_name(j.reason) + ")";
        return c;
    }
    try {
        TestFunction<S> h = tv_test_function(po, q);
        SteinSolution<S> sol = solve_stein(po, Direction::backward, h);
        if (!class_membership(po, Direction::backward, sol.f) ||
            !class_membership(q, Direction::backward, sol.f)) {
            c.skipped = true;
            c.reason = "solution leaves a boundary class";
            return c;
        }
    } catch (const std::domain_error& e) {
        c.skipped = true;
        c.reason = e.what();
        return c;
    }
    PoissonDecomposition<S> d = poisson_decomposition(lambda, q, pol);
    double lam = ScalarTraits<S>::to_double(lambda);
    double rad = ScalarTraits<S>::to_double(d.exact_rhs());
    if (rad < 0.0) {
        double top = static_cast<double>(q.hi());
        double budget =
            1e3 * (c.truncation_error + 1e-16) * (1.0 + lam * lam) * (1.0 + top * top);
        if (-rad > budget) {
            c.lhs = -rad;
            c.rhs = budget;
            c.slack = c.rhs - c.lhs;
            c.reason = "negative radicand beyond truncation budget";
            return c;
        }
        rad = 0.0;
    }
    c.lhs = ScalarTraits<S>::to_double(total_variation(po, q));
    c.rhs = erickson_factor(lam) * detail::safe_root(rad);
    c.slack = c.rhs - c.lhs;
    c.passed = c.lhs <= c.rhs + detail::float_pad(c.rhs, c.truncation_error);
    return c;
}

// Weighted sup of the Stein solution for the extremal total-variation test
// function against the lambda-uniform estimate.
template <class S>
BoundCheck check_poisson_weighted_sup(const S& lambda, const DiscreteDensity<S>& q, Direction dir,
                                      const TruncationPolicy& pol = {}) {
    BoundCheck c;
    c.name = std::string("poisson_weighted_sup_") + direction_name(dir);
    c.params = "lambda=" + std::to_string(ScalarTraits<S>::to_double(lambda)) + " | " +
               q.description();
    auto po = detail::poisson_covering(lambda, q, pol);
    c.truncation_error = po.dropped_tail() + q.dropped_tail();
    TestFunction<S> h = tv_test_function(po, q);
    SteinSolution<S> sol = solve_stein(po, dir, h);
    double lam = ScalarTraits<S>::to_double(lambda);
    c.lhs = ScalarTraits<S>::to_double(sol.kappa_weight_sup);
    c.rhs = lam * erickson_factor(lam) * detail::lattice_range(h);
    c.slack = c.rhs - c.lhs;
    c.passed = c.lhs <= c.rhs + 1e-9 + 64.0 * c.truncation_error;
    return c;
}

// Same estimate quantified over every centered threshold indicator.
template <class S>
BoundCheck check_poisson_weighted_sup_indicator(const S& lambda, Direction dir,
                                                const TruncationPolicy& pol = {}) {
    BoundCheck c;
    c.name = std::string("poisson_weighted_sup_indicator_") + direction_name(dir);
    c.params = "lambda=" + std::to_string(ScalarTraits<S>::to_double(lambda));
    auto po = build_poisson<S>(lambda, pol);
    c.truncation_error = po.dropped_tail();
    double worst = 0.0;
    int64_t arg = po.lo();
    for (int64_t z = po.lo(); z < po.hi(); ++z) {
        TestFunction<S> lz = TestFunction<S>::indicator_upto(po.lo(), z);
        SteinSolution<S> sol = solve_stein(po, dir, lz);
        double w = ScalarTraits<S>::to_double(sol.kappa_weight_sup);
        if (w > worst) {
            worst = w;
            arg = z;
        }
    }
    double lam = ScalarTraits<S>::to_double(lambda);
    c.lhs = worst;
    c.rhs = lam * erickson_factor(lam);
    c.slack = c.rhs - c.lhs;
    c.passed = c.lhs <= c.rhs + 1e-9 + 64.0 * c.truncation_error;
    c.params += " worst z=" + std::to_string(arg);
    return c;
}

inline BoundCheck check_poisson_constant_cap(double lambda) {
    BoundCheck c;
    c.name = "poisson_constant_cap";
    c.params = "lambda=" + std::to_string(lambda);
    c.lhs = poisson_tv_constant(lambda);
    c.rhs = std::sqrt(2.0 / std::exp(1.0));
    c.slack = c.rhs - c.lhs;
    c.passed = c.lhs <= c.rhs + 1e-12 && c.lhs < std::sqrt(2.0);
    return c;
}

inline BoundCheck check_poisson_constant_saturation(double lambda) {
    BoundCheck c;
    c.name = "poisson_constant_saturation";
    c.params = "lambda=" + std::to_string(lambda);
    if (lambda < 2.0 / std::exp(1.0)) {
        c.skipped = true;
        c.reason = "below the saturation threshold 2/e";
        return c;
    }
    c.lhs = std::fabs(poisson_tv_constant(lambda) - std::sqrt(2.0 / std::exp(1.0)));
    c.rhs = 1e-12;
    c.slack = c.rhs - c.lhs;
    c.passed = c.lhs <= c.rhs;
    return c;
}

// Both total-variation bounds from the scaled information distance for a
// mean-lambda law q: the sharp constant sqrt(lambda) min(1, sqrt(2/(e
// lambda))) against the sqrt(2) constant of the Poincare route. The sharp
// check also asserts its rhs never exceeds the reference rhs.
template <class S>
std::pair<BoundCheck, BoundCheck> check_poisson_constant_comparison(
    const S& lambda, const DiscreteDensity<S>& q, const TruncationPolicy& pol = {}) {
    BoundCheck sharp, ref;
    sharp.name = "poisson_scaled_bound_sharp";
    ref.name = "poisson_scaled_bound_reference";
    double lam = ScalarTraits<S>::to_double(lambda);
    std::string params = "lambda=" + std::to_string(lam) + " | " + q.description();
    sharp.params = ref.params = params;
    auto po = detail::poisson_covering(lambda, q, pol);
    sharp.truncation_error = ref.truncation_error = po.dropped_tail() + q.dropped_tail();

    double defect = std::fabs(ScalarTraits<S>::to_double(moments(q).mean) - lam);
    if (defect > 1e-6 * (1.0 + lam)) {
        sharp.skipped = ref.skipped = true;
        sharp.reason = ref.reason = "mean not matched to lambda";
        return {sharp, ref};
    }
    double tv = ScalarTraits<S>::to_double(total_variation(po, q));
    double root = detail::safe_root(ScalarTraits<S>::to_double(k_scaled(lambda, q, pol)));
    sharp.lhs = ref.lhs = tv;
    sharp.rhs = poisson_tv_constant(lam) * root;
    ref.rhs = std::sqrt(2.0) * root;
    sharp.slack = sharp.rhs - sharp.lhs;
    ref.slack = ref.rhs - ref.lhs;
    double pad = detail::float_pad(ref.rhs, sharp.truncation_error);
    sharp.passed = tv <= sharp.rhs + pad && sharp.rhs <= ref.rhs + 1e-12;
    ref.passed = tv <= ref.rhs + pad;
    return {sharp, ref};
}

// ---------------------------------------------------------------------------
// Matrix-rank experiment: the corank laws over F_theta, the inequality chain
//   d_TV <= wsup theta^{-n} E[theta^Q]
//        <= (1/theta^2 + 1/theta^3) theta^{1-n} E[theta^Q]
//        <= 2 (1 + 1/theta) / theta^{n+1} <= 3 / theta^{n+1},
// the moment identity E[theta^Q] = 2 - theta^{-n}, and a seeded Monte-Carlo
// cross-check of the finite-n law.

struct RankLink {
    int64_t n = 0;
    double tv = 0.0;
    double quadratic = 0.0;  // kappa * sqrt(K_gen), Cauchy-Schwarz route
    double weighted = 0.0;   // measured sup-weight route
    double lemma = 0.0;      // sup-weight replaced by (1/theta^2 + 1/theta^3)
    double cap = 0.0;        // 2 (1 + 1/theta) / theta^{n+1}
    double bound = 0.0;      // 3 / theta^{n+1}
    double moment = 0.0;
    double moment_claim = 0.0;
    bool moment_exact = false;
    bool tv_le_weighted = false;
    bool weighted_le_lemma = false;
    bool lemma_le_cap = false;
    bool cap_le_bound = false;
    bool tv_le_quadratic = false;
    bool tv_le_bound = false;

    bool links_hold() const {
        return moment_exact && tv_le_weighted && weighted_le_lemma && lemma_le_cap &&
               cap_le_bound && tv_le_quadratic && tv_le_bound;
    }
};

struct RankExperiment {
    int64_t theta = 0;
    std::vector<RankLink> links;
    int64_t mc_n = 0;
    int64_t mc_samples = 0;  // 0 when the Monte-Carlo pass was not run
    std::uint64_t mc_seed = 0;
    double mc_tv = 0.0;
};

template <class S>
RankExperiment run_rank_experiment(int64_t theta, int64_t n_max, int64_t mc_n, int64_t mc_samples,
                                   std::uint64_t seed, const TruncationPolicy& pol = {}) {
    if (n_max < 1) throw std::invalid_argument("rank experiment: need n_max >= 1");
    TruncationPolicy wide = pol;
    wide.window = std::pair<int64_t, int64_t>{0, n_max + 4};
    auto q_inf = build_rank_limit<S>(theta, wide);
    const S th = ScalarTraits<S>::from_int(theta);
    const double trunc = q_inf.dropped_tail();

    RankExperiment ex;
    ex.theta = theta;
    for (int64_t n = 1; n <= n_max; ++n) {
        auto q_n = build_rank_finite<S>(theta, n);
        RankLink lk;
        lk.n = n;

        S tv = total_variation(q_inf, q_n);
        TestFunction<S> h = tv_test_function(q_inf, q_n);
        SteinSolution<S> sol = solve_stein(q_inf, Direction::forward, h);
        S kap_sq = detail::kappa_square(q_inf, q_n, Direction::forward, sol.f);
        S kg = k_gen(q_inf, q_n);

        S moment(0);
        for (int64_t x = q_n.lo(); x <= q_n.hi(); ++x) moment += q_n.mass(x) * pow_int(th, x);
        S claim = S(2) - S(1) / pow_int(th, n);
        S th_mn = S(1) / pow_int(th, n);
        S weighted = sol.kappa_weight_sup * th_mn * moment;
        S lemma = (S(1) / (th * th) + S(1) / (th * th * th)) * th * th_mn * moment;
        S cap = S(2) * (S(1) + S(1) / th) / pow_int(th, n + 1);
        S bound = S(3) / pow_int(th, n + 1);

        lk.tv = ScalarTraits<S>::to_double(tv);
        lk.quadratic = detail::safe_root(ScalarTraits<S>::to_double(kap_sq * kg));
        lk.weighted = ScalarTraits<S>::to_double(weighted);
        lk.lemma = ScalarTraits<S>::to_double(lemma);
        lk.cap = ScalarTraits<S>::to_double(cap);
        lk.bound = ScalarTraits<S>::to_double(bound);
        lk.moment = ScalarTraits<S>::to_double(moment);
        lk.moment_claim = ScalarTraits<S>::to_double(claim);
        lk.moment_exact = ScalarTraits<S>::is_exact
                              ? moment == claim
                              : std::fabs(lk.moment - lk.moment_claim) <= 1e-12;
        lk.tv_le_weighted = detail::le_with_pad(tv, weighted, trunc);
        lk.weighted_le_lemma = detail::le_with_pad(weighted, lemma, trunc);
        lk.lemma_le_cap = detail::le_with_pad(lemma, cap, trunc);
        lk.cap_le_bound = detail::le_with_pad(cap, bound, trunc);
        lk.tv_le_quadratic = detail::le_with_pad(tv * tv, kap_sq * kg, trunc);
        lk.tv_le_bound = detail::le_with_pad(tv, bound, trunc);
        ex.links.push_back(lk);
    }

    if (mc_samples > 0) {
        ex.mc_n = mc_n;
        ex.mc_samples = mc_samples;
        ex.mc_seed = seed;
        EmpiricalPmf e = rank_sample(theta, static_cast<int>(mc_n), mc_samples, seed);
        ex.mc_tv = empirical_tv(e, build_rank_finite<S>(theta, mc_n));
    }
    return ex;
}

// Weighted sup of threshold-indicator solutions over the limit corank law:
// sup_z || f(x+1) / (theta^{x+1} - 1)^2 || <= 1/theta^2 + 1/theta^3.
template <class S>
BoundCheck check_rank_weighted_sup(int64_t theta, const TruncationPolicy& pol = {}) {
    BoundCheck c;
    c.name = "rank_weighted_sup";
    c.params = "theta=" + std::to_string(theta);
    TruncationPolicy wide = pol;
    wide.window = std::pair<int64_t, int64_t>{0, 12};
    auto q_inf = build_rank_limit<S>(theta, wide);
    c.truncation_error = q_inf.dropped_tail();
    const S th = ScalarTraits<S>::from_int(theta);
    S worst(0);
    int64_t arg = 0;
    for (int64_t z = q_inf.lo(); z < q_inf.hi(); ++z) {
        TestFunction<S> lz = TestFunction<S>::indicator_upto(q_inf.lo(), z);
        SteinSolution<S> sol = solve_stein(q_inf, Direction::forward, lz);
        S w = sol.kappa_weight_sup / th;
        if (w > worst) {
            worst = w;
            arg = z;
        }
    }
    S claim = S(1) / (th * th) + S(1) / (th * th * th);
    c.lhs = ScalarTraits<S>::to_double(worst);
    c.rhs = ScalarTraits<S>::to_double(claim);
    c.slack = c.rhs - c.lhs;
    c.passed = detail::le_with_pad(worst, claim, c.truncation_error);
    c.params += " worst z=" + std::to_string(arg);
    return c;
}

// ---------------------------------------------------------------------------
// Suites.

enum class SuiteName {
    classic_pinsker,
    backward,
    forward,
    poisson,
    rank,
    zoo,
    characterization
};

inline const char* suite_name(SuiteName s) {
    switch (s) {
        case SuiteName::classic_pinsker: return "classic_pinsker";
        case SuiteName::backward: return "backward";
        case SuiteName::forward: return "forward";
        case SuiteName::poisson: return "poisson";
        case SuiteName::rank: return "rank";
        case SuiteName::zoo: return "zoo";
        case SuiteName::characterization: return "characterization";
    }
    return "?";
}

inline std::optional<SuiteName> parse_suite(const std::string& s) {
    for (SuiteName n : {SuiteName::classic_pinsker, SuiteName::backward, SuiteName::forward,
                        SuiteName::poisson, SuiteName::rank, SuiteName::zoo,
                        SuiteName::characterization})
        if (s == suite_name(n)) return n;
    return std::nullopt;
}

struct SuiteConfig {
    int pairs = 200;
    int64_t max_atoms = 12;
    std::uint64_t seed = 0x5ba1ced1;
    std::vector<double> lambdas{0.5, 1.0, 2.0, 5.0};
    std::vector<int64_t> thetas{2, 3, 5};
    int64_t rank_n_lo = 1;
    int64_t rank_n_max = 8;
    int64_t mc_n = 2;
    int64_t mc_samples = 0;  // 0 disables the Monte-Carlo cross-check rows
    TruncationPolicy truncation;
};

struct SuiteReport {
    std::string suite;
    std::string backend;
    std::uint64_t seed = 0;
    std::vector<BoundCheck> checks;
    int total = 0;
    int passed = 0;
    int failed = 0;
    int skipped = 0;
};

namespace detail {

inline void tally(SuiteReport& r) {
    r.total = static_cast<int>(r.checks.size());
    r.passed = r.failed = r.skipped = 0;
    for (const BoundCheck& c : r.checks) {
        if (c.skipped)
            ++r.skipped;
        else if (c.passed)
            ++r.passed;
        else
            ++r.failed;
    }
}

// Shared-support random pair on a window of 3..max_atoms points; the shared
// endpoints put Stein solutions in both boundary classes for both
// directions, so no check in the grid is skipped.
template <class S>
std::pair<DiscreteDensity<S>, DiscreteDensity<S>> random_pair(int64_t max_atoms,
                                                              std::mt19937_64& gen) {
    int64_t atoms = 3 + static_cast<int64_t>(gen() % static_cast<std::uint64_t>(max_atoms - 2));
    int64_t lo = static_cast<int64_t>(gen() % 7) - 3;
    auto p = random_pmf<S>(lo, atoms, gen);
    auto q = random_pmf<S>(lo, atoms, gen);
    return {std::move(p), std::move(q)};
}

// Truncated Poisson pair with nested windows, q inside p.
template <class S>
std::pair<DiscreteDensity<S>, DiscreteDensity<S>> poisson_pair(const SuiteConfig& cfg,
                                                               std::mt19937_64& gen) {
    double lq = cfg.lambdas[gen() % cfg.lambdas.size()];
    double lp = cfg.lambdas[gen() % cfg.lambdas.size()];
    auto q = build_poisson<S>(ScalarTraits<S>::from_double(lq), cfg.truncation);
    auto p = detail::poisson_covering(ScalarTraits<S>::from_double(lp), q, cfg.truncation);
    return {std::move(p), std::move(q)};
}

template <class S>
SuiteReport suite_classic(const SuiteConfig& cfg) {
    SuiteReport r;
    std::mt19937_64 gen(cfg.seed);
    auto spot_p = build_explicit<S>(0, {ScalarTraits<S>::from_ratio(1, 2),
                                        ScalarTraits<S>::from_ratio(1, 2)});
    auto spot_q = build_explicit<S>(0, {ScalarTraits<S>::from_ratio(1, 4),
                                        ScalarTraits<S>::from_ratio(3, 4)});
    r.checks.push_back(check_classic_pinsker(spot_p, spot_q));
    for (int i = 0; i < cfg.pairs; ++i) {
        auto [p, q] = random_pair<S>(cfg.max_atoms, gen);
        r.checks.push_back(check_classic_pinsker(p, q));
    }
    return r;
}

template <class S>
SuiteReport suite_directional(Direction dir, const SuiteConfig& cfg) {
    SuiteReport r;
    std::mt19937_64 gen(cfg.seed);
    for (int i = 0; i < cfg.pairs; ++i) {
        if (i % 8 == 7) {
            auto [p, q] = poisson_pair<S>(cfg, gen);
            r.checks.push_back(dir == Direction::backward ? check_backward_bound(p, q)
                                                          : check_forward_bound(p, q));
            continue;
        }
        if (dir == Direction::forward && i % 8 == 3) {
            // bounded q strictly inside a Poisson target: the regime the
            // scaled score exists for
            int64_t n = 3 + static_cast<int64_t>(gen() % 8);
            int64_t num = 1 + static_cast<int64_t>(gen() % 8);
            auto q = build_binomial<S>(n, ScalarTraits<S>::from_ratio(num, 10));
            double lam = cfg.lambdas[gen() % cfg.lambdas.size()];
            auto p = detail::poisson_covering(ScalarTraits<S>::from_double(lam), q,
                                              cfg.truncation);
            r.checks.push_back(check_forward_bound(p, q));
            continue;
        }
        auto [p, q] = random_pair<S>(cfg.max_atoms, gen);
        r.checks.push_back(dir == Direction::backward ? check_backward_bound(p, q)
                                                      : check_forward_bound(p, q));
        if (i % 4 == 1)
            r.checks.push_back(dir == Direction::backward ? check_backward_kolmogorov(p, q)
                                                          : check_forward_kolmogorov(p, q));
    }
    return r;
}

template <class S>
SuiteReport suite_poisson(const SuiteConfig& cfg) {
    SuiteReport r;
    for (double lam : cfg.lambdas) {
        S lamS = ScalarTraits<S>::from_double(lam);
        r.checks.push_back(check_poisson_information_value(lamS, cfg.truncation));
        r.checks.push_back(check_poisson_constant_cap(lam));
        r.checks.push_back(check_poisson_constant_saturation(lam));
        r.checks.push_back(
            check_poisson_weighted_sup_indicator(lamS, Direction::forward, cfg.truncation));
        r.checks.push_back(
            check_poisson_weighted_sup_indicator(lamS, Direction::backward, cfg.truncation));

        auto self = build_poisson<S>(lamS, cfg.truncation);
        auto matched = build_binomial<S>(40, lamS / ScalarTraits<S>::from_int(40));
        for (const auto* q : {&self, &matched}) {
            r.checks.push_back(check_poisson_decomposition_exact(lamS, *q, cfg.truncation));
            r.checks.push_back(check_poisson_decomposition(lamS, *q, cfg.truncation));
            r.checks.push_back(check_poisson_information_bound(lamS, *q, cfg.truncation));
            r.checks.push_back(
                check_poisson_weighted_sup(lamS, *q, Direction::forward, cfg.truncation));
            r.checks.push_back(
                check_poisson_weighted_sup(lamS, *q, Direction::backward, cfg.truncation));
            auto [sharp, ref] = check_poisson_constant_comparison(lamS, *q, cfg.truncation);
            r.checks.push_back(std::move(sharp));
            r.checks.push_back(std::move(ref));
        }
    }
    // a genuinely bounded q with visible top mass must flag the backward
    // information distance infinite
    {
        S two = ScalarTraits<S>::from_int(2);
        auto q = build_binomial<S>(8, ScalarTraits<S>::from_ratio(1, 4));
        auto po = detail::poisson_covering(two, q, cfg.truncation);
        BoundCheck c;
        c.name = "poisson_bounded_support_flag";
        c.params = detail::pair_params(po, q);
        Extended<S> j = j_gen(po, q);
        c.passed = j.is_inf && j.reason == InfReason::support_mismatch;
        c.reason = c.passed ? "flagged infinite as required" : "expected infinite distance";
        r.checks.push_back(std::move(c));
    }
    return r;
}

// Names the first broken piece of a chain, empty when everything holds.
inline std::string rank_failure_reason(const RankLink& lk) {
    if (!lk.moment_exact) return "moment identity off";
    if (!lk.tv_le_weighted) return "tv above measured weighted route";
    if (!lk.weighted_le_lemma) return "measured weight above indicator lemma weight";
    if (!lk.lemma_le_cap) return "lemma route above closed-form cap";
    if (!lk.cap_le_bound) return "cap above final bound";
    if (!lk.tv_le_quadratic) return "tv above quadratic route";
    if (!lk.tv_le_bound) return "tv above final bound";
    return "";
}

// One check per (theta, n): lhs/rhs show the end-to-end bound, but passing
// requires every intermediate link and the moment identity too, so a chain
// regression cannot hide behind a slack final bound. The link values stay
// available through run_rank_experiment.
template <class S>
SuiteReport suite_rank(const SuiteConfig& cfg) {
    SuiteReport r;
    for (int64_t theta : cfg.thetas) {
        RankExperiment ex = run_rank_experiment<S>(theta, cfg.rank_n_max, cfg.mc_n,
                                                   cfg.mc_samples, cfg.seed, cfg.truncation);
        for (const RankLink& lk : ex.links) {
            if (lk.n < cfg.rank_n_lo) continue;
            BoundCheck c;
            c.name = "rank_tv_bound";
            c.params = "theta=" + std::to_string(theta) + ",n=" + std::to_string(lk.n);
            c.lhs = lk.tv;
            c.rhs = lk.bound;
            c.slack = c.rhs - c.lhs;
            c.passed = lk.links_hold();
            c.reason = rank_failure_reason(lk);
            r.checks.push_back(std::move(c));
        }
        if (cfg.mc_samples > 0) {
            BoundCheck c;
            c.name = "rank_monte_carlo";
            c.params = "theta=" + std::to_string(theta) + ",n=" + std::to_string(ex.mc_n) +
                       ",samples=" + std::to_string(ex.mc_samples);
            c.lhs = ex.mc_tv;
            c.rhs = 0.02;
            c.slack = c.rhs - c.lhs;
            c.passed = c.lhs <= c.rhs;
            r.checks.push_back(std::move(c));
        }
    }
    return r;
}

template <class S>
SuiteReport suite_zoo(const SuiteConfig& cfg) {
    SuiteReport r;
    for (const ZooCase<S>& zc : default_zoo_cases<S>(cfg.truncation)) {
        BoundCheck c;
        c.name = "zoo_equivalence";
        c.params = std::string(zoo_name(zc.op.name)) + " | " + zc.density.description();
        c.truncation_error = zc.density.dropped_tail();
        S res = zoo_equivalence_residual(zc.op, zc.density, 32, cfg.seed);
        c.lhs = ScalarTraits<S>::to_double(res);
        c.rhs = ScalarTraits<S>::is_exact ? 0.0 : 1e-9 + 64.0 * c.truncation_error;
        c.slack = c.rhs - c.lhs;
        c.passed = ScalarTraits<S>::is_exact ? res == S(0) : c.lhs <= c.rhs;
        r.checks.push_back(std::move(c));
    }
    {
        // constant-potential Gibbs over all of N is the Poisson law
        S om = ScalarTraits<S>::from_ratio(3, 2);
        auto g = build_gibbs_infinite<S>(om, cfg.truncation);
        auto po = build_poisson<S>(om, cfg.truncation);
        BoundCheck c;
        c.name = "zoo_gibbs_poisson_match";
        c.params = detail::pair_params(g, po);
        S tv = total_variation(g, po);
        c.lhs = ScalarTraits<S>::to_double(tv);
        c.rhs = ScalarTraits<S>::is_exact ? 0.0 : 1e-12;
        c.slack = c.rhs - c.lhs;
        c.passed = ScalarTraits<S>::is_exact ? tv == S(0) : c.lhs <= c.rhs;
        r.checks.push_back(std::move(c));
    }
    return r;
}

template <class S>
SuiteReport suite_characterization(const SuiteConfig& cfg) {
    SuiteReport r;
    std::mt19937_64 gen(cfg.seed);
    for (int i = 0; i < cfg.pairs; ++i) {
        Direction dir = i % 4 < 2 ? Direction::forward : Direction::backward;
        int64_t atoms = 3 + static_cast<int64_t>(gen() % static_cast<std::uint64_t>(cfg.max_atoms - 2));
        int64_t lo = static_cast<int64_t>(gen() % 7) - 3;
        auto p = random_pmf<S>(lo, atoms, gen);
        BoundCheck c;
        c.truncation_error = 0.0;
        if (i % 2 == 0) {
            ProbeResult pr = characterization_probe(p, p, dir);
            c.name = "probe_match";
            c.params = p.description() + " | self, " + direction_name(dir);
            c.lhs = pr.max_residual;
            c.rhs = pr.tolerance;
            c.passed = pr.consistent;
        } else {
            auto q = random_pmf<S>(lo, atoms, gen);
            while (!(total_variation(p, q) > S(0))) q = random_pmf<S>(lo, atoms, gen);
            ProbeResult pr = characterization_probe(p, q, dir);
            c.name = "probe_flag";
            c.params = detail::pair_params(p, q) + ", " + direction_name(dir);
            c.lhs = pr.max_residual;
            c.rhs = pr.tolerance;
            c.passed = !pr.consistent && pr.witness.has_value();
            if (pr.witness) c.params += ", witness z=" + std::to_string(*pr.witness);
        }
        c.slack = c.rhs - c.lhs;
        r.checks.push_back(std::move(c));
    }
    return r;
}

}  // namespace detail

template <class S>
SuiteReport run_suite(SuiteName which, const SuiteConfig& cfg = {}) {
    SuiteReport r;
    switch (which) {
        case SuiteName::classic_pinsker: r = detail::suite_classic<S>(cfg); break;
        case SuiteName::backward: r = detail::suite_directional<S>(Direction::backward, cfg); break;
        case SuiteName::forward: r = detail::suite_directional<S>(Direction::forward, cfg); break;
        case SuiteName::poisson: r = detail::suite_poisson<S>(cfg); break;
        case SuiteName::rank: r = detail::suite_rank<S>(cfg); break;
        case SuiteName::zoo: r = detail::suite_zoo<S>(cfg); break;
        case SuiteName::characterization: r = detail::suite_characterization<S>(cfg); break;
    }
    r.suite = suite_name(which);
    r.backend = ScalarTraits<S>::name();
    r.seed = cfg.seed;
    detail::tally(r);
    return r;
}

}  // namespace steingauge
