#pragma once

// Probability metrics and information functionals, plus the kappa constants
// that link expectation-difference distances to score variances.
// Conventions:
//   - total variation and Kolmogorov run over the union of windows and are
//     exact on the rational backend;
//   - relative entropy is always a double (it needs a log) and is computed
//     over the window intersection, with atoms outside the partner's
//     declared support flagging +inf;
//   - the backward information distance is +inf whenever the comparison
//     density has a genuinely finite upper support endpoint strictly inside
//     the target's, since the lattice sum then hits a c^2/0 term one step
//     above the top; windows truncated from infinite supports never trigger
//     this (their top mass is below the materialization threshold).

#include "steingauge/density.hpp"
#include "steingauge/families.hpp"
#include "steingauge/scalar.hpp"
#include "steingauge/stein.hpp"
#include "steingauge/test_function.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace steingauge {

enum class InfReason { none, support_mismatch, divergent_sum };

inline const char* inf_reason_name(InfReason r) {
    switch (r) {
        case InfReason::none: return "none";
        case InfReason::support_mismatch: return "support_mismatch";
        case InfReason::divergent_sum: return "divergent_sum";
    }
    return "?";
}

template <class V>
struct Extended {
    V value{};
    bool is_inf = false;
    InfReason reason = InfReason::none;

    static Extended finite(V v) { return Extended{std::move(v), false, InfReason::none}; }
    static Extended infinite(InfReason r) { return Extended{V{}, true, r}; }
};

// Mass at a declared-finite top edge below which a density is treated as an
// unbounded law that merely carries negligible mass up there, rather than as
// one genuinely stopping inside the target's support.
inline constexpr double kEdgeMass = 1e-9;

template <class S>
S total_variation(const DiscreteDensity<S>& p, const DiscreteDensity<S>& q) {
    S acc(0);
    for (int64_t x = std::min(p.lo(), q.lo()); x <= std::max(p.hi(), q.hi()); ++x)
        acc += ScalarTraits<S>::abs(p.mass(x) - q.mass(x));
    return acc / S(2);
}

template <class S>
S kolmogorov(const DiscreteDensity<S>& p, const DiscreteDensity<S>& q) {
    S fp(0), fq(0), best(0);
    for (int64_t x = std::min(p.lo(), q.lo()); x <= std::max(p.hi(), q.hi()); ++x) {
        fp += p.mass(x);
        fq += q.mass(x);
        S d = ScalarTraits<S>::abs(fp - fq);
        if (d > best) best = d;
    }
    return best;
}

namespace detail {

inline bool declared_contains(const Support& s, int64_t x) {
    if (s.lower.finite && x < s.lower.value) return false;
    if (s.upper.finite && x > s.upper.value) return false;
    return true;
}

// q's declared support stops strictly below p's.
inline bool upper_strictly_inside(const Support& q, const Support& p) {
    if (!q.upper.finite) return false;
    return !p.upper.finite || p.upper.value > q.upper.value;
}

}  // namespace detail

// Relative entropy sum_x q(x) log(q(x)/p(x)), natural log.  Terms where p's
// window has been truncated away are skipped (their mass is below the tail
// threshold); an atom of q outside p's declared support makes it +inf.
template <class S>
Extended<double> kl_divergence(const DiscreteDensity<S>& q, const DiscreteDensity<S>& p) {
    double acc = 0.0;
    for (int64_t x = q.lo(); x <= q.hi(); ++x) {
        if (!detail::declared_contains(p.declared(), x))
            return Extended<double>::infinite(InfReason::support_mismatch);
        if (x < p.lo() || x > p.hi()) continue;
        double qx = ScalarTraits<S>::to_double(q.mass(x));
        double px = ScalarTraits<S>::to_double(p.mass(x));
        acc += qx * std::log(qx / px);
    }
    // Gibbs' inequality makes the true value nonnegative; rounding may leave
    // a tiny negative residue at q = p.
    return Extended<double>::finite(std::max(acc, 0.0));
}

// Backward information distance E_q[(q(Y-1)/q(Y) - p(Y-1)/p(Y))^2].
template <class S>
Extended<S> j_gen(const DiscreteDensity<S>& p, const DiscreteDensity<S>& q) {
    require_window_subset(q, p, "j_gen");
    if (detail::upper_strictly_inside(q.declared(), p.declared()) &&
        ScalarTraits<S>::to_double(q.mass(q.hi())) > kEdgeMass)
        return Extended<S>::infinite(InfReason::support_mismatch);
    ScoreEvaluation<S> r = score(p, q, Direction::backward);
    S acc(0);
    for (int64_t x = q.lo(); x <= q.hi(); ++x) acc += q.mass(x) * r(x) * r(x);
    return Extended<S>::finite(acc);
}

// Forward (scaled-score) information distance E_q[r_sca(p,q)(Y)^2]; finite
// even when q stops strictly inside p.
template <class S>
S k_gen(const DiscreteDensity<S>& p, const DiscreteDensity<S>& q) {
    ScoreEvaluation<S> r = scaled_score(p, q);
    S acc(0);
    for (int64_t x = q.lo(); x <= q.hi(); ++x) acc += q.mass(x) * r(x) * r(x);
    return acc;
}

namespace detail {

// Poisson reference wide enough for q: when q genuinely stops at a finite
// top, the reference must extend one step past it so the scaled score's top
// term q(N) * 1 is kept; a window merely truncated from an infinite support
// needs no headroom (and giving it any would spoil exact self-distances).
template <class S>
DiscreteDensity<S> poisson_covering(const S& lambda, const DiscreteDensity<S>& q,
                                    TruncationPolicy pol) {
    int64_t need_hi = q.declared().upper.finite ? q.hi() + 1 : q.hi();
    auto po = build_poisson<S>(lambda, pol);
    if (po.hi() < need_hi) {
        pol.window = std::pair<int64_t, int64_t>{0, need_hi};
        po = build_poisson<S>(lambda, pol);
    }
    return po;
}

}  // namespace detail

// lambda * k_gen against a mean-lambda Poisson reference.
template <class S>
S k_scaled(const S& lambda, const DiscreteDensity<S>& q, const TruncationPolicy& pol = {}) {
    auto po = detail::poisson_covering(lambda, q, pol);
    return lambda * k_gen(po, q);
}

// lambda^2 * j_gen against a Poisson reference; same infinity semantics.
template <class S>
Extended<S> j_poisson(const S& lambda, const DiscreteDensity<S>& q, const TruncationPolicy& pol = {}) {
    auto po = detail::poisson_covering(lambda, q, pol);
    Extended<S> base = j_gen(po, q);
    if (base.is_inf) return base;
    return Extended<S>::finite(lambda * lambda * base.value);
}

// E_q[(1 - q(Y-1)/q(Y))^2]; finite for every density (only backward ratios
// of q itself appear).  Extended-valued for interface uniformity.
template <class S>
Extended<S> i_functional(const DiscreteDensity<S>& q) {
    S acc(0);
    for (int64_t x = q.lo(); x <= q.hi(); ++x) {
        S d = S(1) - q.ratio_back(x);
        acc += q.mass(x) * d * d;
    }
    return Extended<S>::finite(acc);
}

// The extremal bounded test function for total variation: +1/2 where q
// exceeds p, -1/2 where p exceeds q, 0 on ties, tabulated over the union of
// windows.  E_q[h] - E_p[h] recovers the total variation distance.
template <class S>
TestFunction<S> tv_test_function(const DiscreteDensity<S>& p, const DiscreteDensity<S>& q) {
    int64_t lo = std::min(p.lo(), q.lo()), hi = std::max(p.hi(), q.hi());
    std::vector<S> v(static_cast<std::size_t>(hi - lo + 1), S(0));
    S half = ScalarTraits<S>::from_ratio(1, 2);
    for (int64_t x = lo; x <= hi; ++x) {
        if (q.mass(x) > p.mass(x))
            v[static_cast<std::size_t>(x - lo)] = half;
        else if (q.mass(x) < p.mass(x))
            v[static_cast<std::size_t>(x - lo)] = -half;
    }
    return TestFunction<S>(lo, std::move(v));
}

// min(1, sqrt(2/(e lambda))): the uniform-norm factor for weighted Poisson
// Stein-equation solutions of bounded test functions.
inline double erickson_factor(double lambda) {
    return std::min(1.0, std::sqrt(2.0 / (std::exp(1.0) * lambda)));
}

// sqrt(lambda) * erickson_factor(lambda): the constant multiplying the root
// of the scaled Fisher information in our Poisson total-variation bound.
// Equals sqrt(2/e) for all lambda >= 2/e, hence always below sqrt(2).
inline double poisson_tv_constant(double lambda) {
    return std::sqrt(lambda) * erickson_factor(lambda);
}

enum class MetricKind {
    total_variation,
    kolmogorov,
    kullback_leibler,
    j_gen,
    k_gen,
    k_scaled,
    j_poisson,
    i_functional
};

inline const char* metric_name(MetricKind m) {
    switch (m) {
        case MetricKind::total_variation: return "tv";
        case MetricKind::kolmogorov: return "kolmogorov";
        case MetricKind::kullback_leibler: return "kl";
        case MetricKind::j_gen: return "j_gen";
        case MetricKind::k_gen: return "k_gen";
        case MetricKind::k_scaled: return "k_scaled";
        case MetricKind::j_poisson: return "j_poisson";
        case MetricKind::i_functional: return "i_functional";
    }
    return "?";
}

inline std::optional<MetricKind> parse_metric(const std::string& s) {
    for (MetricKind m : {MetricKind::total_variation, MetricKind::kolmogorov,
                         MetricKind::kullback_leibler, MetricKind::j_gen, MetricKind::k_gen,
                         MetricKind::k_scaled, MetricKind::j_poisson, MetricKind::i_functional})
        if (s == metric_name(m)) return m;
    return std::nullopt;
}

inline std::vector<MetricKind> all_metrics() {
    return {MetricKind::total_variation, MetricKind::kolmogorov, MetricKind::kullback_leibler,
            MetricKind::j_gen,           MetricKind::k_gen,      MetricKind::k_scaled,
            MetricKind::j_poisson,       MetricKind::i_functional};
}

enum class KappaVia { exact_sup_over_h, uniform_sup_norm, erickson_poisson };

inline const char* kappa_via_name(KappaVia v) {
    switch (v) {
        case KappaVia::exact_sup_over_h: return "exact_sup_over_h";
        case KappaVia::uniform_sup_norm: return "uniform_sup_norm";
        case KappaVia::erickson_poisson: return "erickson_poisson";
    }
    return "?";
}

template <class S>
struct KappaSet {
    Direction dir = Direction::backward;
    S exact_sq{};                    // E_q[weight^2], exact on the rational backend
    double exact = 0.0;              // sqrt(exact_sq)
    double uniform = 0.0;            // sup of the weight over the window
    std::optional<double> erickson;  // lambda-uniform bound, Poisson targets only
    std::string witness;
};

namespace detail {

// E_q[(shifted, weighted f)^2] for the direction's pairing weight.
template <class S>
S kappa_square(const DiscreteDensity<S>& p, const DiscreteDensity<S>& q, Direction dir,
               const TestFunction<S>& f) {
    S acc(0);
    for (int64_t x = q.lo(); x <= q.hi(); ++x) {
        S w = dir == Direction::backward ? f(x - 1) : f(x + 1) * p.ratio(x);
        acc += q.mass(x) * w * w;
    }
    return acc;
}

// sup l - inf l over the whole lattice; off-window values are zero.
template <class S>
double lattice_range(const TestFunction<S>& l) {
    double hi = 0.0, lo = 0.0;
    for (int64_t x = l.lo(); x <= l.hi(); ++x) {
        double v = ScalarTraits<S>::to_double(l(x));
        hi = std::max(hi, v);
        lo = std::min(lo, v);
    }
    return hi - lo;
}

}  // namespace detail

// kappa for the total-variation class: the single extremal h decides the
// supremum, so the "exact" variant is one expectation.  poisson_lambda, when
// given, adds the lambda-uniform variant lambda * erickson_factor * range(h).
template <class S>
KappaSet<S> kappa_tv(const DiscreteDensity<S>& p, const DiscreteDensity<S>& q, Direction dir,
                     std::optional<double> poisson_lambda = std::nullopt) {
    require_window_subset(q, p, "kappa_tv");
    TestFunction<S> h = tv_test_function(p, q);
    SteinSolution<S> sol = solve_stein(p, dir, h);
    if (!class_membership(p, dir, sol.f))
        throw AssumptionError("kappa_tv: solution leaves the boundary class of p");
    if (!class_membership(q, dir, sol.f))
        throw AssumptionError("kappa_tv: solution leaves the boundary class of q");

    KappaSet<S> k;
    k.dir = dir;
    k.exact_sq = detail::kappa_square(p, q, dir, sol.f);
    k.exact = std::sqrt(ScalarTraits<S>::to_double(k.exact_sq));
    k.uniform = ScalarTraits<S>::to_double(sol.kappa_weight_sup);
    if (poisson_lambda)
        k.erickson = *poisson_lambda * erickson_factor(*poisson_lambda) * detail::lattice_range(h);
    k.witness = "sign split of q - p";
    return k;
}

// kappa for the Kolmogorov class: the sup runs over the one-parameter family
// of centered threshold indicators, enumerated across the target window.
template <class S>
KappaSet<S> kappa_kolmogorov(const DiscreteDensity<S>& p, const DiscreteDensity<S>& q, Direction dir,
                             std::optional<double> poisson_lambda = std::nullopt) {
    require_window_subset(q, p, "kappa_kolmogorov");
    KappaSet<S> k;
    k.dir = dir;
    k.exact_sq = S(0);
    int64_t arg = p.lo();
    for (int64_t z = p.lo(); z <= p.hi(); ++z) {
        TestFunction<S> lz = TestFunction<S>::indicator_upto(p.lo(), z);
        SteinSolution<S> sol = solve_stein(p, dir, lz);
        if (!class_membership(p, dir, sol.f) || !class_membership(q, dir, sol.f))
            throw AssumptionError("kappa_kolmogorov: solution leaves a boundary class");
        S sq = detail::kappa_square(p, q, dir, sol.f);
        if (sq > k.exact_sq) {
            k.exact_sq = sq;
            arg = z;
        }
        k.uniform = std::max(k.uniform, ScalarTraits<S>::to_double(sol.kappa_weight_sup));
    }
    k.exact = std::sqrt(ScalarTraits<S>::to_double(k.exact_sq));
    if (poisson_lambda) k.erickson = *poisson_lambda * erickson_factor(*poisson_lambda);
    k.witness = "threshold indicator at z=" + std::to_string(arg);
    return k;
}

}  // namespace steingauge
