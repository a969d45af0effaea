#pragma once

// Difference operators, the density operator T_p f = Delta(f p)/p, its
// boundary class, Stein-equation solutions, score functions, and the
// characterization probe.  Everything is window-based: a density truncated
// from an infinite support behaves exactly like a finite-support density,
// and the truncation bound feeds the float-backend tolerances.

#include "steingauge/density.hpp"
#include "steingauge/scalar.hpp"
#include "steingauge/test_function.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace steingauge {

enum class Direction : int { forward = +1, backward = -1 };

constexpr int64_t eta(Direction d) { return d == Direction::forward ? 1 : -1; }
inline const char* direction_name(Direction d) { return d == Direction::forward ? "forward" : "backward"; }

struct AssumptionError : std::runtime_error {
    explicit AssumptionError(const std::string& m) : std::runtime_error(m) {}
};

// (h(x + eta) - h(x)) / eta.
template <class S, class F>
S delta(Direction dir, const F& h, int64_t x) {
    int64_t e = eta(dir);
    S diff = h(x + e) - h(x);
    return e == 1 ? diff : -diff;
}

// T_p f(x) = Delta(f p)(x) / p(x), with 1/p = 0 off support.  Written in
// ratio form so the rational backend never sees a normalizer.
template <class S>
S stein_operator(const DiscreteDensity<S>& p, Direction dir, const TestFunction<S>& f, int64_t x) {
    if (!p.in_support(x)) return S(0);
    if (dir == Direction::forward) return f(x + 1) * p.ratio(x) - f(x);
    return f(x) - f(x - 1) * p.ratio_back(x);
}

template <class S>
S expectation(const DiscreteDensity<S>& d, const TestFunction<S>& l) {
    S acc(0);
    for (int64_t x = d.lo(); x <= d.hi(); ++x) acc += d.mass(x) * l(x);
    return acc;
}

namespace detail {

// Float-backend absolute tolerance for quantities that vanish identically
// under exact arithmetic, widened by the recorded truncation bounds.
template <class S>
double vanish_tol(double base, std::initializer_list<const DiscreteDensity<S>*> ds) {
    if (ScalarTraits<S>::is_exact) return 0.0;
    double t = base;
    for (const auto* d : ds) t += 64.0 * d->dropped_tail();
    return t;
}

}  // namespace detail

// Membership in the class F^eta(p): the telescoped sum of Delta^eta(f p)
// over the support must vanish, which reduces to a single boundary term
// (lower edge for eta = +1, upper edge for eta = -1).  At an edge created
// by truncating an infinite support the true condition is a limit; any
// tabulated (hence bounded) f passes there, with the edge mass folded into
// the tolerance.
template <class S>
bool class_membership(const DiscreteDensity<S>& p, Direction dir, const TestFunction<S>& f) {
    int64_t edge = dir == Direction::forward ? p.lo() : p.hi();
    bool synthetic = dir == Direction::forward ? p.truncated_lower() : p.truncated_upper();
    S boundary = f(edge) * p.mass(edge);
    double scale = std::max(1.0, ScalarTraits<S>::to_double(f.sup_abs()));
    double tol;
    if (synthetic) {
        tol = 4.0 * (ScalarTraits<S>::to_double(p.mass(edge)) + p.dropped_tail()) * scale + 1e-12;
    } else if (ScalarTraits<S>::is_exact) {
        return boundary == S(0);
    } else {
        tol = 1e-12 * scale;
    }
    return std::fabs(ScalarTraits<S>::to_double(boundary)) <= tol;
}

template <class S>
struct SteinSolution {
    Direction dir;
    TestFunction<S> f;       // tabulated over the support window of p
    TestFunction<S> test;    // the l that was solved for
    S centered_expectation;  // E_p[l]
    S sup_abs;               // sup |f| over the window
    S kappa_weight_sup;      // sup |f(x+1) p(x+1)/p(x)| (forward) or sup |f(x-1)| (backward)
    double residual;         // max | T_p f - (l - E_p l) | over the window
};

// Solve T_p^eta f = l - E_p[l].  Forward solutions use prefix sums of
// (l - E_p l) p below the mode and complementary suffix sums above it; the
// two agree identically (the full sum is zero) and the suffix form avoids
// catastrophic cancellation against tiny tail masses on the float backend.
template <class S>
SteinSolution<S> solve_stein(const DiscreteDensity<S>& p, Direction dir, const TestFunction<S>& l) {
    const int64_t lo = p.lo(), hi = p.hi();
    const std::size_t n = static_cast<std::size_t>(hi - lo + 1);
    const S el = expectation(p, l);

    std::vector<S> term(n);
    for (std::size_t i = 0; i < n; ++i) {
        int64_t x = lo + static_cast<int64_t>(i);
        term[i] = (l(x) - el) * p.mass(x);
    }
    std::vector<S> prefix(n), suffix(n);
    S acc(0);
    for (std::size_t i = 0; i < n; ++i) prefix[i] = acc += term[i];
    acc = S(0);
    for (std::size_t i = n; i-- > 0;) suffix[i] = acc += term[i];

    std::size_t mode = 0;
    for (std::size_t i = 1; i < n; ++i)
        if (p.mass(lo + static_cast<int64_t>(i)) > p.mass(lo + static_cast<int64_t>(mode))) mode = i;

    std::vector<S> vals(n);
    for (std::size_t i = 0; i < n; ++i) {
        int64_t x = lo + static_cast<int64_t>(i);
        S num;
        if (dir == Direction::forward) {
            // f(x) = sum_{k < x} (l - E l) p(k) / p(x)
            if (i == 0)
                num = S(0);
            else if (i <= mode)
                num = prefix[i - 1];
            else
                num = -suffix[i];
        } else {
            // f(x) = sum_{k <= x} (l - E l) p(k) / p(x)
            if (i + 1 == n)
                num = S(0);  // full centered sum
            else if (i <= mode)
                num = prefix[i];
            else
                num = -suffix[i + 1];
        }
        vals[i] = num / p.mass(x);
    }

    SteinSolution<S> sol;
    sol.dir = dir;
    sol.f = TestFunction<S>(lo, std::move(vals));
    sol.test = l;
    sol.centered_expectation = el;

    double res = 0.0;
    for (int64_t x = lo; x <= hi; ++x) {
        S got = stein_operator(p, dir, sol.f, x);
        S want = l(x) - el;
        res = std::max(res, std::fabs(ScalarTraits<S>::to_double(got - want)));
    }
    sol.residual = res;
    double res_tol = ScalarTraits<S>::is_exact
                         ? 0.0
                         : 1e-9 * std::max(1.0, ScalarTraits<S>::to_double(l.sup_abs()));
    if (res > res_tol)
        throw std::domain_error("solve_stein: verification residual " + std::to_string(res) +
                                " exceeds tolerance (truncation too aggressive?)");

    sol.sup_abs = sol.f.sup_abs();
    S wsup(0);
    for (int64_t x = lo; x <= hi; ++x) {
        S w = dir == Direction::forward ? ScalarTraits<S>::abs(sol.f(x + 1) * p.ratio(x))
                                        : ScalarTraits<S>::abs(sol.f(x - 1));
        if (w > wsup) wsup = w;
    }
    sol.kappa_weight_sup = wsup;
    return sol;
}

enum class ScoreKind { raw_eta, scaled };

template <class S>
struct ScoreEvaluation {
    ScoreKind kind = ScoreKind::raw_eta;
    Direction dir = Direction::forward;  // meaningful for raw_eta only
    int64_t lo = 0;
    std::vector<S> values;  // over the support window of q; 0 outside

    S operator()(int64_t x) const {
        int64_t i = x - lo;
        if (i < 0 || i >= static_cast<int64_t>(values.size())) return S(0);
        return values[static_cast<std::size_t>(i)];
    }
};

// r^eta(p,q)(x) = (1/eta) (p(x+eta)/p(x) - q(x+eta)/q(x)) on the support of q.
template <class S>
ScoreEvaluation<S> score(const DiscreteDensity<S>& p, const DiscreteDensity<S>& q, Direction dir) {
    require_window_subset(q, p, "score");
    ScoreEvaluation<S> r;
    r.kind = ScoreKind::raw_eta;
    r.dir = dir;
    r.lo = q.lo();
    r.values.reserve(static_cast<std::size_t>(q.hi() - q.lo() + 1));
    for (int64_t x = q.lo(); x <= q.hi(); ++x) {
        if (dir == Direction::forward)
            r.values.push_back(p.ratio(x) - q.ratio(x));
        else
            r.values.push_back(q.ratio_back(x) - p.ratio_back(x));
    }
    return r;
}

// r_sca(p,q)(x) = 1 - q(x+1) p(x) / (q(x) p(x+1)); the forward-ratio variant
// that stays finite when q's support ends before p's.  Where both forward
// ratios vanish (shared top) the score is 0: the distributions agree in
// placing nothing above x, and only this convention lets the score vanish
// identically at q = p.
template <class S>
ScoreEvaluation<S> scaled_score(const DiscreteDensity<S>& p, const DiscreteDensity<S>& q) {
    require_window_subset(q, p, "scaled_score");
    ScoreEvaluation<S> r;
    r.kind = ScoreKind::scaled;
    r.lo = q.lo();
    for (int64_t x = q.lo(); x <= q.hi(); ++x) {
        S qr = q.ratio(x);
        S pr = p.ratio(x);
        if (qr == S(0)) {
            r.values.push_back(pr == S(0) ? S(0) : S(1));
            continue;
        }
        if (pr == S(0))
            throw SupportError("scaled_score: p's forward ratio vanishes at x=" + std::to_string(x) +
                               " inside the support of q");
        r.values.push_back(S(1) - qr / pr);
    }
    return r;
}

// | (E_q l - E_p l) - E_q[ f(Y+eta) r^eta(p,q)(Y) ] | for the solution f of
// the Stein equation at l.  The two memberships behind the identity are
// enforced mechanically and violations surface as AssumptionError, not as a
// residual.
template <class S>
S stein_identity_residual(const DiscreteDensity<S>& p, const DiscreteDensity<S>& q, Direction dir,
                          const TestFunction<S>& l) {
    require_window_subset(q, p, "stein_identity_residual");
    SteinSolution<S> sol = solve_stein(p, dir, l);
    if (!class_membership(p, dir, sol.f))
        throw AssumptionError("stein identity: solution leaves the boundary class of p");
    if (!class_membership(q, dir, sol.f))
        throw AssumptionError("stein identity: solution leaves the boundary class of q");
    ScoreEvaluation<S> r = score(p, q, dir);
    const int64_t e = eta(dir);
    S rhs(0);
    for (int64_t x = q.lo(); x <= q.hi(); ++x) rhs += q.mass(x) * sol.f(x + e) * r(x);
    S lhs = expectation(q, l) - expectation(p, l);
    return ScalarTraits<S>::abs(lhs - rhs);
}

struct ProbeResult {
    bool consistent = true;
    std::optional<int64_t> witness;  // first z where the probe fails to vanish
    double max_residual = 0.0;
    double tolerance = 0.0;
};

// Characterization probe: for each z in the support window of p, solve the
// Stein equation for the indicator of [lo, z] and test E_q[T_p f_z(Y)] = 0.
// All residuals vanish iff q equals p conditioned on p's support.
template <class S>
ProbeResult characterization_probe(const DiscreteDensity<S>& p, const DiscreteDensity<S>& q,
                                   Direction dir) {
    S on_support(0);
    for (int64_t x = p.lo(); x <= p.hi(); ++x) on_support += q.mass(x);
    if (!(on_support > S(0)))
        throw std::invalid_argument("characterization_probe: q puts no mass on the support of p");

    ProbeResult res;
    res.tolerance = detail::vanish_tol<S>(1e-10, {&p, &q});
    for (int64_t z = p.lo(); z <= p.hi(); ++z) {
        TestFunction<S> lz = TestFunction<S>::indicator_upto(p.lo(), z);
        SteinSolution<S> sol = solve_stein(p, dir, lz);
        S acc(0);
        for (int64_t x = q.lo(); x <= q.hi(); ++x)
            acc += q.mass(x) * stein_operator(p, dir, sol.f, x);
        double v = std::fabs(ScalarTraits<S>::to_double(acc));
        res.max_residual = std::max(res.max_residual, v);
        if (v > res.tolerance && !res.witness) {
            res.consistent = false;
            res.witness = z;
        }
    }
    return res;
}

}  // namespace steingauge
