#pragma once

// Published closed-form Stein operators for specific families, each paired
// with the test-function substitution that exhibits it as the generic
// density operator in disguise.  The substitution is stored explicitly so
// the equivalence can be checked mechanically on random tables.

#include "steingauge/density.hpp"
#include "steingauge/families.hpp"
#include "steingauge/stein.hpp"
#include "steingauge/test_function.hpp"

#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace steingauge {

enum class ZooName {
    poisson_forward_std,
    poisson_backward,
    urn_forward,
    urn_backward,
    ord_forward,
    ord_backward,
    recurrence_forward,
    gibbs_forward,
    gibbs_backward,
};

inline const char* zoo_name(ZooName n) {
    switch (n) {
        case ZooName::poisson_forward_std: return "poisson_forward_std";
        case ZooName::poisson_backward: return "poisson_backward";
        case ZooName::urn_forward: return "urn_forward";
        case ZooName::urn_backward: return "urn_backward";
        case ZooName::ord_forward: return "ord_forward";
        case ZooName::ord_backward: return "ord_backward";
        case ZooName::recurrence_forward: return "recurrence_forward";
        case ZooName::gibbs_forward: return "gibbs_forward";
        case ZooName::gibbs_backward: return "gibbs_backward";
    }
    return "?";
}

inline std::vector<ZooName> zoo_all_names() {
    return {ZooName::poisson_forward_std, ZooName::poisson_backward, ZooName::urn_forward,
            ZooName::urn_backward,        ZooName::ord_forward,      ZooName::ord_backward,
            ZooName::recurrence_forward,  ZooName::gibbs_forward,    ZooName::gibbs_backward};
}

template <class S>
struct ZooOperator {
    explicit ZooOperator(DiscreteDensity<S> b) : bound(std::move(b)) {}

    ZooName name = ZooName::poisson_forward_std;
    Direction dir = Direction::forward;
    int64_t lo = 0, hi = 0;  // window the closed form is declared on
    std::function<S(const TestFunction<S>&, int64_t)> apply;
    std::function<TestFunction<S>(const TestFunction<S>&)> reparam;
    DiscreteDensity<S> bound;  // the density instance the parameters describe
};

namespace detail {

// reparam by a pointwise factor: f(x) = c(x) f0(x) over the window
template <class S, class C>
TestFunction<S> scale_table(const TestFunction<S>& f0, int64_t lo, int64_t hi, C&& c) {
    std::vector<S> v(static_cast<std::size_t>(hi - lo + 1));
    for (int64_t x = lo; x <= hi; ++x) v[static_cast<std::size_t>(x - lo)] = c(x) * f0(x);
    return TestFunction<S>(lo, std::move(v));
}

}  // namespace detail

// (lambda f0(x+1) - x f0(x)) on [0,hi]; substitution f(x) = x f0(x)
template <class S>
ZooOperator<S> zoo_poisson_forward(const S& lambda, const DiscreteDensity<S>& p) {
    ZooOperator<S> op(p);
    op.name = ZooName::poisson_forward_std;
    op.dir = Direction::forward;
    op.lo = p.lo();
    op.hi = p.hi();
    int64_t lo = op.lo, hi = op.hi;
    op.apply = [lambda, lo, hi](const TestFunction<S>& f0, int64_t x) {
        if (x < lo || x > hi) return S(0);
        return lambda * f0(x + 1) - ScalarTraits<S>::from_int(x) * f0(x);
    };
    op.reparam = [lo, hi](const TestFunction<S>& f0) {
        return detail::scale_table(f0, lo, hi, [](int64_t x) { return ScalarTraits<S>::from_int(x); });
    };
    return op;
}

// (f(x) - (x/lambda) f(x-1)) on [0,hi]; substitution is the identity
template <class S>
ZooOperator<S> zoo_poisson_backward(const S& lambda, const DiscreteDensity<S>& p) {
    ZooOperator<S> op(p);
    op.name = ZooName::poisson_backward;
    op.dir = Direction::backward;
    op.lo = p.lo();
    op.hi = p.hi();
    int64_t lo = op.lo, hi = op.hi;
    op.apply = [lambda, lo, hi](const TestFunction<S>& f, int64_t x) {
        if (x < lo || x > hi) return S(0);
        return f(x) - ScalarTraits<S>::from_int(x) / lambda * f(x - 1);
    };
    op.reparam = [lo, hi](const TestFunction<S>& f0) {
        return detail::scale_table(f0, lo, hi, [](int64_t) { return S(1); });
    };
    return op;
}

// ((n-x)(alpha+x)/(beta+n-x-1) f0(x+1) - x f0(x)) on [0,n]; f(x) = x f0(x).
// The published display divides by beta+n-x-1, which also vanishes at x = n
// when beta = 1; the leading factor n-x is zero there, so the zero numerator
// is taken before the division.
template <class S>
ZooOperator<S> zoo_urn_forward(int64_t n, const S& alpha, const S& beta, const DiscreteDensity<S>& p) {
    ZooOperator<S> op(p);
    op.name = ZooName::urn_forward;
    op.dir = Direction::forward;
    op.lo = 0;
    op.hi = n;
    op.apply = [n, alpha, beta](const TestFunction<S>& f0, int64_t x) {
        if (x < 0 || x > n) return S(0);
        S lead = ScalarTraits<S>::from_int(n - x) * (alpha + ScalarTraits<S>::from_int(x)) * f0(x + 1);
        S term = lead == S(0) ? S(0) : lead / (beta + ScalarTraits<S>::from_int(n - x - 1));
        return term - ScalarTraits<S>::from_int(x) * f0(x);
    };
    op.reparam = [n](const TestFunction<S>& f0) {
        return detail::scale_table(f0, int64_t(0), n, [](int64_t x) { return ScalarTraits<S>::from_int(x); });
    };
    return op;
}

// ((n-x) f0(x) - x(beta+n-x)/(alpha+x-1) f0(x-1)) on [0,n]; f(x) = (n-x) f0(x).
// Same zero-numerator-first convention at x = 0 when alpha = 1.
template <class S>
ZooOperator<S> zoo_urn_backward(int64_t n, const S& alpha, const S& beta, const DiscreteDensity<S>& p) {
    ZooOperator<S> op(p);
    op.name = ZooName::urn_backward;
    op.dir = Direction::backward;
    op.lo = 0;
    op.hi = n;
    op.apply = [n, alpha, beta](const TestFunction<S>& f0, int64_t x) {
        if (x < 0 || x > n) return S(0);
        S lead = ScalarTraits<S>::from_int(x) * (beta + ScalarTraits<S>::from_int(n - x)) * f0(x - 1);
        S term = lead == S(0) ? S(0) : lead / (alpha + ScalarTraits<S>::from_int(x - 1));
        return ScalarTraits<S>::from_int(n - x) * f0(x) - term;
    };
    op.reparam = [n](const TestFunction<S>& f0) {
        return detail::scale_table(f0, int64_t(0), n,
                                   [n](int64_t x) { return ScalarTraits<S>::from_int(n - x); });
    };
    return op;
}

// ((s(x)+tau(x)) f0(x+1) - s(x) f0(x)) on [a,b]; f(x) = s(x) f0(x)
template <class S>
ZooOperator<S> zoo_ord_forward(int64_t a, std::vector<S> s, std::vector<S> tau,
                               const DiscreteDensity<S>& p) {
    if (s.size() != tau.size()) throw std::invalid_argument("zoo ord: table length mismatch");
    ZooOperator<S> op(p);
    op.name = ZooName::ord_forward;
    op.dir = Direction::forward;
    op.lo = a;
    op.hi = a + static_cast<int64_t>(s.size()) - 1;
    int64_t lo = op.lo, hi = op.hi;
    auto sv = [s = std::move(s), lo](int64_t x) { return s[static_cast<std::size_t>(x - lo)]; };
    auto tv = [tau = std::move(tau), lo](int64_t x) { return tau[static_cast<std::size_t>(x - lo)]; };
    op.apply = [sv, tv, lo, hi](const TestFunction<S>& f0, int64_t x) {
        if (x < lo || x > hi) return S(0);
        return (sv(x) + tv(x)) * f0(x + 1) - sv(x) * f0(x);
    };
    op.reparam = [sv, lo, hi](const TestFunction<S>& f0) {
        return detail::scale_table(f0, lo, hi, sv);
    };
    return op;
}

// (f(x) - s(x)/(s(x-1)+tau(x-1)) f(x-1)) on [a,b]; identity substitution.
// s(a) = 0 kills the x = a term before the (out-of-window) denominator is touched.
template <class S>
ZooOperator<S> zoo_ord_backward(int64_t a, std::vector<S> s, std::vector<S> tau,
                                const DiscreteDensity<S>& p) {
    if (s.size() != tau.size()) throw std::invalid_argument("zoo ord: table length mismatch");
    ZooOperator<S> op(p);
    op.name = ZooName::ord_backward;
    op.dir = Direction::backward;
    op.lo = a;
    op.hi = a + static_cast<int64_t>(s.size()) - 1;
    int64_t lo = op.lo, hi = op.hi;
    auto sv = [s = std::move(s), lo](int64_t x) { return s[static_cast<std::size_t>(x - lo)]; };
    auto tv = [tau = std::move(tau), lo](int64_t x) { return tau[static_cast<std::size_t>(x - lo)]; };
    op.apply = [sv, tv, lo, hi](const TestFunction<S>& f, int64_t x) {
        if (x < lo || x > hi) return S(0);
        S num = sv(x) * f(x - 1);
        if (num == S(0)) return f(x);
        return f(x) - num / (sv(x - 1) + tv(x - 1));
    };
    op.reparam = [lo, hi](const TestFunction<S>& f0) {
        return detail::scale_table(f0, lo, hi, [](int64_t) { return S(1); });
    };
    return op;
}

// For densities with a(x) p(x-1) = b(x) p(x), b(0) = 0, a nonvanishing on the
// window: (a(x+1) f0(x+1) - b(x) f0(x)) on [0,n]; f(x) = b(x) f0(x)
template <class S>
ZooOperator<S> zoo_recurrence_forward(std::function<S(int64_t)> a, std::function<S(int64_t)> b,
                                      const DiscreteDensity<S>& p) {
    ZooOperator<S> op(p);
    op.name = ZooName::recurrence_forward;
    op.dir = Direction::forward;
    op.lo = p.lo();
    op.hi = p.hi();
    int64_t lo = op.lo, hi = op.hi;
    if (!(b(lo) == S(0))) throw std::invalid_argument("zoo recurrence: b must vanish at the lower edge");
    op.apply = [a, b, lo, hi](const TestFunction<S>& f0, int64_t x) {
        if (x < lo || x > hi) return S(0);
        return a(x + 1) * f0(x + 1) - b(x) * f0(x);
    };
    op.reparam = [b, lo, hi](const TestFunction<S>& f0) { return detail::scale_table(f0, lo, hi, b); };
    return op;
}

// (w(x+1)/w(x) omega f0(x+1) - x f0(x)) on [0,N] for weights w = exp V;
// f(x) = x f0(x).  Past the top of the table the weight is zero, matching
// the convention V = -inf beyond the support.
template <class S>
ZooOperator<S> zoo_gibbs_forward(std::vector<S> weights, const S& omega, const DiscreteDensity<S>& p) {
    ZooOperator<S> op(p);
    op.name = ZooName::gibbs_forward;
    op.dir = Direction::forward;
    op.lo = 0;
    op.hi = static_cast<int64_t>(weights.size()) - 1;
    int64_t hi = op.hi;
    auto wv = [weights = std::move(weights)](int64_t x) {
        if (x < 0 || x >= static_cast<int64_t>(weights.size())) return S(0);
        return weights[static_cast<std::size_t>(x)];
    };
    op.apply = [wv, omega, hi](const TestFunction<S>& f0, int64_t x) {
        if (x < 0 || x > hi) return S(0);
        S num = wv(x + 1) * omega * f0(x + 1);
        S term = num == S(0) ? S(0) : num / wv(x);
        return term - ScalarTraits<S>::from_int(x) * f0(x);
    };
    op.reparam = [hi](const TestFunction<S>& f0) {
        return detail::scale_table(f0, int64_t(0), hi, [](int64_t x) { return ScalarTraits<S>::from_int(x); });
    };
    return op;
}

// ((N-x) f0(x) - x(N-x+1) w(x-1)/(w(x) omega) f0(x-1)) on [0,N], N finite;
// f(x) = (N-x) f0(x)
template <class S>
ZooOperator<S> zoo_gibbs_backward(std::vector<S> weights, const S& omega, const DiscreteDensity<S>& p) {
    if (p.truncated_upper())
        throw std::invalid_argument("zoo gibbs backward: needs a genuinely finite support");
    ZooOperator<S> op(p);
    op.name = ZooName::gibbs_backward;
    op.dir = Direction::backward;
    op.lo = 0;
    op.hi = static_cast<int64_t>(weights.size()) - 1;
    int64_t n = op.hi;
    auto wv = [weights = std::move(weights)](int64_t x) {
        if (x < 0 || x >= static_cast<int64_t>(weights.size())) return S(0);
        return weights[static_cast<std::size_t>(x)];
    };
    op.apply = [wv, omega, n](const TestFunction<S>& f0, int64_t x) {
        if (x < 0 || x > n) return S(0);
        S num = ScalarTraits<S>::from_int(x) * ScalarTraits<S>::from_int(n - x + 1) * wv(x - 1) * f0(x - 1);
        S term = num == S(0) ? S(0) : num / (wv(x) * omega);
        return ScalarTraits<S>::from_int(n - x) * f0(x) - term;
    };
    op.reparam = [n](const TestFunction<S>& f0) {
        return detail::scale_table(f0, int64_t(0), n,
                                   [n](int64_t x) { return ScalarTraits<S>::from_int(n - x); });
    };
    return op;
}

// Random bounded table with entries in [-1, 1] (thousandths, so the rational
// backend stays exact).  Raw engine output is reduced by hand for the sake of
// cross-platform determinism.
template <class S>
TestFunction<S> random_table(int64_t lo, int64_t hi, std::mt19937_64& gen) {
    std::vector<S> v(static_cast<std::size_t>(hi - lo + 1));
    for (auto& e : v) {
        int64_t raw = static_cast<int64_t>(gen() % 2001) - 1000;
        e = ScalarTraits<S>::from_int(raw) / ScalarTraits<S>::from_int(1000);
    }
    return TestFunction<S>(lo, std::move(v));
}

// Max |closed form - generic operator on the substituted function| over the
// window, across `trials` random tables.  Exactly zero on the rational
// backend whenever the closed form is faithful.
template <class S>
S zoo_equivalence_residual(const ZooOperator<S>& op, const DiscreteDensity<S>& p, int trials = 32,
                           uint64_t seed = 1) {
    if (p.lo() != op.bound.lo() || p.hi() != op.bound.hi())
        throw std::invalid_argument("zoo: density window does not match the operator's");
    for (int64_t x = p.lo(); x <= p.hi(); ++x) {
        double d = std::fabs(ScalarTraits<S>::to_double(p.mass(x) - op.bound.mass(x)));
        if (ScalarTraits<S>::is_exact ? !(p.mass(x) == op.bound.mass(x)) : d > 1e-12)
            throw std::invalid_argument("zoo: density does not match the operator's parameters");
    }
    std::mt19937_64 gen(seed);
    S worst(0);
    for (int t = 0; t < trials; ++t) {
        TestFunction<S> f0 = random_table<S>(op.lo, op.hi, gen);
        TestFunction<S> f = op.reparam(f0);
        for (int64_t x = p.lo(); x <= p.hi(); ++x) {
            S d = ScalarTraits<S>::abs(op.apply(f0, x) - stein_operator(p, op.dir, f, x));
            if (d > worst) worst = d;
        }
    }
    return worst;
}

template <class S>
struct ZooCase {
    ZooOperator<S> op;
    DiscreteDensity<S> density;
};

// One representative instance per closed form, parameterized to exercise the
// edge conventions (urn with alpha = beta = 1, truncated infinite supports).
template <class S>
std::vector<ZooCase<S>> default_zoo_cases(const TruncationPolicy& pol = {}) {
    std::vector<ZooCase<S>> cases;
    auto half = [](int64_t a, int64_t b) { return ScalarTraits<S>::from_int(a) / ScalarTraits<S>::from_int(b); };

    {
        S lam = ScalarTraits<S>::from_int(2);
        auto p = build_poisson<S>(lam, pol);
        cases.push_back({zoo_poisson_forward(lam, p), p});
    }
    {
        S lam = half(3, 2);
        auto p = build_poisson<S>(lam, pol);
        cases.push_back({zoo_poisson_backward(lam, p), p});
    }
    {
        int64_t n = 6;
        S alpha = ScalarTraits<S>::from_int(2), beta = ScalarTraits<S>::from_int(3);
        auto p = build_polya<S>(n, alpha, beta);
        cases.push_back({zoo_urn_forward(n, alpha, beta, p), p});
    }
    {
        int64_t n = 5;
        S alpha = ScalarTraits<S>::from_int(1), beta = ScalarTraits<S>::from_int(1);
        auto p = build_polya<S>(n, alpha, beta);
        cases.push_back({zoo_urn_backward(n, alpha, beta, p), p});
    }
    {
        // binomial(7, 2/5) written in s/tau form: s(x) = x(1-p), tau(x) = np - x
        int64_t n = 7;
        S pr = half(2, 5);
        std::vector<S> s, tau;
        for (int64_t x = 0; x <= n; ++x) {
            s.push_back(ScalarTraits<S>::from_int(x) * (S(1) - pr));
            tau.push_back(ScalarTraits<S>::from_int(n) * pr - ScalarTraits<S>::from_int(x));
        }
        auto p = build_binomial<S>(n, pr);
        cases.push_back({zoo_ord_forward(int64_t(0), s, tau, p), p});
    }
    {
        // mean-1 member of the ratio family s(x) = x, tau(x) = lambda - x
        S lam = ScalarTraits<S>::from_int(1);
        auto p = build_poisson<S>(lam, pol);
        std::vector<S> s, tau;
        for (int64_t x = p.lo(); x <= p.hi(); ++x) {
            s.push_back(ScalarTraits<S>::from_int(x));
            tau.push_back(lam - ScalarTraits<S>::from_int(x));
        }
        cases.push_back({zoo_ord_backward(p.lo(), s, tau, p), p});
    }
    {
        int64_t theta = 2, n = 4;
        auto p = build_rank_finite<S>(theta, n);
        S th = ScalarTraits<S>::from_int(theta);
        auto a = [th, n](int64_t x) { return th * (S(1) - pow_int(th, -(n - x + 1))); };
        auto b = [th](int64_t x) {
            S t = pow_int(th, x) - S(1);
            return t * t;
        };
        cases.push_back({zoo_recurrence_forward<S>(a, b, p), p});
    }
    {
        int64_t N = 5;
        S omega = half(3, 2);
        std::vector<S> w;
        for (int64_t x = 0; x <= N; ++x) w.push_back(S(1) + half((x * x) % 3 + 1, 4));
        auto p = build_gibbs<S>(w, omega);
        cases.push_back({zoo_gibbs_forward(w, omega, p), p});
        cases.push_back({zoo_gibbs_backward(w, omega, p), p});
    }
    return cases;
}

}  // namespace steingauge
