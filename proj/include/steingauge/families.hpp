#pragma once

// Density catalog.  Families are defined through their mass-ratio
// recurrences, which stay exact on the rational backend even when the pmf
// itself has a transcendental normalizer (Poisson: masses within a window
// are proportional to lambda^x/x!, so the renormalized window is exactly
// rational).  Infinite supports are cut once a geometric bound on the
// remaining tail drops below the truncation policy's tail_mass.

#include "steingauge/density.hpp"
#include "steingauge/scalar.hpp"

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace steingauge {

namespace detail {

// Grow a window from `lo` following ratio(x) = p(x+1)/p(x) until the tail
// bound w(x)*r/(1-r) / partial_sum falls below tail_mass.  Requires ratios
// that are eventually nonincreasing and < 1 (true for every infinite family
// in the catalog).  An explicit window override materializes exactly that
// window and fails if the bound cannot be met at its edge.
template <class S>
DiscreteDensity<S> materialize_infinite(Support declared, int64_t lo,
                                        const std::function<S(int64_t)>& ratio_fn,
                                        const TruncationPolicy& pol, std::string desc) {
    const S tail = ScalarTraits<S>::from_double(pol.tail_mass);
    if (!(tail > S(0))) throw std::invalid_argument(desc + ": tail_mass must be positive");
    if (!pol.renormalize)
        throw std::invalid_argument(desc + ": raw (non-renormalized) truncation is only available "
                                           "for finite supports");
    constexpr int64_t kMaxWindow = 1 << 22;

    int64_t forced_hi = -1;
    if (pol.window) {
        if (pol.window->first != lo)
            throw std::invalid_argument(desc + ": window override must start at the support lower bound");
        forced_hi = pol.window->second;
        if (forced_hi < lo + 1) throw std::invalid_argument(desc + ": window override too small");
    }

    std::vector<S> w{S(1)};
    std::vector<S> ratios;
    S partial = w[0];
    int64_t x = lo;
    double dropped = 0.0;
    while (true) {
        if (forced_hi < 0 && x > lo) {
            // Candidate cut at x: bound the not-yet-materialized tail.
            S r = ratio_fn(x);
            if (r < S(1)) {
                S bound = w.back() * r / (S(1) - r);
                if (bound <= tail * partial) {
                    dropped = ScalarTraits<S>::to_double(bound / partial);
                    break;
                }
            }
        }
        if (forced_hi >= 0 && x == forced_hi) {
            S r = ratio_fn(x);
            if (!(r < S(1)))
                throw std::invalid_argument(desc + ": truncation window cannot reach tail_mass");
            S bound = w.back() * r / (S(1) - r);
            if (!(bound <= tail * partial))
                throw std::invalid_argument(desc + ": truncation window cannot reach tail_mass");
            dropped = ScalarTraits<S>::to_double(bound / partial);
            break;
        }
        if (x - lo >= kMaxWindow) throw std::invalid_argument(desc + ": truncation window exceeds limit");
        S r = ratio_fn(x);
        if (!(r > S(0))) throw std::invalid_argument(desc + ": ratio recurrence left the support");
        ratios.push_back(r);
        w.push_back(w.back() * r);
        partial += w.back();
        ++x;
    }
    return DiscreteDensity<S>::from_weights(declared, lo, std::move(w), std::move(ratios), dropped,
                                            true, std::move(desc));
}

template <class S>
DiscreteDensity<S> materialize_finite(Support declared, int64_t lo,
                                      const std::function<S(int64_t)>& ratio_fn, int64_t hi,
                                      std::string desc) {
    std::vector<S> w{S(1)};
    std::vector<S> ratios;
    for (int64_t x = lo; x < hi; ++x) {
        S r = ratio_fn(x);
        if (!(r > S(0))) throw std::invalid_argument(desc + ": non-positive mass ratio inside support");
        ratios.push_back(r);
        w.push_back(w.back() * r);
    }
    return DiscreteDensity<S>::from_weights(declared, lo, std::move(w), std::move(ratios), 0.0, true,
                                            std::move(desc));
}

inline std::string num_str(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

}  // namespace detail

template <class S>
DiscreteDensity<S> build_poisson(const S& lambda, const TruncationPolicy& pol = {}) {
    if (!(lambda > S(0))) throw std::invalid_argument("poisson: lambda must be positive");
    std::string desc = "poisson(lambda=" + detail::num_str(ScalarTraits<S>::to_double(lambda)) + ")";
    auto ratio = [lambda](int64_t x) { return lambda / ScalarTraits<S>::from_int(x + 1); };
    return detail::materialize_infinite<S>(Support::upper_ray(0), 0, ratio, pol, std::move(desc));
}

template <class S>
DiscreteDensity<S> build_binomial(int64_t n, const S& p) {
    if (n < 1) throw std::invalid_argument("binomial: need n >= 1");
    if (!(p > S(0)) || !(p < S(1))) throw std::invalid_argument("binomial: need 0 < p < 1");
    std::string desc = "binomial(n=" + std::to_string(n) +
                       ",p=" + detail::num_str(ScalarTraits<S>::to_double(p)) + ")";
    S odds = p / (S(1) - p);
    auto ratio = [n, odds](int64_t x) {
        return odds * ScalarTraits<S>::from_int(n - x) / ScalarTraits<S>::from_int(x + 1);
    };
    return detail::materialize_finite<S>(Support::closed(0, n), 0, ratio, n, std::move(desc));
}

// Polya urn occupation law: mass(k) = C(n,k) (a)_k (b)_{n-k} / (a+b)_n with
// rising factorials.
template <class S>
DiscreteDensity<S> build_polya(int64_t n, const S& alpha, const S& beta) {
    if (n < 1) throw std::invalid_argument("polya_urn: need n >= 1");
    if (!(alpha >= S(1)) || !(beta >= S(1)))
        throw std::invalid_argument("polya_urn: need alpha >= 1 and beta >= 1");
    std::string desc = "polya_urn(n=" + std::to_string(n) +
                       ",alpha=" + detail::num_str(ScalarTraits<S>::to_double(alpha)) +
                       ",beta=" + detail::num_str(ScalarTraits<S>::to_double(beta)) + ")";
    auto ratio = [n, alpha, beta](int64_t x) {
        S num = ScalarTraits<S>::from_int(n - x) * (alpha + ScalarTraits<S>::from_int(x));
        S den = ScalarTraits<S>::from_int(x + 1) * (beta + ScalarTraits<S>::from_int(n - x - 1));
        return num / den;
    };
    return detail::materialize_finite<S>(Support::closed(0, n), 0, ratio, n, std::move(desc));
}

// Ord family through user tables s, tau over a finite interval [a, b]:
// mass ratio p(x+1)/p(x) = (s(x) + tau(x)) / s(x+1), with s(a) = 0 and
// s > 0 past the lower edge.
template <class S>
DiscreteDensity<S> build_ord(int64_t a, const std::vector<S>& s, const std::vector<S>& tau) {
    if (s.size() != tau.size() || s.size() < 2)
        throw std::invalid_argument("ord: s and tau must share a length >= 2");
    int64_t b = a + static_cast<int64_t>(s.size()) - 1;
    if (s[0] != S(0)) throw std::invalid_argument("ord: s must vanish at the lower support edge");
    for (std::size_t i = 1; i < s.size(); ++i)
        if (!(s[i] > S(0))) throw std::invalid_argument("ord: s must be positive past the lower edge");
    std::string desc = "ord(a=" + std::to_string(a) + ",b=" + std::to_string(b) + ")";
    auto ratio = [a, &s, &tau](int64_t x) {
        std::size_t i = static_cast<std::size_t>(x - a);
        return (s[i] + tau[i]) / s[i + 1];
    };
    return detail::materialize_finite<S>(Support::closed(a, b), a, ratio, b, std::move(desc));
}

// Gibbs measure on [0, N]: mass(x) proportional to W(x) omega^x / x!, where
// W(x) plays the role of exp(V(x)).  Passing the weights directly keeps
// rational instances exact.
template <class S>
DiscreteDensity<S> build_gibbs(const std::vector<S>& weights, const S& omega) {
    if (weights.size() < 2) throw std::invalid_argument("gibbs: need N >= 1");
    if (!(omega > S(0))) throw std::invalid_argument("gibbs: omega must be positive");
    for (const S& w : weights)
        if (!(w > S(0))) throw std::invalid_argument("gibbs: weights must be positive");
    int64_t n = static_cast<int64_t>(weights.size()) - 1;
    std::string desc = "gibbs(N=" + std::to_string(n) +
                       ",omega=" + detail::num_str(ScalarTraits<S>::to_double(omega)) + ")";
    auto ratio = [&weights, omega](int64_t x) {
        std::size_t i = static_cast<std::size_t>(x);
        return weights[i + 1] / weights[i] * omega / ScalarTraits<S>::from_int(x + 1);
    };
    return detail::materialize_finite<S>(Support::closed(0, n), 0, ratio, n, std::move(desc));
}

// Constant-potential Gibbs measure on the whole of N: the weight cancels
// from every ratio, which reduces the density to poisson(omega).
template <class S>
DiscreteDensity<S> build_gibbs_infinite(const S& omega, const TruncationPolicy& pol = {}) {
    if (!(omega > S(0))) throw std::invalid_argument("gibbs: omega must be positive");
    std::string desc = "gibbs(N=inf,omega=" + detail::num_str(ScalarTraits<S>::to_double(omega)) + ")";
    auto ratio = [omega](int64_t x) { return omega / ScalarTraits<S>::from_int(x + 1); };
    return detail::materialize_infinite<S>(Support::upper_ray(0), 0, ratio, pol, std::move(desc));
}

// Limit law of n - rank for uniform n x n matrices over F_theta, as n -> inf:
// mass ratio q(k+1)/q(k) = theta / (theta^{k+1} - 1)^2.
template <class S>
DiscreteDensity<S> build_rank_limit(int64_t theta, const TruncationPolicy& pol = {}) {
    if (theta < 2) throw std::invalid_argument("rank_limit: need theta >= 2");
    std::string desc = "rank_limit(theta=" + std::to_string(theta) + ")";
    S th = ScalarTraits<S>::from_int(theta);
    auto ratio = [th](int64_t x) {
        S t = pow_int(th, x + 1) - S(1);
        return th / (t * t);
    };
    return detail::materialize_infinite<S>(Support::upper_ray(0), 0, ratio, pol, std::move(desc));
}

// Law of n - rank for a single uniform n x n matrix over F_theta:
// q(k+1)/q(k) = theta (1 - theta^{-(n-k)}) / (theta^{k+1} - 1)^2 on [0, n].
template <class S>
DiscreteDensity<S> build_rank_finite(int64_t theta, int64_t n) {
    if (theta < 2) throw std::invalid_argument("rank_finite: need theta >= 2");
    if (n < 1) throw std::invalid_argument("rank_finite: need n >= 1");
    std::string desc = "rank_finite(theta=" + std::to_string(theta) + ",n=" + std::to_string(n) + ")";
    S th = ScalarTraits<S>::from_int(theta);
    auto ratio = [th, n](int64_t x) {
        S t = pow_int(th, x + 1) - S(1);
        S defect = S(1) - S(1) / pow_int(th, n - x);
        return th * defect / (t * t);
    };
    return detail::materialize_finite<S>(Support::closed(0, n), 0, ratio, n, std::move(desc));
}

template <class S>
DiscreteDensity<S> build_explicit(int64_t lo, std::vector<S> pmf) {
    if (pmf.size() < 2) throw std::invalid_argument("explicit: need at least two atoms");
    for (const S& m : pmf)
        if (!(m > S(0)))
            throw std::invalid_argument("explicit: pmf entries must be positive (interval support)");
    double total = 0.0;
    for (const S& m : pmf) total += ScalarTraits<S>::to_double(m);
    if (std::fabs(total - 1.0) > 1e-9)
        throw std::invalid_argument("explicit: pmf does not sum to 1");
    int64_t hi = lo + static_cast<int64_t>(pmf.size()) - 1;
    return DiscreteDensity<S>::from_weights(Support::closed(lo, hi), lo, std::move(pmf), {}, 0.0,
                                            true, "explicit[" + std::to_string(lo) + "," +
                                                      std::to_string(hi) + "]");
}

// ---------------------------------------------------------------------------
// Untyped density specification, mirrored by the JSON density format.

enum class Family { poisson, binomial, polya_urn, ord, gibbs, rank_limit, rank_finite, explicit_pmf };

inline const char* family_name(Family f) {
    switch (f) {
        case Family::poisson: return "poisson";
        case Family::binomial: return "binomial";
        case Family::polya_urn: return "polya_urn";
        case Family::ord: return "ord";
        case Family::gibbs: return "gibbs";
        case Family::rank_limit: return "rank_limit";
        case Family::rank_finite: return "rank_finite";
        case Family::explicit_pmf: return "explicit";
    }
    return "?";
}

struct DensitySpec {
    Family family = Family::poisson;
    double lambda = 1.0;                    // poisson
    int64_t n = 1;                          // binomial / polya_urn / rank_finite
    double p = 0.5;                         // binomial
    double alpha = 1.0, beta = 1.0;         // polya_urn
    int64_t support_lo = 0, support_hi = 1; // ord / explicit
    std::vector<double> s, tau;             // ord
    std::vector<double> V;                  // gibbs potential table (empty: constant 0)
    double omega = 1.0;                     // gibbs
    std::optional<int64_t> gibbs_N;         // gibbs; nullopt = infinite (constant V only)
    int64_t theta = 2;                      // rank families
    std::vector<double> pmf;                // explicit
    TruncationPolicy truncation;
};

template <class S>
DiscreteDensity<S> build_density(const DensitySpec& spec) {
    auto conv = [](double v) { return ScalarTraits<S>::from_double(v); };
    switch (spec.family) {
        case Family::poisson:
            return build_poisson<S>(conv(spec.lambda), spec.truncation);
        case Family::binomial:
            return build_binomial<S>(spec.n, conv(spec.p));
        case Family::polya_urn:
            return build_polya<S>(spec.n, conv(spec.alpha), conv(spec.beta));
        case Family::ord: {
            std::vector<S> s, tau;
            for (double v : spec.s) s.push_back(conv(v));
            for (double v : spec.tau) tau.push_back(conv(v));
            return build_ord<S>(spec.support_lo, s, tau);
        }
        case Family::gibbs: {
            if (!spec.gibbs_N) {
                if (!spec.V.empty())
                    throw std::invalid_argument("gibbs: infinite N requires a constant potential");
                return build_gibbs_infinite<S>(conv(spec.omega), spec.truncation);
            }
            int64_t N = *spec.gibbs_N;
            if (N < 1) throw std::invalid_argument("gibbs: need N >= 1");
            if (!spec.V.empty() && spec.V.size() != static_cast<std::size_t>(N) + 1)
                throw std::invalid_argument("gibbs: potential table must have N+1 entries");
            std::vector<S> w;
            for (int64_t x = 0; x <= N; ++x) {
                double vx = spec.V.empty() ? 0.0 : spec.V[static_cast<std::size_t>(x)];
                w.push_back(conv(std::exp(vx)));
            }
            return build_gibbs<S>(w, conv(spec.omega));
        }
        case Family::rank_limit:
            return build_rank_limit<S>(spec.theta, spec.truncation);
        case Family::rank_finite:
            return build_rank_finite<S>(spec.theta, spec.n);
        case Family::explicit_pmf: {
            if (spec.pmf.size() != static_cast<std::size_t>(spec.support_hi - spec.support_lo + 1))
                throw std::invalid_argument("explicit: support does not match pmf length");
            std::vector<S> pmf;
            for (double v : spec.pmf) pmf.push_back(conv(v));
            return build_explicit<S>(spec.support_lo, std::move(pmf));
        }
    }
    throw std::invalid_argument("unknown family");
}

}  // namespace steingauge
