// Walks one Poisson approximation end to end: distances, the local Pinsker
// bounds in both directions, and the sharp-constant comparison.

#include "steingauge/steingauge.hpp"

#include <cstdio>

using namespace steingauge;

namespace {

const char* verdict(const BoundCheck& c) {
    if (c.skipped) return "skipped";
    return c.passed ? "ok" : "VIOLATED";
}

bool fine(const BoundCheck& c) { return c.skipped || c.passed; }

}  // namespace

int main() {
    using R = Rational;
    R lambda = ScalarTraits<R>::from_int(1);
    auto q = build_binomial<R>(10, ScalarTraits<R>::from_ratio(1, 10));
    auto p = detail::poisson_covering(lambda, q, TruncationPolicy{});

    std::printf("p: %s\n", p.description().c_str());
    std::printf("q: %s\n\n", q.description().c_str());

    double tv = ScalarTraits<R>::to_double(total_variation(p, q));
    auto kl = kl_divergence(q, p);
    double kg = ScalarTraits<R>::to_double(k_gen(p, q));
    std::printf("total variation        %.12f\n", tv);
    std::printf("relative entropy       %.12f\n", kl.value);
    std::printf("scaled score variance  %.12f\n\n", kg);

    BoundCheck fwd = check_forward_bound(p, q);
    std::printf("forward bound   lhs %.6f <= rhs %.6f  %s\n", fwd.lhs, fwd.rhs, verdict(fwd));
    BoundCheck bwd = check_backward_bound(p, q);
    if (bwd.skipped)
        std::printf("backward bound  skipped: %s\n", bwd.reason.c_str());
    else
        std::printf("backward bound  lhs %.6f <= rhs %.6f  %s\n", bwd.lhs, bwd.rhs, verdict(bwd));

    auto [sharp, ref] = check_poisson_constant_comparison(lambda, q, TruncationPolicy{});
    std::printf("sharp constant  lhs %.6f <= rhs %.6f  %s\n", sharp.lhs, sharp.rhs, verdict(sharp));
    std::printf("sqrt(2) route   lhs %.6f <= rhs %.6f  %s\n", ref.lhs, ref.rhs, verdict(ref));
    return fine(fwd) && fine(bwd) && fine(sharp) && fine(ref) ? 0 : 1;
}
