#pragma once

// Independent reference computations for the tests: closed-form pmfs through
// lgamma, a Stein-equation solver that marches the recurrence term by term,
// and a brute-force enumeration of matrix coranks over small prime fields.
// None of these share code paths with the library.

#include "steingauge/steingauge.hpp"

#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

namespace oracle {

inline double poisson_pmf(double lambda, int64_t x) {
    if (x < 0) return 0.0;
    return std::exp(-lambda + static_cast<double>(x) * std::log(lambda) -
                    std::lgamma(static_cast<double>(x) + 1.0));
}

inline double binomial_pmf(int64_t n, double p, int64_t x) {
    if (x < 0 || x > n) return 0.0;
    double lc = std::lgamma(static_cast<double>(n) + 1.0) -
                std::lgamma(static_cast<double>(x) + 1.0) -
                std::lgamma(static_cast<double>(n - x) + 1.0);
    return std::exp(lc + static_cast<double>(x) * std::log(p) +
                    static_cast<double>(n - x) * std::log1p(-p));
}

// Solves T_p^eta f = l - E_p[l] by marching the defining recurrence from the
// pinned edge, one value at a time.
template <class S>
std::vector<S> march_stein(const steingauge::DiscreteDensity<S>& p, steingauge::Direction dir,
                           const steingauge::TestFunction<S>& l) {
    using steingauge::Direction;
    const int64_t lo = p.lo(), hi = p.hi();
    S el(0);
    for (int64_t x = lo; x <= hi; ++x) el += p.mass(x) * l(x);
    std::vector<S> f(static_cast<std::size_t>(hi - lo + 1), S(0));
    auto at = [&](int64_t x) -> S& { return f[static_cast<std::size_t>(x - lo)]; };
    if (dir == Direction::forward) {
        // f(x+1) ratio(x) - f(x) = c(x), f(lo) = 0
        for (int64_t x = lo; x < hi; ++x) at(x + 1) = (l(x) - el + at(x)) / p.ratio(x);
    } else {
        // f(x) - f(x-1) ratio_back(x) = c(x), f(hi) = 0
        for (int64_t x = hi; x > lo; --x) at(x - 1) = (at(x) - (l(x) - el)) / p.ratio_back(x);
    }
    return f;
}

namespace detail {

// rank of an n x n matrix over F_theta by row reduction
inline int field_rank(std::vector<int>& m, int n, int theta) {
    auto inv = [&](int a) {
        for (int b = 1; b < theta; ++b)
            if (a * b % theta == 1) return b;
        return 0;
    };
    int rank = 0;
    for (int col = 0; col < n && rank < n; ++col) {
        int pivot = -1;
        for (int r = rank; r < n; ++r)
            if (m[static_cast<std::size_t>(r * n + col)] != 0) {
                pivot = r;
                break;
            }
        if (pivot < 0) continue;
        for (int c = 0; c < n; ++c)
            std::swap(m[static_cast<std::size_t>(rank * n + c)],
                      m[static_cast<std::size_t>(pivot * n + c)]);
        int iv = inv(m[static_cast<std::size_t>(rank * n + col)]);
        for (int c = 0; c < n; ++c)
            m[static_cast<std::size_t>(rank * n + c)] =
                m[static_cast<std::size_t>(rank * n + c)] * iv % theta;
        for (int r = 0; r < n; ++r) {
            if (r == rank) continue;
            int factor = m[static_cast<std::size_t>(r * n + col)];
            if (factor == 0) continue;
            for (int c = 0; c < n; ++c) {
                int v = m[static_cast<std::size_t>(r * n + c)] -
                        factor * m[static_cast<std::size_t>(rank * n + c)] % theta;
                m[static_cast<std::size_t>(r * n + c)] = ((v % theta) + theta) % theta;
            }
        }
        ++rank;
    }
    return rank;
}

}  // namespace detail

// Exact corank law of a uniform n x n matrix over F_theta by enumerating all
// theta^(n*n) matrices. Usable for theta^(n*n) up to a few thousand.
inline std::map<int64_t, steingauge::Rational> corank_law_bruteforce(int theta, int n) {
    using steingauge::Rational;
    int64_t cells = static_cast<int64_t>(n) * n;
    int64_t total = 1;
    for (int64_t i = 0; i < cells; ++i) total *= theta;
    std::map<int64_t, int64_t> counts;
    std::vector<int> m(static_cast<std::size_t>(cells));
    for (int64_t code = 0; code < total; ++code) {
        int64_t c = code;
        for (int64_t i = 0; i < cells; ++i) {
            m[static_cast<std::size_t>(i)] = static_cast<int>(c % theta);
            c /= theta;
        }
        counts[n - detail::field_rank(m, n, theta)] += 1;
    }
    std::map<int64_t, Rational> law;
    for (auto& [corank, cnt] : counts) law[corank] = Rational(cnt) / Rational(total);
    return law;
}

// Partial product prod_{i=1..terms} (1 - theta^{-i}), the mass the limiting
// corank law puts at zero.
inline steingauge::Rational corank_zero_mass(int64_t theta, int terms) {
    using steingauge::Rational;
    Rational prod(1);
    Rational power(1);
    for (int i = 1; i <= terms; ++i) {
        power /= Rational(theta);
        prod *= Rational(1) - power;
    }
    return prod;
}

}  // namespace oracle
