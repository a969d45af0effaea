#pragma once

// Monte Carlo side of the matrix-rank experiments: sample uniform n x n
// matrices over the prime field F_theta, compute n - rank by Gaussian
// elimination mod theta, and histogram the corank.  Sampling is driven by a
// seeded mt19937_64 and uses plain modulo reduction, so a given seed yields
// the same stream on every platform.

#include "steingauge/density.hpp"

#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace steingauge {

namespace detail {

inline int64_t mod_pow(int64_t base, int64_t exp, int64_t m) {
    int64_t r = 1 % m;
    base %= m;
    while (exp > 0) {
        if (exp & 1) r = r * base % m;
        base = base * base % m;
        exp >>= 1;
    }
    return r;
}

inline bool is_prime(int64_t v) {
    if (v < 2) return false;
    for (int64_t d = 2; d * d <= v; ++d)
        if (v % d == 0) return false;
    return true;
}

}  // namespace detail

// Rank of a square matrix with entries reduced mod the prime theta.
// The matrix is row-major and is consumed in place.
inline int field_rank(std::vector<int64_t>& m, int n, int64_t theta) {
    int rank = 0;
    for (int col = 0; col < n && rank < n; ++col) {
        int pivot = -1;
        for (int r = rank; r < n; ++r)
            if (m[static_cast<std::size_t>(r) * n + col] % theta != 0) {
                pivot = r;
                break;
            }
        if (pivot < 0) continue;
        for (int c = 0; c < n; ++c)
            std::swap(m[static_cast<std::size_t>(pivot) * n + c],
                      m[static_cast<std::size_t>(rank) * n + c]);
        int64_t inv = detail::mod_pow(m[static_cast<std::size_t>(rank) * n + col], theta - 2, theta);
        for (int r = rank + 1; r < n; ++r) {
            int64_t factor = m[static_cast<std::size_t>(r) * n + col] % theta * inv % theta;
            if (factor == 0) continue;
            for (int c = col; c < n; ++c) {
                int64_t& cell = m[static_cast<std::size_t>(r) * n + c];
                cell = ((cell - factor * m[static_cast<std::size_t>(rank) * n + c]) % theta + theta) % theta;
            }
        }
        ++rank;
    }
    return rank;
}

struct EmpiricalPmf {
    int64_t lo = 0;
    std::vector<double> mass;  // indexed from lo; entries may be zero

    double at(int64_t x) const {
        int64_t i = x - lo;
        if (i < 0 || i >= static_cast<int64_t>(mass.size())) return 0.0;
        return mass[static_cast<std::size_t>(i)];
    }
};

// Empirical pmf of n - rank over `count` uniform n x n matrices mod theta.
inline EmpiricalPmf rank_sample(int64_t theta, int n, int64_t count, std::uint64_t seed) {
    if (!detail::is_prime(theta)) throw std::invalid_argument("rank_sample: theta must be prime");
    if (n < 1) throw std::invalid_argument("rank_sample: need n >= 1");
    if (count < 1) throw std::invalid_argument("rank_sample: need count >= 1");
    std::mt19937_64 gen(seed);
    std::vector<int64_t> counts(static_cast<std::size_t>(n) + 1, 0);
    std::vector<int64_t> m(static_cast<std::size_t>(n) * n);
    for (int64_t i = 0; i < count; ++i) {
        for (auto& cell : m) cell = static_cast<int64_t>(gen() % static_cast<std::uint64_t>(theta));
        counts[static_cast<std::size_t>(n - field_rank(m, n, theta))] += 1;
    }
    EmpiricalPmf e;
    e.lo = 0;
    e.mass.resize(counts.size());
    for (std::size_t k = 0; k < counts.size(); ++k)
        e.mass[k] = static_cast<double>(counts[k]) / static_cast<double>(count);
    return e;
}

// Total variation between an empirical pmf and an exact density.
template <class S>
double empirical_tv(const EmpiricalPmf& e, const DiscreteDensity<S>& d) {
    int64_t lo = std::min(e.lo, d.lo());
    int64_t hi = std::max(e.lo + static_cast<int64_t>(e.mass.size()) - 1, d.hi());
    double acc = 0.0;
    for (int64_t x = lo; x <= hi; ++x)
        acc += std::fabs(e.at(x) - ScalarTraits<S>::to_double(d.mass(x)));
    return acc / 2.0;
}

}  // namespace steingauge
