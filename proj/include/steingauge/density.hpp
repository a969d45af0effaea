#pragma once

// Discrete densities on integer-interval supports.
//
// A density is materialized over a finite window [lo, hi].  Families with
// infinite support are truncated so that the (upper bound on the) dropped
// tail mass stays below a policy threshold, then renormalized; the bound is
// recorded on the density so downstream checks can widen their tolerances.
// The reciprocal convention 1/p(x) = 0 off support is baked into mass-ratio
// accessors: ratio(x) and ratio_back(x) vanish whenever either endpoint
// leaves the window.

#include "steingauge/scalar.hpp"

#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace steingauge {

using std::int64_t;

// Integer extended with +/- infinity, for declared supports.
struct ExtInt {
    bool finite = true;
    int64_t value = 0;

    static ExtInt at(int64_t v) { return ExtInt{true, v}; }
    static ExtInt pos_inf() { return ExtInt{false, 1}; }
    static ExtInt neg_inf() { return ExtInt{false, -1}; }

    bool is_pos_inf() const { return !finite && value > 0; }
    bool is_neg_inf() const { return !finite && value < 0; }

    friend bool operator==(const ExtInt& a, const ExtInt& b) {
        if (a.finite != b.finite) return false;
        return a.finite ? a.value == b.value : (a.value > 0) == (b.value > 0);
    }

    std::string str() const {
        if (is_pos_inf()) return "inf";
        if (is_neg_inf()) return "-inf";
        return std::to_string(value);
    }
};

// Declared support: an integer interval with at least two points.
struct Support {
    ExtInt lower;
    ExtInt upper;

    Support(ExtInt lo, ExtInt hi) : lower(lo), upper(hi) {
        if (lower.is_pos_inf() || upper.is_neg_inf())
            throw std::invalid_argument("support: empty interval");
        if (lower.finite && upper.finite && lower.value >= upper.value)
            throw std::invalid_argument("support: need lower < upper (single points rejected)");
    }
    static Support closed(int64_t a, int64_t b) { return Support(ExtInt::at(a), ExtInt::at(b)); }
    static Support upper_ray(int64_t a) { return Support(ExtInt::at(a), ExtInt::pos_inf()); }
};

struct TruncationPolicy {
    double tail_mass = 1e-14;
    // Explicit window override; only meaningful for infinite declared
    // supports.  Construction fails if the window cannot hold the tail
    // bound under tail_mass.
    std::optional<std::pair<int64_t, int64_t>> window;
    bool renormalize = true;
};

struct SupportError : std::runtime_error {
    explicit SupportError(const std::string& m) : std::runtime_error(m) {}
};

template <class S>
class DiscreteDensity {
  public:
    using scalar_type = S;

    // weights: positive, indexed from lo; they are normalized here.
    // ratios must have size weights.size()-1 when given; otherwise they are
    // derived from the weights.  dropped is an upper bound on the true mass
    // outside [lo, lo+weights.size()-1] relative to the full distribution.
    static DiscreteDensity from_weights(Support declared, int64_t lo, std::vector<S> weights,
                                        std::vector<S> ratios, double dropped, bool renormalized,
                                        std::string description) {
        if (weights.size() < 2) throw std::invalid_argument(description + ": window has fewer than two points");
        for (const S& w : weights)
            if (!(w > S(0))) throw std::invalid_argument(description + ": non-positive mass in window");
        if (ratios.empty()) {
            ratios.reserve(weights.size() - 1);
            for (std::size_t i = 0; i + 1 < weights.size(); ++i) ratios.push_back(weights[i + 1] / weights[i]);
        } else if (ratios.size() != weights.size() - 1) {
            throw std::invalid_argument(description + ": ratio table size mismatch");
        }
        S total(0);
        for (const S& w : weights) total += w;
        for (S& w : weights) w /= total;
        DiscreteDensity d;
        d.declared_ = declared;
        d.lo_ = lo;
        d.mass_ = std::move(weights);
        d.ratio_ = std::move(ratios);
        d.dropped_tail_ = dropped;
        d.renormalized_ = renormalized;
        d.description_ = std::move(description);
        return d;
    }

    int64_t lo() const { return lo_; }
    int64_t hi() const { return lo_ + static_cast<int64_t>(mass_.size()) - 1; }
    const Support& declared() const { return *declared_; }
    bool truncated_lower() const { return !declared_->lower.finite; }
    bool truncated_upper() const { return !declared_->upper.finite; }
    double dropped_tail() const { return dropped_tail_; }
    bool renormalized() const { return renormalized_; }
    const std::string& description() const { return description_; }

    bool in_support(int64_t x) const { return x >= lo() && x <= hi(); }

    S mass(int64_t x) const { return in_support(x) ? mass_[idx(x)] : S(0); }

    // 1/p(x) with the off-support convention.
    S recip_mass(int64_t x) const { return in_support(x) ? S(1) / mass_[idx(x)] : S(0); }

    // p(x+1)/p(x); zero unless both x and x+1 lie in the window.
    S ratio(int64_t x) const {
        if (x < lo() || x >= hi()) return S(0);
        return ratio_[idx(x)];
    }

    // p(x-1)/p(x); zero unless both x-1 and x lie in the window.
    S ratio_back(int64_t x) const {
        if (x <= lo() || x > hi()) return S(0);
        return S(1) / ratio_[idx(x) - 1];
    }

    // P(X <= z) over the window.
    S cdf(int64_t z) const {
        S acc(0);
        for (int64_t x = lo(); x <= std::min(z, hi()); ++x) acc += mass_[idx(x)];
        return acc;
    }

    S total_mass() const {
        S acc(0);
        for (const S& m : mass_) acc += m;
        return acc;
    }

  private:
    DiscreteDensity() = default;
    std::size_t idx(int64_t x) const { return static_cast<std::size_t>(x - lo_); }

    std::optional<Support> declared_;
    int64_t lo_ = 0;
    std::vector<S> mass_;
    std::vector<S> ratio_;
    double dropped_tail_ = 0.0;
    bool renormalized_ = true;
    std::string description_;
};

template <class S>
struct Moments {
    S mean;
    S variance;
};

template <class S>
Moments<S> moments(const DiscreteDensity<S>& d) {
    S mean(0);
    for (int64_t x = d.lo(); x <= d.hi(); ++x) mean += d.mass(x) * ScalarTraits<S>::from_int(x);
    S var(0);
    for (int64_t x = d.lo(); x <= d.hi(); ++x) {
        S c = ScalarTraits<S>::from_int(x) - mean;
        var += d.mass(x) * c * c;
    }
    return {mean, var};
}

// Materialized-window inclusion: every q atom must be a p atom.
template <class S>
bool window_subset(const DiscreteDensity<S>& q, const DiscreteDensity<S>& p) {
    return q.lo() >= p.lo() && q.hi() <= p.hi();
}

template <class S>
void require_window_subset(const DiscreteDensity<S>& q, const DiscreteDensity<S>& p,
                           const char* where) {
    if (!window_subset(q, p))
        throw SupportError(std::string(where) + ": support precondition S_q within S_p violated ([" +
                           std::to_string(q.lo()) + "," + std::to_string(q.hi()) + "] vs [" +
                           std::to_string(p.lo()) + "," + std::to_string(p.hi()) + "])");
}

}  // namespace steingauge
