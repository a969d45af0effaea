#pragma once

// Scalar backends for all density / operator computations.  Two are
// supported: exact rationals (arbitrary precision, no rounding anywhere)
// and plain doubles.  Code is templated on the scalar type S and consults
// ScalarTraits<S> for the few operations that differ.

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace steingauge {

// Expression templates stay off so every arithmetic expression yields a
// value; lambdas with deduced return types would otherwise hand back proxy
// objects referencing dead temporaries.
using Rational =
    boost::multiprecision::number<boost::multiprecision::backends::rational_adaptor<
                                      boost::multiprecision::backends::cpp_int_backend<>>,
                                  boost::multiprecision::et_off>;

template <class S>
struct ScalarTraits;

template <>
struct ScalarTraits<double> {
    static constexpr bool is_exact = false;
    static double from_int(std::int64_t n) { return static_cast<double>(n); }
    static double from_ratio(std::int64_t n, std::int64_t d) {
        return static_cast<double>(n) / static_cast<double>(d);
    }
    // Doubles pass through unchanged.
    static double from_double(double x) { return x; }
    static double to_double(double x) { return x; }
    static double abs(double x) { return std::fabs(x); }
    static const char* name() { return "float"; }
};

template <>
struct ScalarTraits<Rational> {
    static constexpr bool is_exact = true;
    static Rational from_int(std::int64_t n) { return Rational(n); }
    static Rational from_ratio(std::int64_t n, std::int64_t d) {
        if (d == 0) throw std::domain_error("rational with zero denominator");
        return Rational(n, d);
    }
    // Every finite double is a dyadic rational; the conversion is exact.
    static Rational from_double(double x) {
        if (!std::isfinite(x)) throw std::domain_error("non-finite value for rational backend");
        return Rational(x);
    }
    static double to_double(const Rational& x) { return static_cast<double>(x); }
    static Rational abs(const Rational& x) { return boost::multiprecision::abs(x); }
    static const char* name() { return "rational"; }
};

template <class S>
double to_double(const S& x) { return ScalarTraits<S>::to_double(x); }

// x^k for integer k (k may be negative; x != 0 then).
template <class S>
S pow_int(S x, std::int64_t k) {
    if (k < 0) {
        if (x == S(0)) throw std::domain_error("pow_int: negative power of zero");
        return S(1) / pow_int(x, -k);
    }
    S r(1);
    while (k > 0) {
        if (k & 1) r *= x;
        x *= x;
        k >>= 1;
    }
    return r;
}

}  // namespace steingauge
