#pragma once

#include <concepts>
#include <string>

#include "amdist/rational.hpp"
#include "amdist/rational_function.hpp"

namespace amdist {

// The two concrete exact rings all other modules are instantiated over:
// big rationals and multivariate rational functions over big rationals.
// Both are fields, so a single contract covers ring ops plus division.
template <typename R>
concept ScalarRing = requires(R a, R b) {
    { R() };
    { R(1) };
    { a + b } -> std::convertible_to<R>;
    { a - b } -> std::convertible_to<R>;
    { a * b } -> std::convertible_to<R>;
    { a / b } -> std::convertible_to<R>;
    { -a } -> std::convertible_to<R>;
    { a == b } -> std::convertible_to<bool>;
};

template <ScalarRing R>
struct RingTraits;

template <>
struct RingTraits<Rational> {
    static Rational zero() { return Rational(0); }
    static Rational one() { return Rational(1); }
    static Rational from_int(long v) { return Rational(v); }
    static bool is_zero(const Rational& r) { return r.is_zero(); }
    static std::string str(const Rational& r) { return to_string(r); }
    static constexpr bool symbolic = false;
};

template <>
struct RingTraits<RationalFunction> {
    static RationalFunction zero() { return RationalFunction(); }
    static RationalFunction one() { return RationalFunction(1); }
    static RationalFunction from_int(long v) { return RationalFunction(Rational(v)); }
    static bool is_zero(const RationalFunction& r) { return r.is_zero(); }
    static std::string str(const RationalFunction& r) { return r.str(); }
    static constexpr bool symbolic = true;
};

template <ScalarRing R>
bool is_zero(const R& v) {
    return RingTraits<R>::is_zero(v);
}

template <ScalarRing R>
R ring_pow(const R& base, long e) {
    if (e < 0) return RingTraits<R>::one() / ring_pow(base, -e);
    R result = RingTraits<R>::one();
    R b = base;
    unsigned long k = static_cast<unsigned long>(e);
    while (k) {
        if (k & 1) result = result * b;
        b = b * b;
        k >>= 1;
    }
    return result;
}

}  // namespace amdist
