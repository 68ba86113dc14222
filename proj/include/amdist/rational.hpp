#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <string>

#include "amdist/errors.hpp"

namespace amdist {

// Exact arbitrary-precision rational, stored canonically (lowest terms,
// positive denominator) by the GMP backend.
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;
using BigInt = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                             boost::multiprecision::et_off>;

inline bool is_zero(const Rational& r) { return r.is_zero(); }

inline Rational rational_pow(const Rational& base, long e) {
    if (e < 0) {
        if (is_zero(base)) throw DenominatorVanishes("0 raised to a negative power");
        return Rational(1) / rational_pow(base, -e);
    }
    Rational result(1), b = base;
    unsigned long k = static_cast<unsigned long>(e);
    while (k) {
        if (k & 1) result *= b;
        b *= b;
        k >>= 1;
    }
    return result;
}

// Renders as "p" or "p/q".
inline std::string to_string(const Rational& r) {
    if (denominator(r) == 1) return numerator(r).str();
    return numerator(r).str() + "/" + denominator(r).str();
}

}  // namespace amdist
