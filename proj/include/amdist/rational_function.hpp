#pragma once

#include <map>
#include <string>

#include "amdist/polynomial.hpp"

namespace amdist {

// Element of Q(x_1, ..., x_k): a pair of sparse polynomials num/den with
// den never zero. Kept only loosely normalized: equality goes through
// cross-multiplication, gcd reduction kicks in past a size threshold.
class RationalFunction {
public:
    RationalFunction() : num_(), den_(SparsePoly::one()) {}
    /* implicit */ RationalFunction(int v) : num_(Rational(v)), den_(SparsePoly::one()) {}
    /* implicit */ RationalFunction(const Rational& v) : num_(v), den_(SparsePoly::one()) {}
    /* implicit */ RationalFunction(const SparsePoly& p) : num_(p), den_(SparsePoly::one()) {}
    RationalFunction(SparsePoly num, SparsePoly den);

    static RationalFunction variable(const std::string& name) {
        return RationalFunction(SparsePoly::variable(name));
    }

    const SparsePoly& num() const { return num_; }
    const SparsePoly& den() const { return den_; }

    bool is_zero() const { return num_.is_zero(); }
    bool is_constant() const { return num_.is_constant() && den_.is_constant(); }
    // Requires is_constant().
    Rational constant_value() const { return num_.constant_value() / den_.constant_value(); }
    bool is_polynomial() const { return den_.is_constant(); }
    // Requires is_polynomial().
    SparsePoly polynomial_value() const {
        return num_ * (Rational(1) / den_.constant_value());
    }

    RationalFunction operator-() const;
    RationalFunction operator+(const RationalFunction& o) const;
    RationalFunction operator-(const RationalFunction& o) const;
    RationalFunction operator*(const RationalFunction& o) const;
    RationalFunction operator/(const RationalFunction& o) const;
    RationalFunction& operator+=(const RationalFunction& o) { *this = *this + o; return *this; }
    RationalFunction& operator-=(const RationalFunction& o) { *this = *this - o; return *this; }
    RationalFunction& operator*=(const RationalFunction& o) { *this = *this * o; return *this; }
    RationalFunction& operator/=(const RationalFunction& o) { *this = *this / o; return *this; }

    // Mathematical equality via cross-multiplication.
    bool operator==(const RationalFunction& o) const;
    bool operator!=(const RationalFunction& o) const { return !(*this == o); }

    // Fully reduce num/den by their gcd (canonical-ish form).
    void reduce();

    Rational evaluate(const std::map<uint32_t, Rational>& point) const;
    RationalFunction substitute(uint32_t var, const Rational& value) const;

    std::string str() const;

    // Term-count threshold above which arithmetic results get gcd-reduced.
    static size_t reduce_threshold;

private:
    void cheap_normalize();

    SparsePoly num_, den_;
};

}  // namespace amdist
