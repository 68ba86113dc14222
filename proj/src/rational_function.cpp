#include "amdist/rational_function.hpp"

#include "amdist/errors.hpp"

namespace amdist {

size_t RationalFunction::reduce_threshold = 512;

RationalFunction::RationalFunction(SparsePoly num, SparsePoly den)
    : num_(std::move(num)), den_(std::move(den)) {
    if (den_.is_zero()) throw DenominatorVanishes("rational function with zero denominator");
    cheap_normalize();
}

void RationalFunction::cheap_normalize() {
    if (num_.is_zero()) {
        den_ = SparsePoly::one();
        return;
    }
    if (den_.is_constant()) {
        Rational c = den_.constant_value();
        if (c != 1) {
            num_ = num_ * (Rational(1) / c);
            den_ = SparsePoly::one();
        }
        return;
    }
    // Cancel common monomial factor.
    Monomial g;
    bool first = true;
    for (auto& [m, c] : num_.terms()) {
        g = first ? m : g.gcd(m);
        first = false;
        if (g.is_one()) break;
    }
    if (!g.is_one()) {
        for (auto& [m, c] : den_.terms()) {
            g = g.gcd(m);
            if (g.is_one()) break;
        }
    }
    if (!g.is_one()) {
        SparsePoly mono;
        mono.add_term(g, Rational(1));
        num_ = *num_.divide_exact(mono);
        den_ = *den_.divide_exact(mono);
    }
    if (num_ == den_) {
        num_ = SparsePoly::one();
        den_ = SparsePoly::one();
        return;
    }
    // Opportunistic exact cancellations before resorting to a real gcd.
    if (auto q = num_.divide_exact(den_)) {
        num_ = std::move(*q);
        den_ = SparsePoly::one();
        return;
    }
    if (num_.term_count() + den_.term_count() > reduce_threshold) reduce();
    // Scale so the denominator's leading coefficient is one.
    Rational lc = den_.leading_coeff();
    if (lc != 1) {
        Rational inv = Rational(1) / lc;
        num_ = num_ * inv;
        den_ = den_ * inv;
    }
}

void RationalFunction::reduce() {
    if (num_.is_zero() || den_.is_constant()) return;
    SparsePoly g = poly_gcd(num_, den_);
    if (!g.is_constant()) {
        num_ = *num_.divide_exact(g);
        den_ = *den_.divide_exact(g);
    }
    if (den_.is_constant()) {
        Rational c = den_.constant_value();
        num_ = num_ * (Rational(1) / c);
        den_ = SparsePoly::one();
    }
}

RationalFunction RationalFunction::operator-() const {
    RationalFunction out;
    out.num_ = -num_;
    out.den_ = den_;
    return out;
}

RationalFunction RationalFunction::operator+(const RationalFunction& o) const {
    if (den_ == o.den_) return RationalFunction(num_ + o.num_, den_);
    return RationalFunction(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

RationalFunction RationalFunction::operator-(const RationalFunction& o) const {
    if (den_ == o.den_) return RationalFunction(num_ - o.num_, den_);
    return RationalFunction(num_ * o.den_ - o.num_ * den_, den_ * o.den_);
}

RationalFunction RationalFunction::operator*(const RationalFunction& o) const {
    return RationalFunction(num_ * o.num_, den_ * o.den_);
}

RationalFunction RationalFunction::operator/(const RationalFunction& o) const {
    if (o.is_zero()) throw DenominatorVanishes("division by zero rational function");
    return RationalFunction(num_ * o.den_, den_ * o.num_);
}

bool RationalFunction::operator==(const RationalFunction& o) const {
    if (den_ == o.den_) return num_ == o.num_;
    return num_ * o.den_ == o.num_ * den_;
}

Rational RationalFunction::evaluate(const std::map<uint32_t, Rational>& point) const {
    Rational d = den_.evaluate(point);
    if (amdist::is_zero(d)) throw DenominatorVanishes("denominator vanishes at sample point");
    return num_.evaluate(point) / d;
}

RationalFunction RationalFunction::substitute(uint32_t var, const Rational& value) const {
    SparsePoly d = den_.substitute(var, value);
    if (d.is_zero()) throw DenominatorVanishes("denominator vanishes under substitution");
    return RationalFunction(num_.substitute(var, value), std::move(d));
}

std::string RationalFunction::str() const {
    if (den_.is_constant() && den_.constant_value() == 1) {
        if (num_.term_count() > 1) return "(" + num_.str() + ")";
        return num_.str();
    }
    std::string n = num_.term_count() > 1 ? "(" + num_.str() + ")" : num_.str();
    std::string d = den_.term_count() > 1 ? "(" + den_.str() + ")" : den_.str();
    return n + "/" + d;
}

}  // namespace amdist
