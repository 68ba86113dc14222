#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "amdist/rational.hpp"

namespace amdist {

// Process-wide intern table for indeterminate names. Ids are assigned in
// creation order; all monomial comparisons go through ids, all printing
// through names.
class VarPool {
public:
    static VarPool& instance();

    uint32_t intern(const std::string& name);
    const std::string& name(uint32_t id) const;
    std::optional<uint32_t> lookup(const std::string& name) const;
    size_t size() const { return names_.size(); }

private:
    std::vector<std::string> names_;
    std::map<std::string, uint32_t> ids_;
};

// Sparse exponent vector: (var id, exponent) pairs, sorted by id,
// exponents strictly positive. Empty vector is the constant monomial.
class Monomial {
public:
    using Pairs = std::vector<std::pair<uint32_t, uint32_t>>;

    Monomial() = default;
    explicit Monomial(Pairs pairs) : pairs_(std::move(pairs)) {}
    static Monomial var(uint32_t id, uint32_t exp = 1) {
        Monomial m;
        if (exp > 0) m.pairs_.push_back({id, exp});
        return m;
    }

    const Pairs& pairs() const { return pairs_; }
    bool is_one() const { return pairs_.empty(); }
    uint32_t total_degree() const;
    uint32_t degree_in(uint32_t var) const;

    Monomial operator*(const Monomial& o) const;
    // Divides exactly or returns nullopt.
    std::optional<Monomial> divide(const Monomial& o) const;
    bool divisible_by(const Monomial& o) const;
    Monomial gcd(const Monomial& o) const;
    // Returns the monomial with `var` removed (for coefficient collection).
    Monomial without(uint32_t var) const;

    bool operator==(const Monomial& o) const { return pairs_ == o.pairs_; }
    // Graded lexicographic order (a genuine monomial order: compatible
    // with multiplication, so exact division terminates).
    static int compare(const Monomial& a, const Monomial& b);

private:
    Pairs pairs_;
};

struct MonomialLess {
    bool operator()(const Monomial& a, const Monomial& b) const {
        return Monomial::compare(a, b) < 0;
    }
};

// Sparse multivariate polynomial with exact rational coefficients.
// Canonical form: no zero coefficients stored, terms keyed by monomial
// in graded-lex order.
class SparsePoly {
public:
    using TermMap = std::map<Monomial, Rational, MonomialLess>;

    SparsePoly() = default;
    explicit SparsePoly(const Rational& c);
    static SparsePoly variable(const std::string& name);
    static SparsePoly variable(uint32_t id);
    static SparsePoly zero() { return SparsePoly(); }
    static SparsePoly one() { return SparsePoly(Rational(1)); }

    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    // Requires is_constant().
    Rational constant_value() const;
    size_t term_count() const { return terms_.size(); }
    uint32_t total_degree() const;
    uint32_t degree_in(uint32_t var) const;
    bool contains_var(uint32_t var) const;
    std::vector<uint32_t> variables() const;

    SparsePoly operator-() const;
    SparsePoly operator+(const SparsePoly& o) const;
    SparsePoly operator-(const SparsePoly& o) const;
    SparsePoly operator*(const SparsePoly& o) const;
    SparsePoly& operator+=(const SparsePoly& o);
    SparsePoly& operator-=(const SparsePoly& o);
    SparsePoly& operator*=(const SparsePoly& o) { *this = *this * o; return *this; }
    SparsePoly operator*(const Rational& c) const;
    bool operator==(const SparsePoly& o) const { return terms_ == o.terms_; }
    bool operator!=(const SparsePoly& o) const { return !(*this == o); }

    // Leading term in graded-lex order. Requires nonzero.
    const Monomial& leading_monomial() const;
    const Rational& leading_coeff() const;

    // Exact division in Q[vars]; nullopt when the division is not exact.
    std::optional<SparsePoly> divide_exact(const SparsePoly& divisor) const;

    SparsePoly pow(uint32_t e) const;

    // Full evaluation; every variable present must be assigned.
    Rational evaluate(const std::map<uint32_t, Rational>& point) const;
    // Substitutes one variable by a rational, keeping the rest symbolic.
    SparsePoly substitute(uint32_t var, const Rational& value) const;
    // Coefficients by degree in `var`; the returned polys do not mention `var`.
    std::map<uint32_t, SparsePoly> collect(uint32_t var) const;

    std::string str() const;

    void add_term(const Monomial& m, const Rational& c);

private:
    TermMap terms_;
};

inline SparsePoly operator*(const Rational& c, const SparsePoly& p) { return p * c; }

// Multivariate gcd over Q (primitive pseudo-remainder sequences). Result is
// primitive with positive leading rational coefficient; gcd(0,0) = 0.
SparsePoly poly_gcd(const SparsePoly& a, const SparsePoly& b);

}  // namespace amdist
