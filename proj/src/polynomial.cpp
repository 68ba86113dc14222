#include "amdist/polynomial.hpp"

#include <algorithm>
#include <sstream>

#include "amdist/errors.hpp"

namespace amdist {

VarPool& VarPool::instance() {
    static VarPool pool;
    return pool;
}

uint32_t VarPool::intern(const std::string& name) {
    auto it = ids_.find(name);
    if (it != ids_.end()) return it->second;
    uint32_t id = static_cast<uint32_t>(names_.size());
    names_.push_back(name);
    ids_.emplace(name, id);
    return id;
}

const std::string& VarPool::name(uint32_t id) const { return names_.at(id); }

std::optional<uint32_t> VarPool::lookup(const std::string& name) const {
    auto it = ids_.find(name);
    if (it == ids_.end()) return std::nullopt;
    return it->second;
}

uint32_t Monomial::total_degree() const {
    uint32_t d = 0;
    for (auto& [v, e] : pairs_) d += e;
    return d;
}

uint32_t Monomial::degree_in(uint32_t var) const {
    for (auto& [v, e] : pairs_)
        if (v == var) return e;
    return 0;
}

Monomial Monomial::operator*(const Monomial& o) const {
    Pairs out;
    out.reserve(pairs_.size() + o.pairs_.size());
    size_t i = 0, j = 0;
    while (i < pairs_.size() && j < o.pairs_.size()) {
        if (pairs_[i].first < o.pairs_[j].first) {
            out.push_back(pairs_[i++]);
        } else if (pairs_[i].first > o.pairs_[j].first) {
            out.push_back(o.pairs_[j++]);
        } else {
            out.push_back({pairs_[i].first, pairs_[i].second + o.pairs_[j].second});
            ++i;
            ++j;
        }
    }
    while (i < pairs_.size()) out.push_back(pairs_[i++]);
    while (j < o.pairs_.size()) out.push_back(o.pairs_[j++]);
    return Monomial(std::move(out));
}

std::optional<Monomial> Monomial::divide(const Monomial& o) const {
    Pairs out;
    size_t i = 0;
    for (auto& [v, e] : o.pairs_) {
        while (i < pairs_.size() && pairs_[i].first < v) out.push_back(pairs_[i++]);
        if (i >= pairs_.size() || pairs_[i].first != v || pairs_[i].second < e)
            return std::nullopt;
        if (pairs_[i].second > e) out.push_back({v, pairs_[i].second - e});
        ++i;
    }
    while (i < pairs_.size()) out.push_back(pairs_[i++]);
    return Monomial(std::move(out));
}

bool Monomial::divisible_by(const Monomial& o) const {
    size_t i = 0;
    for (auto& [v, e] : o.pairs_) {
        while (i < pairs_.size() && pairs_[i].first < v) ++i;
        if (i >= pairs_.size() || pairs_[i].first != v || pairs_[i].second < e) return false;
    }
    return true;
}

Monomial Monomial::gcd(const Monomial& o) const {
    Pairs out;
    size_t i = 0, j = 0;
    while (i < pairs_.size() && j < o.pairs_.size()) {
        if (pairs_[i].first < o.pairs_[j].first) {
            ++i;
        } else if (pairs_[i].first > o.pairs_[j].first) {
            ++j;
        } else {
            out.push_back({pairs_[i].first, std::min(pairs_[i].second, o.pairs_[j].second)});
            ++i;
            ++j;
        }
    }
    return Monomial(std::move(out));
}

Monomial Monomial::without(uint32_t var) const {
    Pairs out;
    for (auto& [v, e] : pairs_)
        if (v != var) out.push_back({v, e});
    return Monomial(std::move(out));
}

int Monomial::compare(const Monomial& a, const Monomial& b) {
    uint32_t da = a.total_degree(), db = b.total_degree();
    if (da != db) return da < db ? -1 : 1;
    // Same total degree: lex with smaller var ids more significant,
    // higher exponent on the most significant differing var wins.
    size_t i = 0, j = 0;
    while (i < a.pairs_.size() && j < b.pairs_.size()) {
        if (a.pairs_[i].first < b.pairs_[j].first) return 1;   // a has the smaller var
        if (a.pairs_[i].first > b.pairs_[j].first) return -1;
        if (a.pairs_[i].second != b.pairs_[j].second)
            return a.pairs_[i].second < b.pairs_[j].second ? -1 : 1;
        ++i;
        ++j;
    }
    if (i < a.pairs_.size()) return 1;
    if (j < b.pairs_.size()) return -1;
    return 0;
}

SparsePoly::SparsePoly(const Rational& c) {
    if (!amdist::is_zero(c)) terms_.emplace(Monomial(), c);
}

SparsePoly SparsePoly::variable(const std::string& name) {
    return variable(VarPool::instance().intern(name));
}

SparsePoly SparsePoly::variable(uint32_t id) {
    SparsePoly p;
    p.terms_.emplace(Monomial::var(id), Rational(1));
    return p;
}

bool SparsePoly::is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_one());
}

Rational SparsePoly::constant_value() const {
    if (terms_.empty()) return Rational(0);
    return terms_.begin()->second;
}

uint32_t SparsePoly::total_degree() const {
    uint32_t d = 0;
    for (auto& [m, c] : terms_) d = std::max(d, m.total_degree());
    return d;
}

uint32_t SparsePoly::degree_in(uint32_t var) const {
    uint32_t d = 0;
    for (auto& [m, c] : terms_) d = std::max(d, m.degree_in(var));
    return d;
}

bool SparsePoly::contains_var(uint32_t var) const {
    for (auto& [m, c] : terms_)
        if (m.degree_in(var) > 0) return true;
    return false;
}

std::vector<uint32_t> SparsePoly::variables() const {
    std::vector<uint32_t> vars;
    for (auto& [m, c] : terms_)
        for (auto& [v, e] : m.pairs()) vars.push_back(v);
    std::sort(vars.begin(), vars.end());
    vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
    return vars;
}

void SparsePoly::add_term(const Monomial& m, const Rational& c) {
    if (amdist::is_zero(c)) return;
    auto [it, inserted] = terms_.emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (amdist::is_zero(it->second)) terms_.erase(it);
    }
}

SparsePoly SparsePoly::operator-() const {
    SparsePoly out;
    for (auto& [m, c] : terms_) out.terms_.emplace(m, -c);
    return out;
}

SparsePoly SparsePoly::operator+(const SparsePoly& o) const {
    SparsePoly out = *this;
    out += o;
    return out;
}

SparsePoly SparsePoly::operator-(const SparsePoly& o) const {
    SparsePoly out = *this;
    out -= o;
    return out;
}

SparsePoly& SparsePoly::operator+=(const SparsePoly& o) {
    for (auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
}

SparsePoly& SparsePoly::operator-=(const SparsePoly& o) {
    for (auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
}

SparsePoly SparsePoly::operator*(const SparsePoly& o) const {
    SparsePoly out;
    if (terms_.empty() || o.terms_.empty()) return out;
    for (auto& [m1, c1] : terms_)
        for (auto& [m2, c2] : o.terms_) out.add_term(m1 * m2, c1 * c2);
    return out;
}

SparsePoly SparsePoly::operator*(const Rational& c) const {
    SparsePoly out;
    if (amdist::is_zero(c)) return out;
    for (auto& [m, co] : terms_) out.terms_.emplace(m, co * c);
    return out;
}

const Monomial& SparsePoly::leading_monomial() const { return terms_.rbegin()->first; }
const Rational& SparsePoly::leading_coeff() const { return terms_.rbegin()->second; }

std::optional<SparsePoly> SparsePoly::divide_exact(const SparsePoly& divisor) const {
    if (divisor.is_zero()) return std::nullopt;
    if (is_zero()) return SparsePoly();
    SparsePoly quotient;
    SparsePoly rem = *this;
    const Monomial& dlm = divisor.leading_monomial();
    const Rational& dlc = divisor.leading_coeff();
    while (!rem.is_zero()) {
        auto q = rem.leading_monomial().divide(dlm);
        if (!q) return std::nullopt;
        Rational qc = rem.leading_coeff() / dlc;
        SparsePoly t;
        t.terms_.emplace(*q, qc);
        quotient += t;
        rem -= t * divisor;
    }
    return quotient;
}

SparsePoly SparsePoly::pow(uint32_t e) const {
    SparsePoly result = SparsePoly::one();
    SparsePoly base = *this;
    while (e) {
        if (e & 1) result = result * base;
        base = base * base;
        e >>= 1;
    }
    return result;
}

Rational SparsePoly::evaluate(const std::map<uint32_t, Rational>& point) const {
    Rational acc(0);
    for (auto& [m, c] : terms_) {
        Rational t = c;
        for (auto& [v, e] : m.pairs()) {
            auto it = point.find(v);
            if (it == point.end())
                throw Error("evaluate: unassigned variable " + VarPool::instance().name(v));
            t *= rational_pow(it->second, e);
        }
        acc += t;
    }
    return acc;
}

SparsePoly SparsePoly::substitute(uint32_t var, const Rational& value) const {
    SparsePoly out;
    for (auto& [m, c] : terms_) {
        uint32_t e = m.degree_in(var);
        if (e == 0) {
            out.add_term(m, c);
        } else {
            out.add_term(m.without(var), c * rational_pow(value, e));
        }
    }
    return out;
}

std::map<uint32_t, SparsePoly> SparsePoly::collect(uint32_t var) const {
    std::map<uint32_t, SparsePoly> out;
    for (auto& [m, c] : terms_) out[m.degree_in(var)].add_term(m.without(var), c);
    return out;
}

std::string SparsePoly::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    // Print highest-order terms first.
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const Monomial& m = it->first;
        Rational c = it->second;
        bool neg = c < 0;
        if (first) {
            if (neg) os << "-";
        } else {
            os << (neg ? " - " : " + ");
        }
        first = false;
        Rational ac = neg ? Rational(-c) : c;
        bool coeff_is_one = (ac == 1);
        if (!coeff_is_one || m.is_one()) os << to_string(ac);
        bool printed_var = false;
        for (auto& [v, e] : m.pairs()) {
            if (!coeff_is_one || printed_var) os << "*";
            os << VarPool::instance().name(v);
            if (e > 1) os << "^" << e;
            printed_var = true;
        }
    }
    return os.str();
}

namespace {

// Rational "content": positive generator chosen so that poly/content has
// integer coprime coefficients. Purely for canonicalizing gcd output.
Rational rational_content(const SparsePoly& p) {
    BigInt num_gcd(0), den_lcm(1);
    for (auto& [m, c] : p.terms()) {
        BigInt n = numerator(c);
        if (n < 0) n = -n;
        num_gcd = gcd(num_gcd, n);
        BigInt d = denominator(c);
        den_lcm = den_lcm / gcd(den_lcm, d) * d;
    }
    if (num_gcd == 0) return Rational(0);
    return Rational(num_gcd) / Rational(den_lcm);
}

// Univariate view: degree-in-main-var -> coefficient poly (main var removed).
using UniView = std::map<uint32_t, SparsePoly>;

SparsePoly from_uni(const UniView& u, uint32_t var) {
    SparsePoly out;
    for (auto& [deg, coeff] : u) {
        SparsePoly t = coeff;
        if (deg > 0) t = t * SparsePoly::variable(var).pow(deg);
        out += t;
    }
    return out;
}

uint32_t uni_deg(const UniView& u) { return u.empty() ? 0 : u.rbegin()->first; }

bool uni_is_zero(const UniView& u) { return u.empty(); }

void uni_trim(UniView& u) {
    for (auto it = u.begin(); it != u.end();) {
        if (it->second.is_zero())
            it = u.erase(it);
        else
            ++it;
    }
}

UniView uni_scale(const UniView& u, const SparsePoly& s) {
    UniView out;
    for (auto& [d, c] : u) {
        SparsePoly p = c * s;
        if (!p.is_zero()) out.emplace(d, std::move(p));
    }
    return out;
}

// Pseudo-remainder of f by g in the main variable: coefficients stay
// polynomial throughout.
UniView uni_prem(UniView f, const UniView& g) {
    uni_trim(f);
    if (uni_is_zero(f)) return f;
    uint32_t dg = uni_deg(g);
    const SparsePoly& lg = g.rbegin()->second;
    while (!uni_is_zero(f) && uni_deg(f) >= dg) {
        uint32_t df = uni_deg(f);
        SparsePoly lf = f.rbegin()->second;
        // f := lg*f - lf * x^(df-dg) * g
        f = uni_scale(f, lg);
        for (auto& [d, c] : g) {
            uint32_t target = d + (df - dg);
            auto it = f.find(target);
            if (it == f.end()) {
                f.emplace(target, -(lf * c));
            } else {
                it->second -= lf * c;
            }
        }
        uni_trim(f);
        if (!uni_is_zero(f) && uni_deg(f) >= df) {
            // Leading term must have cancelled.
            f.erase(std::prev(f.end()));
            uni_trim(f);
        }
    }
    return f;
}

SparsePoly poly_content(const UniView& u) {
    SparsePoly g;
    for (auto& [d, c] : u) g = poly_gcd(g, c);
    return g;
}

UniView uni_divide_exact(const UniView& u, const SparsePoly& d) {
    UniView out;
    for (auto& [deg, c] : u) {
        auto q = c.divide_exact(d);
        if (!q) throw Error("internal: content division failed");
        if (!q->is_zero()) out.emplace(deg, std::move(*q));
    }
    return out;
}

}  // namespace

SparsePoly poly_gcd(const SparsePoly& a, const SparsePoly& b) {
    auto normalize = [](SparsePoly p) {
        if (p.is_zero()) return p;
        Rational c = rational_content(p);
        if (p.leading_coeff() < 0) c = -c;
        return p * (Rational(1) / c);
    };
    if (a.is_zero()) return normalize(b);
    if (b.is_zero()) return normalize(a);
    if (a.is_constant() || b.is_constant()) return SparsePoly::one();

    // Main variable: smallest id appearing in either operand.
    uint32_t var = std::min(a.variables().front(), b.variables().front());
    UniView ua = a.collect(var), ub = b.collect(var);

    SparsePoly cont_a = poly_content(ua), cont_b = poly_content(ub);
    SparsePoly cont_gcd = poly_gcd(cont_a, cont_b);
    UniView f = uni_divide_exact(ua, cont_a);
    UniView g = uni_divide_exact(ub, cont_b);
    if (uni_deg(f) < uni_deg(g)) std::swap(f, g);

    // Primitive PRS.
    while (!uni_is_zero(g)) {
        UniView r = uni_prem(f, g);
        if (!uni_is_zero(r)) {
            SparsePoly c = poly_content(r);
            r = uni_divide_exact(r, c);
        }
        f = std::move(g);
        g = std::move(r);
    }
    SparsePoly pp = from_uni(f, var);
    return normalize(pp * cont_gcd);
}

}  // namespace amdist
