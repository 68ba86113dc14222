#include "amdist/io.hpp"

#include <cctype>

#include "amdist/datum_builder.hpp"

namespace amdist {

namespace {

// Recursive-descent parser for exact scalar expressions:
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := '-'* primary ('^' uint)?
//   primary:= integer | name | '(' expr ')'
class ScalarParser {
public:
    explicit ScalarParser(const std::string& text) : s_(text) {}

    RationalFunction parse() {
        RationalFunction v = expr();
        skip_ws();
        if (pos_ != s_.size()) throw ParseError("trailing characters in scalar: " + s_);
        return v;
    }

private:
    RationalFunction expr() {
        RationalFunction v = term();
        while (true) {
            skip_ws();
            if (peek() == '+') {
                ++pos_;
                v = v + term();
            } else if (peek() == '-') {
                ++pos_;
                v = v - term();
            } else {
                return v;
            }
        }
    }
    RationalFunction term() {
        RationalFunction v = factor();
        while (true) {
            skip_ws();
            if (peek() == '*') {
                ++pos_;
                v = v * factor();
            } else if (peek() == '/') {
                ++pos_;
                RationalFunction d = factor();
                if (d.is_zero()) throw ParseError("division by zero in scalar: " + s_);
                v = v / d;
            } else {
                return v;
            }
        }
    }
    RationalFunction factor() {
        skip_ws();
        bool neg = false;
        while (peek() == '-') {
            ++pos_;
            neg = !neg;
            skip_ws();
        }
        RationalFunction v = primary();
        skip_ws();
        if (peek() == '^') {
            ++pos_;
            skip_ws();
            size_t start = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
                ++pos_;
            if (start == pos_) throw ParseError("exponent expected in scalar: " + s_);
            unsigned long e = std::stoul(s_.substr(start, pos_ - start));
            RationalFunction base = v;
            v = RationalFunction(1);
            for (unsigned long i = 0; i < e; ++i) v = v * base;
        }
        return neg ? -v : v;
    }
    RationalFunction primary() {
        skip_ws();
        char c = peek();
        if (c == '(') {
            ++pos_;
            RationalFunction v = expr();
            skip_ws();
            if (peek() != ')') throw ParseError("missing ')' in scalar: " + s_);
            ++pos_;
            return v;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            size_t start = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
                ++pos_;
            return RationalFunction(Rational(BigInt(s_.substr(start, pos_ - start))));
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t start = pos_;
            while (pos_ < s_.size() &&
                   (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
                ++pos_;
            return RationalFunction::variable(s_.substr(start, pos_ - start));
        }
        throw ParseError("unexpected character '" + std::string(1, c) + "' in scalar: " + s_);
    }
    char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    const std::string& s_;
    size_t pos_ = 0;
};

template <ScalarRing R>
R scalar_from_json(const json& j);

template <>
RationalFunction scalar_from_json<RationalFunction>(const json& j) {
    if (j.is_number_integer()) return RationalFunction(Rational(j.get<long long>()));
    if (j.is_string()) return ScalarParser(j.get<std::string>()).parse();
    throw ParseError("scalar must be a string or integer");
}

template <>
Rational scalar_from_json<Rational>(const json& j) {
    RationalFunction f = scalar_from_json<RationalFunction>(j);
    if (!f.is_constant())
        throw ParseError("rational ring cannot hold symbolic scalar: " + j.dump());
    return f.constant_value();
}

template <ScalarRing R>
GraphDatum<R> datum_from_json(const json& doc) {
    if (!doc.contains("n") || !doc.contains("blocks"))
        throw ParseError("datum file needs 'n' and 'blocks'");
    int n = doc.at("n").get<int>();
    std::vector<BlockDatum<R>> blocks;
    for (const json& jb : doc.at("blocks")) {
        BlockDatum<R> b;
        b.vertices = jb.at("vertices").get<std::vector<VertexId>>();
        size_t p = b.vertices.size();
        if (jb.contains("dstar")) {
            b.a = scalar_from_json<R>(jb.at("a"));
            const json& rows = jb.at("dstar");
            if (rows.size() != p) throw ParseError("dstar row count mismatch");
            b.dstar = Matrix<R>(p, p);
            for (size_t i = 0; i < p; ++i) {
                if (rows[i].size() != p) throw ParseError("dstar column count mismatch");
                for (size_t j = 0; j < p; ++j) b.dstar(i, j) = scalar_from_json<R>(rows[i][j]);
            }
        } else if (jb.contains("clique")) {
            b.a = scalar_from_json<R>(jb.at("a"));
            const json& c = jb.at("clique");
            auto ms = c.at("m"), mps = c.at("mp");
            if (ms.size() != p || mps.size() != p)
                throw ParseError("clique weight vectors must have length p");
            b.dstar = Matrix<R>(p, p);
            std::vector<R> m(p), mp(p);
            for (size_t i = 0; i < p; ++i) {
                m[i] = scalar_from_json<R>(ms[i]);
                mp[i] = scalar_from_json<R>(mps[i]);
            }
            for (size_t i = 0; i < p; ++i)
                for (size_t j = 0; j < p; ++j)
                    b.dstar(i, j) = (i == j) ? RingTraits<R>::one() : m[i] * mp[j];
        } else if (jb.contains("edge")) {
            if (p != 2) throw ParseError("edge block needs exactly 2 vertices");
            b.a = scalar_from_json<R>(jb.at("a"));
            const json& e = jb.at("edge");
            b.dstar = Matrix<R>(2, 2);
            b.dstar(0, 0) = RingTraits<R>::one();
            b.dstar(1, 1) = RingTraits<R>::one();
            b.dstar(0, 1) = scalar_from_json<R>(e.at("m"));
            b.dstar(1, 0) = scalar_from_json<R>(e.at("mp"));
        } else if (jb.contains("q")) {
            if constexpr (RingTraits<R>::symbolic) {
                const json& q = jb.at("q");
                RationalFunction w = scalar_from_json<RationalFunction>(q.at("w"));
                SparsePoly qv = SparsePoly::variable("q");
                b.a = w / RationalFunction(qv - SparsePoly::one());
                const json& alpha = q.at("alpha");
                if (alpha.size() != p) throw ParseError("alpha row count mismatch");
                b.dstar = Matrix<R>(p, p);
                for (size_t i = 0; i < p; ++i)
                    for (size_t j = 0; j < p; ++j) {
                        int a = alpha[i][j].get<int>();
                        if (a < 0) throw ParseError("alpha exponent must be >= 0");
                        if (i == j) {
                            if (a != 0) throw ParseError("alpha diagonal must be 0");
                            b.dstar(i, j) = RingTraits<R>::one();
                        } else {
                            b.dstar(i, j) =
                                RationalFunction(qv.pow(static_cast<uint32_t>(a)));
                        }
                    }
            } else {
                throw ParseError("q-flavor blocks need ring \"q\" or \"symbolic\"");
            }
        } else {
            throw ParseError("block needs one of: dstar, clique, edge, q");
        }
        blocks.push_back(std::move(b));
    }
    return validate_datum(n, std::move(blocks));
}

}  // namespace

RationalFunction parse_scalar(const std::string& text) { return ScalarParser(text).parse(); }

Rational parse_rational_scalar(const std::string& text) {
    RationalFunction f = ScalarParser(text).parse();
    if (!f.is_constant()) throw ParseError("expected a rational constant: " + text);
    return f.constant_value();
}

DatumFile parse_datum_file(const json& doc) {
    DatumFile out;
    out.ring = doc.value("ring", "rational");
    if (out.ring != "rational" && out.ring != "symbolic" && out.ring != "q")
        throw ParseError("ring must be one of rational|symbolic|q");
    if (out.ring == "rational") {
        out.rat = datum_from_json<Rational>(doc);
    } else {
        out.sym = datum_from_json<RationalFunction>(doc);
    }
    if (doc.contains("options") && doc.at("options").contains("eval")) {
        for (auto& [name, val] : doc.at("options").at("eval").items()) {
            uint32_t id = VarPool::instance().intern(name);
            out.eval_point[id] = parse_rational_scalar(val.get<std::string>());
        }
    }
    return out;
}

}  // namespace amdist
