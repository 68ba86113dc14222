#pragma once

#include <json.hpp>
#include <optional>

#include "amdist/graph.hpp"

namespace amdist {

using nlohmann::json;

// Exact scalars travel as strings: "-3/7", "q^2-1", "(a*m)/(q-1)".
RationalFunction parse_scalar(const std::string& text);
Rational parse_rational_scalar(const std::string& text);

inline std::string scalar_str(const Rational& r) { return to_string(r); }
inline std::string scalar_str(const RationalFunction& r) { return r.str(); }

template <ScalarRing R>
json matrix_to_json(const Matrix<R>& m) {
    json rows = json::array();
    for (size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (size_t j = 0; j < m.cols(); ++j) row.push_back(scalar_str(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

// Parsed DatumFile: exactly one of the two ring instantiations is set.
struct DatumFile {
    std::string ring;  // "rational" | "symbolic" | "q"
    std::optional<GraphDatum<Rational>> rat;
    std::optional<GraphDatum<RationalFunction>> sym;
    std::map<uint32_t, Rational> eval_point;  // options.eval, e.g. {"q": "1"}
};

DatumFile parse_datum_file(const json& doc);

template <ScalarRing R>
json datum_to_json(const GraphDatum<R>& g) {
    json doc;
    doc["n"] = g.vertices.empty() ? 0 : g.vertices.back();
    doc["ring"] = RingTraits<R>::symbolic ? "symbolic" : "rational";
    json blocks = json::array();
    for (auto& b : g.blocks) {
        json jb;
        jb["vertices"] = b.vertices;
        jb["a"] = scalar_str(b.a);
        jb["dstar"] = matrix_to_json(b.dstar);
        blocks.push_back(std::move(jb));
    }
    doc["blocks"] = std::move(blocks);
    return doc;
}

}  // namespace amdist
