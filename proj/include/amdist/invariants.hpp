#pragma once

#include "amdist/datum_builder.hpp"
#include "amdist/linalg.hpp"

namespace amdist {

enum class TripleMethod { Direct, GHH };

template <ScalarRing R>
struct InvariantTriple {
    R det, cof, kappa;
    TripleMethod method = TripleMethod::Direct;

    bool operator==(const InvariantTriple& o) const {
        return det == o.det && cof == o.cof && kappa == o.kappa;
    }
};

// kappa(D, v0): relabel v0 last and take det of the rank-two-corrected
// principal block. `mcol` is the D* column m(rows \ {v0}, v0), aligned
// with d's row order.
template <ScalarRing R>
R kappa_at(const Matrix<R>& d, const std::vector<R>& mcol, VertexId v0) {
    if (!d.square()) throw DimensionMismatch("kappa of non-square matrix");
    if (!d.has_row(v0)) throw VertexMissing("v0 not among matrix labels");
    if (mcol.size() + 1 != d.rows())
        throw DimensionMismatch("m-column length must be rows-1");
    std::vector<VertexId> rest;
    for (VertexId v : d.row_labels())
        if (v != v0) rest.push_back(v);
    Matrix<R> k = d.submatrix_labels(rest, rest);
    size_t v0r = d.row_index(v0), v0c = d.col_index(v0);
    for (size_t i = 0; i < rest.size(); ++i) {
        R u1 = d(d.row_index(rest[i]), v0c);
        R w_scale = mcol[i];
        for (size_t j = 0; j < rest.size(); ++j) {
            R w1 = d(v0r, d.col_index(rest[j]));
            k(i, j) = k(i, j) - u1 - w_scale * w1;
        }
    }
    return exact_det(k);
}

// Convenience: kappa of the datum's own matrices at v0.
template <ScalarRing R>
R kappa_of(const AmMatrices<R>& am, VertexId v0) {
    std::vector<R> mcol;
    size_t c = am.dstar.col_index(v0);
    for (size_t i = 0; i < am.dstar.rows(); ++i)
        if (am.dstar.row_labels()[i] != v0) mcol.push_back(am.dstar(i, c));
    return kappa_at(am.d, mcol, v0);
}

// Per-block quantities used across all GHH assemblies.
template <ScalarRing R>
struct BlockInvariants {
    R det_e, cof_e, kappa_e, det_star, cof_star;
};

template <ScalarRing R>
BlockInvariants<R> block_invariants(const BlockDatum<R>& b) {
    const size_t p = b.p();
    Matrix<R> de = (b.dstar - Matrix<R>::ones(p, p)) * b.a;
    de.set_labels(b.vertices, b.vertices);
    BlockInvariants<R> out;
    out.det_e = exact_det(de);
    out.cof_e = exact_det(de + Matrix<R>::ones(p, p)) - out.det_e;
    out.det_star = exact_det(b.dstar);
    out.cof_star = exact_det(b.dstar + Matrix<R>::ones(p, p)) - out.det_star;
    out.kappa_e = ring_pow(b.a, static_cast<long>(p) - 1) * out.det_star;
    return out;
}

template <ScalarRing R>
std::vector<BlockInvariants<R>> all_block_invariants(const GraphDatum<R>& g) {
    std::vector<BlockInvariants<R>> out;
    out.reserve(g.blocks.size());
    for (auto& b : g.blocks) out.push_back(block_invariants(b));
    return out;
}

// Brute-force triple straight from the full matrices.
template <ScalarRing R>
InvariantTriple<R> invariants_direct(const AmMatrices<R>& am, const GraphDatum<R>& g) {
    InvariantTriple<R> t;
    t.method = TripleMethod::Direct;
    t.det = exact_det(am.d);
    size_t n = g.n();
    t.cof = exact_det(am.d + Matrix<R>::ones(n, n)) - t.det;
    t.kappa = kappa_of(am, g.vertices.front());
    return t;
}

// Triple assembled purely from per-block quantities; the full n x n matrix
// is never formed.
template <ScalarRing R>
InvariantTriple<R> invariants_ghh(const GraphDatum<R>& g) {
    auto bi = all_block_invariants(g);
    const size_t k = bi.size();
    InvariantTriple<R> t;
    t.method = TripleMethod::GHH;
    R kappa_prod = RingTraits<R>::one();
    for (auto& b : bi) kappa_prod = kappa_prod * b.kappa_e;
    t.kappa = kappa_prod;
    t.det = RingTraits<R>::zero();
    t.cof = kappa_prod;
    for (size_t e = 0; e < k; ++e) {
        R others = RingTraits<R>::one();
        for (size_t f = 0; f < k; ++f)
            if (f != e) others = others * bi[f].kappa_e;
        t.det = t.det + bi[e].det_e * others;
        t.cof = t.cof + (bi[e].cof_e - bi[e].kappa_e) * others;
    }
    return t;
}

// One named two-sided comparison inside a report.
template <ScalarRing R>
struct IdentityLine {
    std::string name;
    R lhs, rhs;
    bool equal = false;
};

template <ScalarRing R>
struct CheckReport {
    std::vector<IdentityLine<R>> lines;
    bool pass = true;

    void add(const std::string& name, const R& lhs, const R& rhs) {
        bool eq = lhs == rhs;
        lines.push_back({name, lhs, rhs, eq});
        pass = pass && eq;
    }
};

enum class GhhFlavor { Multiplicative, Q, Classical };

// Evaluates both sides of the classical GHH specializations.
template <ScalarRing R>
CheckReport<R> classical_ghh_check(const GraphDatum<R>& g, GhhFlavor flavor);

// Closed-form det(D + xJ)_{I|J}. Throws InadmissibleMinor outside the
// admissibility conditions.
template <ScalarRing R>
R minor_det(const GraphDatum<R>& g, const std::set<VertexId>& I, const std::set<VertexId>& J,
            const R& x) {
    MinorClass mc = classify_minor(g, I, J);
    if (!mc.admissible()) throw InadmissibleMinor(mc.reason);
    std::set<VertexId> both;
    std::set_intersection(I.begin(), I.end(), J.begin(), J.end(),
                          std::inserter(both, both.begin()));
    std::set<VertexId> keep(g.vertices.begin(), g.vertices.end());
    for (VertexId v : both) keep.erase(v);
    GraphDatum<R> reduced = (both.empty()) ? g : restrict_datum(g, keep);

    if (mc.kind == MinorClass::Kind::DeltaMoreThanTwo) return RingTraits<R>::zero();

    auto bi = all_block_invariants(reduced);
    if (mc.kind == MinorClass::Kind::Equal) {
        // x * prod kappa_e  +  sum_e (a_e - x)(kappa_e - cof_e) prod_{f != e} kappa_f
        R acc = x;
        for (auto& b : bi) acc = acc * b.kappa_e;
        for (size_t e = 0; e < bi.size(); ++e) {
            R term = (reduced.blocks[e].a - x) * (bi[e].kappa_e - bi[e].cof_e);
            for (size_t f = 0; f < bi.size(); ++f)
                if (f != e) term = term * bi[f].kappa_e;
            acc = acc + term;
        }
        return acc;
    }

    // DeltaTwo: signed product over the two pendant edge-blocks, kappa over
    // the rest. The sign (-1)^(rank(i0)+rank(j0)) generalizes the pendant
    // row-first/column-last normal form to ascending-label submatrices.
    auto rank_of = [&](VertexId v) {
        size_t r = 0;
        for (VertexId u : reduced.vertices) {
            ++r;
            if (u == v) return r;
        }
        throw VertexMissing("pendant vertex missing from reduced datum");
    };
    size_t ri = rank_of(mc.i0), rj = rank_of(mc.j0);
    int bi_idx = -1, bj_idx = -1;
    for (size_t b = 0; b < reduced.blocks.size(); ++b) {
        auto& vs = reduced.blocks[b].vertices;
        if (std::find(vs.begin(), vs.end(), mc.i0) != vs.end()) bi_idx = static_cast<int>(b);
        if (std::find(vs.begin(), vs.end(), mc.j0) != vs.end()) bj_idx = static_cast<int>(b);
    }
    const BlockDatum<R>& blk_i = reduced.blocks[bi_idx];
    const BlockDatum<R>& blk_j = reduced.blocks[bj_idx];
    R value = blk_i.a * (blk_j.a - x);
    value = value * (blk_i.dstar.at_labels(mc.p_i0, mc.i0) - RingTraits<R>::one());
    value = value * (blk_j.dstar.at_labels(mc.j0, mc.p_j0) - RingTraits<R>::one());
    for (size_t b = 0; b < reduced.blocks.size(); ++b)
        if (static_cast<int>(b) != bi_idx && static_cast<int>(b) != bj_idx)
            value = value * bi[b].kappa_e;
    if ((ri + rj) % 2 == 1) value = -value;
    return value;
}

// kappa of the (possibly non-principal) minor: product over E_circ when
// I = J, ring zero otherwise.
template <ScalarRing R>
R minor_kappa(const GraphDatum<R>& g, const std::set<VertexId>& I,
              const std::set<VertexId>& J, VertexId v0) {
    MinorClass mc = classify_minor(g, I, J);
    if (!mc.admissible()) throw InadmissibleMinor(mc.reason);
    if (I.count(v0) || J.count(v0)) throw VertexInRemovedSet("v0 lies in I or J");
    if (I != J) return RingTraits<R>::zero();
    std::set<VertexId> keep(g.vertices.begin(), g.vertices.end());
    for (VertexId v : I) keep.erase(v);
    GraphDatum<R> reduced = I.empty() ? g : restrict_datum(g, keep);
    R acc = RingTraits<R>::one();
    for (auto& b : reduced.blocks) acc = acc * block_invariants(b).kappa_e;
    return acc;
}

// Direct evaluation of the generalized kappa of a minor (the oracle side).
template <ScalarRing R>
R minor_kappa_direct(const AmMatrices<R>& am, const std::set<VertexId>& I,
                     const std::set<VertexId>& J, VertexId v0) {
    if (I.count(v0) || J.count(v0)) throw VertexInRemovedSet("v0 lies in I or J");
    std::vector<VertexId> rows, cols;
    for (VertexId v : am.order) {
        if (!I.count(v) && v != v0) rows.push_back(v);
        if (!J.count(v) && v != v0) cols.push_back(v);
    }
    Matrix<R> k = am.d.submatrix_labels(rows, cols);
    size_t v0r = am.d.row_index(v0), v0c = am.d.col_index(v0);
    for (size_t i = 0; i < rows.size(); ++i) {
        R u1 = am.d(am.d.row_index(rows[i]), v0c);
        R mc = am.dstar(am.dstar.row_index(rows[i]), v0c);
        for (size_t j = 0; j < cols.size(); ++j) {
            R w1 = am.d(v0r, am.d.col_index(cols[j]));
            k(i, j) = k(i, j) - u1 - mc * w1;
        }
    }
    return exact_det(k);
}

// Bordered matrix M(x) = [[m(V,v), D + xJ], [0, e^T]]; its determinant is
// (-1)^(|V|-1) kappa(D), independent of x.
template <ScalarRing R>
R bordered_kappa(const GraphDatum<R>& g, const AmMatrices<R>& am, VertexId v, const R& x) {
    const size_t n = g.n();
    Matrix<R> m(n + 1, n + 1);
    size_t vc = am.dstar.col_index(v);
    for (size_t i = 0; i < n; ++i) {
        m(i, 0) = am.dstar(i, vc);
        for (size_t j = 0; j < n; ++j) m(i, j + 1) = am.d(i, j) + x;
    }
    m(n, 0) = RingTraits<R>::zero();
    for (size_t j = 0; j < n; ++j) m(n, j + 1) = RingTraits<R>::one();
    R det = exact_det(m);
    R expected = kappa_of(am, g.vertices.front());
    if (n % 2 == 0) expected = -expected;
    if (!(det == expected))
        throw Error("bordered determinant disagrees with (-1)^(|V|-1) kappa");
    return det;
}

namespace detail {

template <ScalarRing R>
void ghh_pair_check(CheckReport<R>& rep, const std::string& tag,
                    const std::vector<std::pair<R, R>>& block_pairs,  // (det_e, cof_e)
                    const R& det_full, const R& cof_full) {
    const size_t k = block_pairs.size();
    R det_rhs = RingTraits<R>::zero();
    R cof_rhs = RingTraits<R>::one();
    for (auto& [de, ce] : block_pairs) cof_rhs = cof_rhs * ce;
    for (size_t e = 0; e < k; ++e) {
        R others = RingTraits<R>::one();
        for (size_t f = 0; f < k; ++f)
            if (f != e) others = others * block_pairs[f].second;
        det_rhs = det_rhs + block_pairs[e].first * others;
    }
    rep.add(tag + ".det", det_full, det_rhs);
    rep.add(tag + ".cof", cof_full, cof_rhs);
}

}  // namespace detail

template <ScalarRing R>
CheckReport<R> classical_ghh_check(const GraphDatum<R>& g, GhhFlavor flavor) {
    CheckReport<R> rep;
    AmMatrices<R> am = build_matrices(g);
    auto bi = all_block_invariants(g);
    const size_t k = bi.size();

    if (flavor == GhhFlavor::Multiplicative) {
        for (auto& b : g.blocks)
            if (!(b.a == RingTraits<R>::one()))
                throw WrongSpecialization("multiplicative flavor requires all a_e = 1");
        R det_full = exact_det(am.dstar);
        R cof_full = exact_det(am.dstar + Matrix<R>::ones(g.n(), g.n())) - det_full;
        R det_rhs = RingTraits<R>::one();
        for (auto& b : bi) det_rhs = det_rhs * b.det_star;
        rep.add("Eghh12.det", det_full, det_rhs);
        R cof_rhs = det_rhs;
        for (size_t e = 0; e < k; ++e) {
            R others = RingTraits<R>::one();
            for (size_t f = 0; f < k; ++f)
                if (f != e) others = others * bi[f].det_star;
            cof_rhs = cof_rhs + (bi[e].cof_star - bi[e].det_star) * others;
        }
        rep.add("Eghh12.cof", cof_full, cof_rhs);
        return rep;
    }

    if (flavor == GhhFlavor::Q) {
        // a_e = 1/(q-1) for a common scalar q: recover q-1 = 1/a_e.
        const R& a0 = g.blocks.front().a;
        if (amdist::is_zero(a0)) throw WrongSpecialization("a_e must be invertible");
        for (auto& b : g.blocks)
            if (!(b.a == a0))
                throw WrongSpecialization("q flavor requires a_e = 1/(q-1) for all blocks");
        R qm1 = RingTraits<R>::one() / a0;
        R det_full = exact_det(am.d);
        R cof_full = exact_det(am.d + Matrix<R>::ones(g.n(), g.n())) - det_full;
        // d*_e = (q-1) det(D_q(G_e)) + cof(D_q(G_e))
        std::vector<R> dstar_e(k);
        for (size_t e = 0; e < k; ++e) dstar_e[e] = qm1 * bi[e].det_e + bi[e].cof_e;
        R det_rhs = RingTraits<R>::zero();
        R prod_all = RingTraits<R>::one();
        for (size_t e = 0; e < k; ++e) prod_all = prod_all * dstar_e[e];
        for (size_t e = 0; e < k; ++e) {
            R others = RingTraits<R>::one();
            for (size_t f = 0; f < k; ++f)
                if (f != e) others = others * dstar_e[f];
            det_rhs = det_rhs + bi[e].det_e * others;
        }
        rep.add("Eghh34.det", det_full, det_rhs);
        rep.add("Eghh34.cof", cof_full, prod_all - qm1 * det_rhs);
        return rep;
    }

    // Classical: evaluate a q-ring datum at q = 1. Only meaningful over the
    // rational-function ring.
    if constexpr (std::is_same_v<R, RationalFunction>) {
        auto qid = VarPool::instance().lookup("q");
        if (!qid) throw WrongSpecialization("classical flavor requires a q-ring datum");
        for (auto& b : g.blocks) {
            RationalFunction prod =
                b.a * (RationalFunction::variable("q") - RationalFunction(1));
            prod.reduce();
            if (prod.num().contains_var(*qid) || prod.den().contains_var(*qid))
                throw WrongSpecialization("classical flavor requires a_e = w_e/(q-1)");
        }
        auto sub_q1 = [&](const Matrix<RationalFunction>& m) {
            Matrix<RationalFunction> out(m.rows(), m.cols());
            for (size_t i = 0; i < m.rows(); ++i)
                for (size_t j = 0; j < m.cols(); ++j)
                    out(i, j) = m(i, j).substitute(*qid, Rational(1));
            out.set_labels(m.row_labels(), m.col_labels());
            return out;
        };
        Matrix<RationalFunction> d1 = sub_q1(am.d);
        R det_full = exact_det(d1);
        R cof_full = exact_det(d1 + Matrix<R>::ones(g.n(), g.n())) - det_full;
        std::vector<std::pair<R, R>> pairs;
        for (auto& b : g.blocks) {
            size_t p = b.p();
            Matrix<RationalFunction> de = (b.dstar - Matrix<R>::ones(p, p)) * b.a;
            de = sub_q1(de);
            R det_e = exact_det(de);
            R cof_e = exact_det(de + Matrix<R>::ones(p, p)) - det_e;
            pairs.push_back({det_e, cof_e});
        }
        detail::ghh_pair_check(rep, "Eghh56", pairs, det_full, cof_full);
        return rep;
    } else {
        throw WrongSpecialization("classical flavor requires the symbolic q ring");
    }
}

}  // namespace amdist
