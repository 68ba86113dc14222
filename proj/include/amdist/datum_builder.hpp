#pragma once

#include <queue>

#include "amdist/graph.hpp"

namespace amdist {

// The pair (D*_G, D_G) built from a datum, rows/columns in ascending
// vertex-id order.
template <ScalarRing R>
struct AmMatrices {
    Matrix<R> dstar;
    Matrix<R> d;
    std::vector<VertexId> order;
};

// Fills block-internal entries from the datum and propagates across the
// block-cut tree: m_ij = m_iv * m_vj and d_ij = d_iv + m_iv * d_vj at every
// cut vertex v on the way. Every (source, block) pair is expanded once.
template <ScalarRing R>
AmMatrices<R> build_matrices(const GraphDatum<R>& g) {
    const size_t n = g.n();
    AmMatrices<R> out;
    out.order = g.vertices;
    out.dstar = Matrix<R>(n, n);
    out.d = Matrix<R>(n, n);
    out.dstar.set_labels(g.vertices, g.vertices);
    out.d.set_labels(g.vertices, g.vertices);

    std::map<VertexId, size_t> pos;
    for (size_t i = 0; i < n; ++i) pos[g.vertices[i]] = i;

    for (size_t si = 0; si < n; ++si) {
        VertexId src = g.vertices[si];
        std::vector<R> m_row(n, RingTraits<R>::zero());
        std::vector<R> d_row(n, RingTraits<R>::zero());
        m_row[si] = RingTraits<R>::one();

        std::vector<bool> visited(g.blocks.size(), false);
        // Expansion frontier: (block, entry vertex) with entry's row values known.
        std::queue<std::pair<int, VertexId>> q;
        for (int b : g.bct.blocks_of.at(src)) {
            q.push({b, src});
            visited[b] = true;
        }
        while (!q.empty()) {
            auto [b, entry] = q.front();
            q.pop();
            const BlockDatum<R>& blk = g.blocks[b];
            const R& m_ie = m_row[pos[entry]];
            const R& d_ie = d_row[pos[entry]];
            for (VertexId u : blk.vertices) {
                if (u == entry) continue;
                const R& m_eu = blk.dstar.at_labels(entry, u);
                m_row[pos[u]] = m_ie * m_eu;
                d_row[pos[u]] = d_ie + m_ie * (blk.a * (m_eu - RingTraits<R>::one()));
            }
            for (VertexId u : blk.vertices) {
                if (u == entry || !g.bct.is_cut(u)) continue;
                for (int nb : g.bct.blocks_of.at(u))
                    if (!visited[nb]) {
                        visited[nb] = true;
                        q.push({nb, u});
                    }
            }
        }
        for (size_t j = 0; j < n; ++j) {
            out.dstar(si, j) = m_row[j];
            out.d(si, j) = d_row[j];
        }
    }
    return out;
}

// One 2x2 block per tree edge.
template <ScalarRing R>
struct TreeEdge {
    VertexId i, j;
    R a, m, mp;  // m = m_{ij}, mp = m_{ji}
};

template <ScalarRing R>
GraphDatum<R> build_tree_datum(int n, const std::vector<TreeEdge<R>>& edges) {
    if (static_cast<int>(edges.size()) != n - 1)
        throw NotATree("a tree on n vertices has n-1 edges");
    std::vector<BlockDatum<R>> blocks;
    for (auto& e : edges) {
        if (e.i == e.j) throw NotATree("self-loop");
        BlockDatum<R> b;
        b.vertices = {e.i, e.j};
        b.a = e.a;
        b.dstar = Matrix<R>(2, 2);
        b.dstar(0, 0) = RingTraits<R>::one();
        b.dstar(1, 1) = RingTraits<R>::one();
        b.dstar(0, 1) = e.m;
        b.dstar(1, 0) = e.mp;
        blocks.push_back(std::move(b));
    }
    try {
        return validate_datum(n, std::move(blocks));
    } catch (const Error& e) {
        throw NotATree(std::string("edges do not form a tree: ") + e.what());
    }
}

// q-specialization: block entries are monomials q^alpha, additive weights
// w_e/(q-1). The resulting D_G entries are exact polynomials in q.
struct QBlock {
    std::vector<VertexId> vertices;
    std::vector<std::vector<int>> alpha;  // zero diagonal, entries >= 0
    RationalFunction w;
};

inline GraphDatum<RationalFunction> build_q_datum(int n, const std::vector<QBlock>& qblocks) {
    SparsePoly q = SparsePoly::variable("q");
    RationalFunction qm1 = RationalFunction(q - SparsePoly::one());
    std::vector<BlockDatum<RationalFunction>> blocks;
    for (auto& qb : qblocks) {
        size_t p = qb.vertices.size();
        if (qb.alpha.size() != p) throw DimensionMismatch("alpha matrix size mismatch");
        BlockDatum<RationalFunction> b;
        b.vertices = qb.vertices;
        b.a = qb.w / qm1;
        b.dstar = Matrix<RationalFunction>(p, p);
        for (size_t i = 0; i < p; ++i) {
            if (qb.alpha[i].size() != p) throw DimensionMismatch("alpha matrix size mismatch");
            for (size_t j = 0; j < p; ++j) {
                if (qb.alpha[i][j] < 0) throw NegativeExponent("alpha exponent must be >= 0");
                if (i == j) {
                    if (qb.alpha[i][j] != 0)
                        throw Error("alpha diagonal must be zero");
                    b.dstar(i, j) = RingTraits<RationalFunction>::one();
                } else {
                    b.dstar(i, j) =
                        RationalFunction(q.pow(static_cast<uint32_t>(qb.alpha[i][j])));
                }
            }
        }
        blocks.push_back(std::move(b));
    }
    return validate_datum(n, std::move(blocks));
}

// Same construction evaluated at a rational q (q != 1), over the plain
// rational ring.
struct QBlockRational {
    std::vector<VertexId> vertices;
    std::vector<std::vector<int>> alpha;
    Rational w;
};

inline GraphDatum<Rational> build_q_datum_at(int n, const std::vector<QBlockRational>& qblocks,
                                             const Rational& q0) {
    if (q0 == 1) throw DenominatorVanishes("q = 1 makes a_e = w/(q-1) undefined");
    std::vector<BlockDatum<Rational>> blocks;
    for (auto& qb : qblocks) {
        size_t p = qb.vertices.size();
        BlockDatum<Rational> b;
        b.vertices = qb.vertices;
        b.a = qb.w / (q0 - 1);
        b.dstar = Matrix<Rational>(p, p);
        for (size_t i = 0; i < p; ++i)
            for (size_t j = 0; j < p; ++j) {
                if (qb.alpha[i][j] < 0) throw NegativeExponent("alpha exponent must be >= 0");
                b.dstar(i, j) = (i == j) ? Rational(1) : rational_pow(q0, qb.alpha[i][j]);
            }
        blocks.push_back(std::move(b));
    }
    return validate_datum(n, std::move(blocks));
}

// Substitutes q -> value entrywise (matrices of polynomials in q stay exact).
inline Matrix<Rational> evaluate_matrix_at(const Matrix<RationalFunction>& m,
                                           const std::map<uint32_t, Rational>& point) {
    Matrix<Rational> out(m.rows(), m.cols());
    for (size_t i = 0; i < m.rows(); ++i)
        for (size_t j = 0; j < m.cols(); ++j) out(i, j) = m(i, j).evaluate(point);
    out.set_labels(m.row_labels(), m.col_labels());
    return out;
}

}  // namespace amdist
