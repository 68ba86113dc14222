#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "amdist/matrix.hpp"

namespace amdist {

// Pure block/vertex incidence structure (no ring data).
struct BlockTopology {
    std::vector<std::vector<VertexId>> block_vertices;
    std::vector<VertexId> vertices;  // sorted union

    size_t n() const { return vertices.size(); }
};

// Bipartite block/cut-vertex tree of a strong-block decomposition.
struct BlockCutTree {
    std::vector<int> block_nodes;                       // block indices
    std::vector<VertexId> cut_nodes;                    // vertices in >= 2 blocks
    std::map<VertexId, int> block_degree;               // d_E(v)
    std::map<VertexId, std::vector<int>> blocks_of;     // vertex -> incident blocks
    std::vector<std::vector<VertexId>> cuts_of_block;   // block -> its cut vertices

    bool is_cut(VertexId v) const {
        auto it = block_degree.find(v);
        return it != block_degree.end() && it->second >= 2;
    }
};

// Validates the decomposition (pairwise overlaps, coverage, connectivity,
// acyclic block/cut incidence) and derives the tree. Throws on failure.
BlockCutTree build_block_cut_tree(const BlockTopology& topo);

// Non-throwing validity probe for the same conditions.
bool topology_valid(const BlockTopology& topo);

// Vertex sets of the connected components of the underlying graph after
// deleting vertex v.
std::vector<std::set<VertexId>> components_without_vertex(const BlockTopology& topo,
                                                          VertexId v);

// Blocks and vertices of G_{i -> e}: drop i from the block-cut tree, keep
// the side containing block e, then put i back.
struct SubgraphItoE {
    std::set<VertexId> vertices;
    std::vector<int> blocks;
};
SubgraphItoE subgraph_i_to_e_topo(const BlockTopology& topo, const BlockCutTree& bct,
                                  VertexId i, int block_index);

template <ScalarRing R>
struct BlockDatum {
    int id = 0;
    std::vector<VertexId> vertices;
    R a;
    Matrix<R> dstar;  // p x p, unit diagonal, labeled by `vertices`

    size_t p() const { return vertices.size(); }
};

template <ScalarRing R>
struct GraphDatum {
    std::vector<VertexId> vertices;  // sorted
    std::vector<BlockDatum<R>> blocks;
    BlockCutTree bct;

    size_t n() const { return vertices.size(); }
    BlockTopology topology() const {
        BlockTopology t;
        for (auto& b : blocks) t.block_vertices.push_back(b.vertices);
        t.vertices = vertices;
        return t;
    }
    bool has_vertex(VertexId v) const {
        return std::binary_search(vertices.begin(), vertices.end(), v);
    }
};

namespace detail {

template <ScalarRing R>
void check_block_data(const std::vector<BlockDatum<R>>& blocks) {
    for (auto& b : blocks) {
        if (b.vertices.size() < 2)
            throw EmptyBlock("block " + std::to_string(b.id) + " has fewer than 2 vertices");
        std::set<VertexId> distinct(b.vertices.begin(), b.vertices.end());
        if (distinct.size() != b.vertices.size())
            throw EmptyBlock("block " + std::to_string(b.id) + " repeats a vertex");
        if (b.dstar.rows() != b.p() || b.dstar.cols() != b.p())
            throw DimensionMismatch("block matrix dimensions do not match vertex count");
        for (size_t i = 0; i < b.p(); ++i)
            if (!(b.dstar(i, i) == RingTraits<R>::one()))
                throw Error("block matrix diagonal entry is not 1");
    }
}

}  // namespace detail

// Builds a validated GraphDatum from blocks whose vertices must cover
// [1..n] exactly.
template <ScalarRing R>
GraphDatum<R> validate_datum(int n, std::vector<BlockDatum<R>> blocks) {
    if (n < 1) throw Error("vertex count must be positive");
    detail::check_block_data(blocks);
    std::set<VertexId> seen;
    for (auto& b : blocks)
        for (VertexId v : b.vertices) {
            if (v < 1 || v > n) throw Error("vertex id out of range [1..n]");
            seen.insert(v);
        }
    if (static_cast<int>(seen.size()) != n)
        throw Disconnected("some vertices in [1..n] belong to no block");
    GraphDatum<R> g;
    g.vertices.assign(seen.begin(), seen.end());
    g.blocks = std::move(blocks);
    for (size_t i = 0; i < g.blocks.size(); ++i) {
        g.blocks[i].id = static_cast<int>(i);
        g.blocks[i].dstar.set_labels(g.blocks[i].vertices, g.blocks[i].vertices);
    }
    g.bct = build_block_cut_tree(g.topology());
    return g;
}

// Same validation but the vertex set is whatever the blocks cover (used
// for induced sub-data that keep their original vertex ids).
template <ScalarRing R>
GraphDatum<R> validate_datum_sparse_ids(std::vector<BlockDatum<R>> blocks) {
    detail::check_block_data(blocks);
    std::set<VertexId> seen;
    for (auto& b : blocks)
        for (VertexId v : b.vertices) seen.insert(v);
    if (seen.empty()) throw Disconnected("no vertices");
    GraphDatum<R> g;
    g.vertices.assign(seen.begin(), seen.end());
    g.blocks = std::move(blocks);
    for (size_t i = 0; i < g.blocks.size(); ++i) {
        g.blocks[i].id = static_cast<int>(i);
        g.blocks[i].dstar.set_labels(g.blocks[i].vertices, g.blocks[i].vertices);
    }
    g.bct = build_block_cut_tree(g.topology());
    return g;
}

template <ScalarRing R>
SubgraphItoE subgraph_i_to_e(const GraphDatum<R>& g, VertexId i, int block_index) {
    if (block_index < 0 || block_index >= static_cast<int>(g.blocks.size()))
        throw VertexNotInBlock("block index out of range");
    const auto& verts = g.blocks[block_index].vertices;
    if (std::find(verts.begin(), verts.end(), i) == verts.end())
        throw VertexNotInBlock("vertex does not belong to the block");
    return subgraph_i_to_e_topo(g.topology(), g.bct, i, block_index);
}

// Induced datum on a vertex subset: blocks survive whole or shrink to
// sub-blocks of size >= 2 (restricted D*), otherwise disappear.
template <ScalarRing R>
GraphDatum<R> restrict_datum(const GraphDatum<R>& g, const std::set<VertexId>& keep) {
    for (VertexId v : keep)
        if (!g.has_vertex(v)) throw InvalidRestriction("kept vertex not in the graph");
    std::vector<BlockDatum<R>> out;
    std::set<VertexId> covered;
    for (auto& b : g.blocks) {
        std::vector<VertexId> sub;
        for (VertexId v : b.vertices)
            if (keep.count(v)) sub.push_back(v);
        if (sub.size() < 2) continue;
        BlockDatum<R> nb;
        nb.vertices = sub;
        nb.a = b.a;
        nb.dstar = b.dstar.submatrix_labels(sub, sub);
        covered.insert(sub.begin(), sub.end());
        out.push_back(std::move(nb));
    }
    if (covered.size() != keep.size())
        throw InvalidRestriction("restriction leaves vertices outside every block");
    try {
        return validate_datum_sparse_ids(std::move(out));
    } catch (const Error& e) {
        throw InvalidRestriction(std::string("restricted structure invalid: ") + e.what());
    }
}

// Admissibility classification for removing rows I and columns J.
struct MinorClass {
    enum class Kind { Equal, DeltaTwo, DeltaMoreThanTwo, Inadmissible };
    Kind kind = Kind::Inadmissible;
    VertexId i0 = 0, j0 = 0, p_i0 = 0, p_j0 = 0;
    std::string reason;

    bool admissible() const { return kind != Kind::Inadmissible; }
};

namespace detail {

// Condition (b): candidates v outside I union J whose removal pens `u`
// inside `inside`. Returns the candidate list.
std::vector<VertexId> separating_cut_vertices(const BlockTopology& topo, VertexId u,
                                              const std::set<VertexId>& inside,
                                              const std::set<VertexId>& excluded);

bool restriction_topology_valid(const BlockTopology& topo, const std::set<VertexId>& keep);

}  // namespace detail

template <ScalarRing R>
MinorClass classify_minor(const GraphDatum<R>& g, const std::set<VertexId>& I,
                          const std::set<VertexId>& J) {
    MinorClass out;
    auto fail = [&](const std::string& why) {
        out.kind = MinorClass::Kind::Inadmissible;
        out.reason = why;
        return out;
    };
    for (VertexId v : I)
        if (!g.has_vertex(v)) return fail("row set contains unknown vertex");
    for (VertexId v : J)
        if (!g.has_vertex(v)) return fail("column set contains unknown vertex");
    if (I.size() != J.size()) return fail("condition (a): |I| != |J|");
    if (I.size() + 3 > g.n()) return fail("condition (a): |I| > |V| - 3");

    BlockTopology topo = g.topology();
    std::set<VertexId> removed_both;
    std::set_intersection(I.begin(), I.end(), J.begin(), J.end(),
                          std::inserter(removed_both, removed_both.begin()));
    std::set<VertexId> excluded;  // I union J
    std::set_union(I.begin(), I.end(), J.begin(), J.end(),
                   std::inserter(excluded, excluded.begin()));

    // Condition (c): induced structures stay valid and connected.
    auto complement = [&](const std::set<VertexId>& drop) {
        std::set<VertexId> keep(g.vertices.begin(), g.vertices.end());
        for (VertexId v : drop) keep.erase(v);
        return keep;
    };
    if (!detail::restriction_topology_valid(topo, complement(I)))
        return fail("condition (c): V \\ I not connected");
    if (!detail::restriction_topology_valid(topo, complement(J)))
        return fail("condition (c): V \\ J not connected");
    if (!detail::restriction_topology_valid(topo, complement(removed_both)))
        return fail("condition (c): V \\ (I cap J) not connected");

    // Condition (b), literal per-vertex reading.
    std::set<VertexId> IminusJ, JminusI;
    std::set_difference(I.begin(), I.end(), J.begin(), J.end(),
                        std::inserter(IminusJ, IminusJ.begin()));
    std::set_difference(J.begin(), J.end(), I.begin(), I.end(),
                        std::inserter(JminusI, JminusI.begin()));
    for (VertexId u : IminusJ) {
        auto cands = detail::separating_cut_vertices(topo, u, I, excluded);
        if (cands.empty()) return fail("condition (b): no separating cut vertex");
        if (cands.size() > 1) return fail("condition (b): separating cut vertex not unique");
    }
    for (VertexId u : JminusI) {
        auto cands = detail::separating_cut_vertices(topo, u, J, excluded);
        if (cands.empty()) return fail("condition (b): no separating cut vertex");
        if (cands.size() > 1) return fail("condition (b): separating cut vertex not unique");
    }

    size_t delta = IminusJ.size() + JminusI.size();
    if (delta == 0) {
        out.kind = MinorClass::Kind::Equal;
        return out;
    }
    if (delta > 2) {
        out.kind = MinorClass::Kind::DeltaMoreThanTwo;
        return out;
    }
    // |I delta J| = 2: pendant structure in the graph reduced to E_circ.
    out.i0 = *IminusJ.begin();
    out.j0 = *JminusI.begin();
    GraphDatum<R> reduced;
    try {
        reduced = restrict_datum(g, complement(removed_both));
    } catch (const InvalidRestriction&) {
        return fail("condition (c): reduced structure invalid");
    }
    auto pendant_neighbor = [&](VertexId u) -> VertexId {
        std::vector<const BlockDatum<R>*> holding;
        for (auto& b : reduced.blocks)
            if (std::find(b.vertices.begin(), b.vertices.end(), u) != b.vertices.end())
                holding.push_back(&b);
        if (holding.size() != 1 || holding[0]->vertices.size() != 2) return 0;
        return holding[0]->vertices[0] == u ? holding[0]->vertices[1] : holding[0]->vertices[0];
    };
    out.p_i0 = pendant_neighbor(out.i0);
    out.p_j0 = pendant_neighbor(out.j0);
    if (out.p_i0 == 0 || out.p_j0 == 0) return fail("pendant structure violated");
    out.kind = MinorClass::Kind::DeltaTwo;
    return out;
}

struct WeightedEdge {
    VertexId u = 0, v = 0;
    // a is the block's additive weight; m_uv / m_vu the directed entries.
    // Template-free storage happens at the call site.
};

// Biconnected components of a connected simple undirected graph given as
// an edge list; returns components as lists of edge indices.
std::vector<std::vector<size_t>> biconnected_components(
    int n_hint, const std::vector<std::pair<VertexId, VertexId>>& edges);

// Edge-list ingestion: each biconnected component must be a single edge or
// a clique with complete pair data.
template <ScalarRing R>
struct EdgeInput {
    VertexId u, v;
    R a, m_uv, m_vu;
};

template <ScalarRing R>
std::vector<BlockDatum<R>> blocks_from_edges(int n, const std::vector<EdgeInput<R>>& edges) {
    std::vector<std::pair<VertexId, VertexId>> plain;
    std::set<std::pair<VertexId, VertexId>> seen;
    for (auto& e : edges) {
        if (e.u == e.v) throw Error("self-loop in edge list");
        if (e.u < 1 || e.u > n || e.v < 1 || e.v > n)
            throw Error("edge endpoint out of range");
        auto key = std::minmax(e.u, e.v);
        if (!seen.insert({key.first, key.second}).second)
            throw Error("duplicate edge in edge list");
        plain.push_back({e.u, e.v});
    }
    auto comps = biconnected_components(n, plain);
    std::vector<BlockDatum<R>> out;
    for (auto& comp : comps) {
        std::set<VertexId> vs;
        for (size_t ei : comp) {
            vs.insert(edges[ei].u);
            vs.insert(edges[ei].v);
        }
        size_t k = vs.size();
        if (comp.size() != k * (k - 1) / 2)
            throw IncompleteBlockMatrix(
                "biconnected component is not a clique; within-block distances undetermined");
        BlockDatum<R> b;
        b.vertices.assign(vs.begin(), vs.end());
        b.dstar = Matrix<R>::identity(k);
        b.dstar.set_labels(b.vertices, b.vertices);
        b.a = edges[comp[0]].a;
        for (size_t ei : comp) {
            if (!(edges[ei].a == b.a))
                throw InconsistentAdditiveWeight("additive weight varies inside one block");
            b.dstar.at_labels(edges[ei].u, edges[ei].v) = edges[ei].m_uv;
            b.dstar.at_labels(edges[ei].v, edges[ei].u) = edges[ei].m_vu;
        }
        out.push_back(std::move(b));
    }
    return out;
}

}  // namespace amdist
