#include "amdist/graph.hpp"

#include <functional>
#include <queue>

#include "amdist/errors.hpp"

namespace amdist {

namespace {

struct UnionFind {
    std::map<VertexId, VertexId> parent;
    VertexId find(VertexId v) {
        auto it = parent.find(v);
        if (it == parent.end()) {
            parent[v] = v;
            return v;
        }
        if (it->second == v) return v;
        return it->second = find(it->second);
    }
    void unite(VertexId a, VertexId b) { parent[find(a)] = find(b); }
};

void check_overlaps(const BlockTopology& topo) {
    for (size_t i = 0; i < topo.block_vertices.size(); ++i)
        for (size_t j = i + 1; j < topo.block_vertices.size(); ++j) {
            std::set<VertexId> a(topo.block_vertices[i].begin(), topo.block_vertices[i].end());
            int shared = 0;
            for (VertexId v : topo.block_vertices[j]) shared += a.count(v);
            if (shared >= 2)
                throw OverlapTooLarge("blocks " + std::to_string(i) + " and " +
                                      std::to_string(j) + " share " + std::to_string(shared) +
                                      " vertices");
        }
}

}  // namespace

BlockCutTree build_block_cut_tree(const BlockTopology& topo) {
    if (topo.block_vertices.empty()) throw Disconnected("no blocks");
    for (auto& bv : topo.block_vertices)
        if (bv.size() < 2) throw EmptyBlock("block with fewer than 2 vertices");
    check_overlaps(topo);

    BlockCutTree bct;
    bct.cuts_of_block.resize(topo.block_vertices.size());
    for (size_t b = 0; b < topo.block_vertices.size(); ++b) {
        bct.block_nodes.push_back(static_cast<int>(b));
        for (VertexId v : topo.block_vertices[b]) {
            bct.block_degree[v]++;
            bct.blocks_of[v].push_back(static_cast<int>(b));
        }
    }
    for (auto& [v, d] : bct.block_degree)
        if (d >= 2) bct.cut_nodes.push_back(v);
    size_t incidence_edges = 0;
    for (size_t b = 0; b < topo.block_vertices.size(); ++b)
        for (VertexId v : topo.block_vertices[b])
            if (bct.is_cut(v)) {
                bct.cuts_of_block[b].push_back(v);
                ++incidence_edges;
            }

    // Connectivity of the underlying structure.
    UnionFind uf;
    for (auto& bv : topo.block_vertices)
        for (size_t k = 1; k < bv.size(); ++k) uf.unite(bv[0], bv[k]);
    VertexId root = uf.find(topo.vertices.front());
    for (VertexId v : topo.vertices)
        if (uf.find(v) != root) throw Disconnected("block structure is not connected");

    // Connected bipartite incidence graph is a tree iff |E| = |nodes| - 1.
    size_t nodes = bct.block_nodes.size() + bct.cut_nodes.size();
    if (incidence_edges + 1 != nodes)
        throw CyclicBlockStructure("block/cut-vertex incidence contains a cycle");
    return bct;
}

bool topology_valid(const BlockTopology& topo) {
    try {
        build_block_cut_tree(topo);
        return true;
    } catch (const Error&) {
        return false;
    }
}

std::vector<std::set<VertexId>> components_without_vertex(const BlockTopology& topo,
                                                          VertexId v) {
    UnionFind uf;
    for (VertexId u : topo.vertices)
        if (u != v) uf.find(u);
    for (auto& bv : topo.block_vertices) {
        VertexId anchor = 0;
        for (VertexId u : bv) {
            if (u == v) continue;
            if (anchor == 0)
                anchor = u;
            else
                uf.unite(anchor, u);
        }
    }
    std::map<VertexId, std::set<VertexId>> groups;
    for (VertexId u : topo.vertices)
        if (u != v) groups[uf.find(u)].insert(u);
    std::vector<std::set<VertexId>> out;
    for (auto& [r, s] : groups) out.push_back(std::move(s));
    return out;
}

SubgraphItoE subgraph_i_to_e_topo(const BlockTopology& topo, const BlockCutTree& bct,
                                  VertexId i, int block_index) {
    SubgraphItoE out;
    std::vector<bool> visited(topo.block_vertices.size(), false);
    std::queue<int> q;
    q.push(block_index);
    visited[block_index] = true;
    while (!q.empty()) {
        int b = q.front();
        q.pop();
        out.blocks.push_back(b);
        for (VertexId v : topo.block_vertices[b]) {
            out.vertices.insert(v);
            if (v == i) continue;
            auto it = bct.blocks_of.find(v);
            for (int nb : it->second)
                if (!visited[nb]) {
                    visited[nb] = true;
                    q.push(nb);
                }
        }
    }
    out.vertices.insert(i);
    std::sort(out.blocks.begin(), out.blocks.end());
    return out;
}

namespace detail {

std::vector<VertexId> separating_cut_vertices(const BlockTopology& topo, VertexId u,
                                              const std::set<VertexId>& inside,
                                              const std::set<VertexId>& excluded) {
    std::vector<VertexId> out;
    for (VertexId v : topo.vertices) {
        if (v == u || excluded.count(v)) continue;
        auto comps = components_without_vertex(topo, v);
        for (auto& comp : comps) {
            if (!comp.count(u)) continue;
            bool contained = true;
            for (VertexId w : comp)
                if (!inside.count(w)) {
                    contained = false;
                    break;
                }
            if (contained && comps.size() > 1) out.push_back(v);
            break;
        }
    }
    return out;
}

bool restriction_topology_valid(const BlockTopology& topo, const std::set<VertexId>& keep) {
    if (keep.empty()) return false;
    if (keep.size() == 1) return false;  // sub-blocks need >= 2 vertices
    BlockTopology sub;
    std::set<VertexId> covered;
    for (auto& bv : topo.block_vertices) {
        std::vector<VertexId> s;
        for (VertexId v : bv)
            if (keep.count(v)) s.push_back(v);
        if (s.size() < 2) continue;
        covered.insert(s.begin(), s.end());
        sub.block_vertices.push_back(std::move(s));
    }
    if (covered.size() != keep.size()) return false;
    sub.vertices.assign(keep.begin(), keep.end());
    return topology_valid(sub);
}

}  // namespace detail

std::vector<std::vector<size_t>> biconnected_components(
    int n_hint, const std::vector<std::pair<VertexId, VertexId>>& edges) {
    (void)n_hint;
    std::map<VertexId, std::vector<size_t>> incident;
    std::set<VertexId> verts;
    for (size_t e = 0; e < edges.size(); ++e) {
        incident[edges[e].first].push_back(e);
        incident[edges[e].second].push_back(e);
        verts.insert(edges[e].first);
        verts.insert(edges[e].second);
    }
    if (verts.empty()) throw Disconnected("empty edge list");

    std::map<VertexId, int> disc, low;
    std::vector<size_t> edge_stack;
    std::vector<std::vector<size_t>> comps;
    int timer = 0;

    // Iterative Hopcroft-Tarjan lowpoint DFS.
    struct Frame {
        VertexId v;
        VertexId parent_edge_peer;
        size_t edge_idx;
    };
    std::function<void(VertexId, size_t)> dfs = [&](VertexId v, size_t parent_edge) {
        disc[v] = low[v] = ++timer;
        for (size_t e : incident[v]) {
            if (e == parent_edge) continue;
            VertexId w = edges[e].first == v ? edges[e].second : edges[e].first;
            if (!disc.count(w)) {
                edge_stack.push_back(e);
                dfs(w, e);
                low[v] = std::min(low[v], low[w]);
                if (low[w] >= disc[v]) {
                    std::vector<size_t> comp;
                    while (true) {
                        size_t top = edge_stack.back();
                        edge_stack.pop_back();
                        comp.push_back(top);
                        if (top == e) break;
                    }
                    comps.push_back(std::move(comp));
                }
            } else if (disc[w] < disc[v]) {
                edge_stack.push_back(e);
                low[v] = std::min(low[v], disc[w]);
            }
        }
    };
    VertexId start = *verts.begin();
    dfs(start, static_cast<size_t>(-1));
    for (VertexId v : verts)
        if (!disc.count(v)) throw Disconnected("underlying undirected graph is disconnected");
    return comps;
}

}  // namespace amdist
