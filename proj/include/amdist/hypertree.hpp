#pragma once

#include "amdist/inverse.hpp"

namespace amdist {

// One bidirected clique block with head/tail weights:
// (D*_{K_p})_{i->j} = m_i * m'_j off the diagonal.
template <ScalarRing R>
struct CliqueDatum {
    size_t p = 0;
    std::vector<R> m, mp;
    R a;
};

template <ScalarRing R>
Matrix<R> clique_dstar(const CliqueDatum<R>& c) {
    Matrix<R> out(c.p, c.p);
    for (size_t i = 0; i < c.p; ++i)
        for (size_t j = 0; j < c.p; ++j)
            out(i, j) = (i == j) ? RingTraits<R>::one() : c.m[i] * c.mp[j];
    return out;
}

namespace detail {

// prod over v of (1 - m_v m'_v), skipping up to two indices.
template <ScalarRing R>
R one_minus_prod(const CliqueDatum<R>& c, size_t skip1 = SIZE_MAX, size_t skip2 = SIZE_MAX) {
    R acc = RingTraits<R>::one();
    for (size_t v = 0; v < c.p; ++v) {
        if (v == skip1 || v == skip2) continue;
        acc = acc * (RingTraits<R>::one() - c.m[v] * c.mp[v]);
    }
    return acc;
}

// W_e = (p-1) P_e + sum_{v<w} (m_v - m_w)(m'_v - m'_w) prod_{u not in {v,w}} (1 - m_u m'_u);
// the cleared numerator of the per-block bracket term.
template <ScalarRing R>
R clique_w(const CliqueDatum<R>& c) {
    R acc = RingTraits<R>::from_int(static_cast<long>(c.p) - 1) * one_minus_prod(c);
    for (size_t v = 0; v < c.p; ++v)
        for (size_t w = v + 1; w < c.p; ++w)
            acc = acc + (c.m[v] - c.m[w]) * (c.mp[v] - c.mp[w]) * one_minus_prod(c, v, w);
    return acc;
}

}  // namespace detail

// det and cof of D*_{K_p} in cleared form (no divisions at all).
template <ScalarRing R>
std::pair<R, R> clique_det_cof(const CliqueDatum<R>& c) {
    R p_all = detail::one_minus_prod(c);
    R det = p_all;
    for (size_t v = 0; v < c.p; ++v)
        det = det + c.m[v] * c.mp[v] * detail::one_minus_prod(c, v);
    // cof = p * P + sum_v m_v m'_v prod_{w != v} + pairwise difference terms
    R cof = RingTraits<R>::from_int(static_cast<long>(c.p)) * p_all;
    for (size_t v = 0; v < c.p; ++v)
        cof = cof + c.m[v] * c.mp[v] * detail::one_minus_prod(c, v);
    for (size_t v = 0; v < c.p; ++v)
        for (size_t w = v + 1; w < c.p; ++w)
            cof = cof + (c.m[v] - c.m[w]) * (c.mp[v] - c.mp[w]) * detail::one_minus_prod(c, v, w);
    return {det, cof};
}

template <ScalarRing R>
struct HypertreeBlock {
    std::vector<VertexId> vertices;
    CliqueDatum<R> clique;
};

template <ScalarRing R>
GraphDatum<R> hypertree_datum(int n, const std::vector<HypertreeBlock<R>>& blocks) {
    std::vector<BlockDatum<R>> bd;
    for (auto& hb : blocks) {
        if (hb.vertices.size() != hb.clique.p)
            throw InvalidHypertree("clique size does not match vertex list");
        BlockDatum<R> b;
        b.vertices = hb.vertices;
        b.a = hb.clique.a;
        b.dstar = clique_dstar(hb.clique);
        bd.push_back(std::move(b));
    }
    try {
        return validate_datum(n, std::move(bd));
    } catch (const Error& e) {
        throw InvalidHypertree(std::string("invalid hypertree structure: ") + e.what());
    }
}

// Closed-form (kappa, det, cof) for a hypertree, assembled from per-block
// cleared quantities only.
template <ScalarRing R>
InvariantTriple<R> hypertree_invariants(int n, const std::vector<HypertreeBlock<R>>& blocks) {
    hypertree_datum(n, blocks);  // structure validation
    const size_t k = blocks.size();
    std::vector<R> kappa_e(k), w_e(k), a_pow(k);
    for (size_t e = 0; e < k; ++e) {
        const CliqueDatum<R>& c = blocks[e].clique;
        R t = clique_det_cof(c).first;
        a_pow[e] = ring_pow(c.a, static_cast<long>(c.p) - 1);
        kappa_e[e] = a_pow[e] * t;
        w_e[e] = detail::clique_w(c);
    }
    InvariantTriple<R> out;
    out.method = TripleMethod::GHH;
    out.kappa = RingTraits<R>::one();
    for (size_t e = 0; e < k; ++e) out.kappa = out.kappa * kappa_e[e];
    out.det = RingTraits<R>::zero();
    out.cof = out.kappa;
    for (size_t e = 0; e < k; ++e) {
        R others = RingTraits<R>::one();
        for (size_t f = 0; f < k; ++f)
            if (f != e) others = others * kappa_e[f];
        // det(D_e) = -a_e^{p_e} W_e and cof(D_e) - kappa_e = a_e^{p_e-1} W_e.
        out.det = out.det - blocks[e].clique.a * a_pow[e] * w_e[e] * others;
        out.cof = out.cof + a_pow[e] * w_e[e] * others;
    }
    return out;
}

// Weighted sqrt(q)-specialization: kappa and det(D + xJ) depend only on the
// multiset {(p_e, w_e)}.
template <ScalarRing R>
std::pair<R, R> hypertree_q(const std::vector<std::pair<int, R>>& blocks, const R& q,
                            const R& x) {
    const size_t k = blocks.size();
    std::vector<R> kappa_e(k);
    for (size_t e = 0; e < k; ++e) {
        auto [p, w] = blocks[e];
        kappa_e[e] = ring_pow(-w, p - 1) *
                     (RingTraits<R>::one() + RingTraits<R>::from_int(p - 1) * q);
    }
    R kappa = RingTraits<R>::one();
    for (auto& ke : kappa_e) kappa = kappa * ke;
    R detx = x * kappa;
    for (size_t e = 0; e < k; ++e) {
        auto [p, w] = blocks[e];
        R term = RingTraits<R>::from_int(p - 1) * (w + x * (RingTraits<R>::one() - q)) *
                 ring_pow(-w, p - 1);
        for (size_t f = 0; f < k; ++f)
            if (f != e) term = term * kappa_e[f];
        detx = detx + term;
    }
    return {kappa, detx};
}

// The sqrt(q) block encoded without adjoining a square root: m_v = q,
// m'_v = 1 gives the same products m_v m'_w = q everywhere.
template <ScalarRing R>
CliqueDatum<R> q_clique(int p, const R& w, const R& q) {
    CliqueDatum<R> c;
    c.p = static_cast<size_t>(p);
    c.m.assign(c.p, q);
    c.mp.assign(c.p, RingTraits<R>::one());
    c.a = w / (q - RingTraits<R>::one());
    return c;
}

// Core-plus-pendant-cliques determinant: cores must have constant row sums.
template <ScalarRing R>
struct PendantCliqueInput {
    GraphDatum<R> g;
    std::map<int, CliqueDatum<R>> cliques;  // block index -> clique data
};

template <ScalarRing R>
R pendant_clique_det(const PendantCliqueInput<R>& in, const R& x) {
    const GraphDatum<R>& g = in.g;
    const size_t k = g.blocks.size();
    for (auto& [idx, c] : in.cliques) {
        if (idx < 0 || idx >= static_cast<int>(k))
            throw InvalidHypertree("clique index out of range");
        if (!(clique_dstar(c) == g.blocks[idx].dstar) || !(c.a == g.blocks[idx].a))
            throw InvalidHypertree("clique data disagrees with the block datum");
    }
    // Cliques must be removable pendant-first, leaving the cores connected.
    {
        std::set<int> remaining;
        for (size_t b = 0; b < k; ++b) remaining.insert(static_cast<int>(b));
        bool changed = true;
        while (changed) {
            changed = false;
            for (int b : std::vector<int>(remaining.begin(), remaining.end())) {
                if (!in.cliques.count(b)) continue;
                int shared_cuts = 0;
                for (VertexId v : g.blocks[b].vertices) {
                    for (int other : g.bct.blocks_of.at(v))
                        if (other != b && remaining.count(other)) {
                            ++shared_cuts;
                            break;
                        }
                }
                if (shared_cuts <= 1 && remaining.size() > 1) {
                    remaining.erase(b);
                    changed = true;
                }
            }
        }
        for (int b : remaining)
            if (in.cliques.count(b) && remaining.size() > 1)
                throw InvalidHypertree("cliques are not attached pendant-style to the cores");
    }

    R value = RingTraits<R>::one();
    R bracket = x;
    for (size_t b = 0; b < k; ++b) {
        const BlockDatum<R>& blk = g.blocks[b];
        R kappa_b = ring_pow(blk.a, static_cast<long>(blk.p()) - 1) * exact_det(blk.dstar);
        value = value * kappa_b;
        auto it = in.cliques.find(static_cast<int>(b));
        if (it == in.cliques.end()) {
            // Core block: D_j e = d_j e must hold exactly.
            size_t p = blk.p();
            Matrix<R> dj = (blk.dstar - Matrix<R>::ones(p, p)) * blk.a;
            R d_j = RingTraits<R>::zero();
            for (size_t c = 0; c < p; ++c) d_j = d_j + dj(0, c);
            for (size_t r = 1; r < p; ++r) {
                R s = RingTraits<R>::zero();
                for (size_t c = 0; c < p; ++c) s = s + dj(r, c);
                if (!(s == d_j))
                    throw RowSumNotConstant("core block " + std::to_string(b) +
                                            " has unequal row sums");
            }
            R denom = d_j + blk.a * RingTraits<R>::from_int(static_cast<long>(p));
            if (amdist::is_zero(denom))
                throw DenominatorVanishes("d_j + a_j p_j vanishes for core block");
            bracket = bracket + (blk.a - x) * d_j / denom;
        } else {
            const CliqueDatum<R>& c = it->second;
            R t_e = clique_det_cof(c).first;
            if (amdist::is_zero(t_e))
                throw DenominatorVanishes("det D*_e vanishes for clique block");
            bracket = bracket + (x - c.a) * detail::clique_w(c) / t_e;
        }
    }
    return value * bracket;
}

// Closed-form inverse parts for hypertrees; dstar_inv comes from the
// general block assembly, everything else from the displayed formulas.
template <ScalarRing R>
InverseParts<R> hypertree_inverse_parts(int n, const std::vector<HypertreeBlock<R>>& blocks) {
    GraphDatum<R> g = hypertree_datum(n, blocks);
    const size_t k = blocks.size();
    InverseParts<R> parts;
    parts.dstar_inv = dstar_inverse_assembled(g);

    std::vector<R> t_e(k), w_e(k);
    for (size_t e = 0; e < k; ++e) {
        t_e[e] = clique_det_cof(blocks[e].clique).first;
        if (amdist::is_zero(t_e[e])) throw SingularBlock("det D*_e = 0");
        if (amdist::is_zero(blocks[e].clique.a)) throw NonInvertibleWeight("a_e = 0");
        w_e[e] = detail::clique_w(blocks[e].clique);
    }

    // alpha = sum_e -a_e W_e / T_e.
    parts.alpha = RingTraits<R>::zero();
    for (size_t e = 0; e < k; ++e)
        parts.alpha = parts.alpha - blocks[e].clique.a * w_e[e] / t_e[e];

    parts.kappa = RingTraits<R>::one();
    for (size_t e = 0; e < k; ++e)
        parts.kappa =
            parts.kappa * ring_pow(blocks[e].clique.a, static_cast<long>(blocks[e].clique.p) - 1) *
            t_e[e];
    parts.det_d = parts.alpha * parts.kappa;
    if (amdist::is_zero(parts.det_d)) throw SingularDistanceMatrix("det(D) = 0");

    std::map<VertexId, size_t> pos;
    for (size_t i = 0; i < g.n(); ++i) pos[g.vertices[i]] = i;
    auto local_index = [&](size_t e, VertexId v) {
        const auto& vs = blocks[e].vertices;
        for (size_t i = 0; i < vs.size(); ++i)
            if (vs[i] == v) return i;
        throw VertexMissing("vertex not in block");
    };

    // tau_in / tau_out with a single division by T_e per incident block.
    parts.tau_in.assign(g.n(), RingTraits<R>::one());
    parts.tau_out.assign(g.n(), RingTraits<R>::one());
    for (size_t e = 0; e < k; ++e) {
        const CliqueDatum<R>& c = blocks[e].clique;
        for (VertexId vtx : blocks[e].vertices) {
            size_t v = local_index(e, vtx);
            R acc_in = RingTraits<R>::zero(), acc_out = RingTraits<R>::zero();
            for (size_t w = 0; w < c.p; ++w) {
                if (w == v) continue;
                R rest = detail::one_minus_prod(c, v, w);
                acc_in = acc_in +
                         c.m[w] * c.mp[v] * (RingTraits<R>::one() - c.m[v] * c.mp[w]) * rest;
                acc_out = acc_out +
                          c.mp[w] * c.m[v] * (RingTraits<R>::one() - c.mp[v] * c.m[w]) * rest;
            }
            parts.tau_in[pos[vtx]] = parts.tau_in[pos[vtx]] - acc_in / t_e[e];
            parts.tau_out[pos[vtx]] = parts.tau_out[pos[vtx]] - acc_out / t_e[e];
        }
    }

    // Laplacian entries per the displayed fractions.
    parts.laplacian = Matrix<R>(g.n(), g.n());
    parts.laplacian.set_labels(g.vertices, g.vertices);
    for (size_t e = 0; e < k; ++e) {
        const CliqueDatum<R>& c = blocks[e].clique;
        for (VertexId vv : blocks[e].vertices)
            for (VertexId wv : blocks[e].vertices) {
                if (vv == wv) continue;
                size_t v = local_index(e, vv), w = local_index(e, wv);
                parts.laplacian.at_labels(vv, wv) =
                    c.m[v] * c.mp[w] * detail::one_minus_prod(c, v, w) / (c.a * t_e[e]);
            }
    }
    for (size_t e = 0; e < k; ++e) {
        const CliqueDatum<R>& c = blocks[e].clique;
        for (VertexId wv : blocks[e].vertices) {
            size_t w = local_index(e, wv);
            R acc = RingTraits<R>::zero();
            for (size_t u = 0; u < c.p; ++u) {
                if (u == w) continue;
                acc = acc + c.m[u] * c.mp[w] * detail::one_minus_prod(c, u, w);
            }
            parts.laplacian.at_labels(wv, wv) =
                parts.laplacian.at_labels(wv, wv) - acc / (c.a * t_e[e]);
        }
    }

    // beta_i = (1/alpha) sum_{e ni i} (1/a_e) sum_{f in G_{i->e}} -a_f W_f / T_f.
    BlockTopology topo = g.topology();
    for (VertexId i : g.vertices) {
        R acc = RingTraits<R>::zero();
        for (int e : g.bct.blocks_of.at(i)) {
            SubgraphItoE sub = subgraph_i_to_e_topo(topo, g.bct, i, e);
            R inner = RingTraits<R>::zero();
            for (int f : sub.blocks)
                inner = inner - blocks[f].clique.a * w_e[f] / t_e[f];
            acc = acc + inner / blocks[e].clique.a;
        }
        parts.beta[i] = acc / parts.alpha;
    }

    // C via the same subgraph partition as the general path.
    parts.c_matrix = Matrix<R>(g.n(), g.n());
    parts.c_matrix.set_labels(g.vertices, g.vertices);
    for (VertexId i : g.vertices) {
        parts.c_matrix.at_labels(i, i) = parts.beta.at(i);
        for (int e : g.bct.blocks_of.at(i)) {
            SubgraphItoE sub = subgraph_i_to_e_topo(topo, g.bct, i, e);
            R val = parts.beta.at(i) - RingTraits<R>::one() / blocks[e].clique.a;
            for (VertexId j : sub.vertices)
                if (j != i) parts.c_matrix.at_labels(i, j) = val;
        }
    }
    return parts;
}

}  // namespace amdist
