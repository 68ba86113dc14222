#pragma once

#include "amdist/invariants.hpp"

namespace amdist {

template <ScalarRing R>
struct InverseParts {
    R alpha;                       // det(D) / kappa(D)
    std::vector<R> tau_in;         // e^T (D*)^{-1}, aligned with vertex order
    std::vector<R> tau_out;        // (D*)^{-1} e
    std::map<VertexId, R> beta;
    Matrix<R> c_matrix;
    Matrix<R> laplacian;
    Matrix<R> dstar_inv;
    R det_d, kappa;
};

// (D*_G)^{-1} assembled from embedded block inverses:
// sum_e [(D*_e)^{-1}] + Id - sum_e [Id_{p_e}].
template <ScalarRing R>
Matrix<R> dstar_inverse_assembled(const GraphDatum<R>& g) {
    const size_t n = g.n();
    Matrix<R> out = Matrix<R>::identity(n);
    out.set_labels(g.vertices, g.vertices);
    for (auto& b : g.blocks) {
        R det_star = exact_det(b.dstar);
        if (amdist::is_zero(det_star))
            throw SingularBlock("block " + std::to_string(b.id) +
                                " has singular multiplicative matrix");
        Matrix<R> inv = solve_inverse(b.dstar);
        for (size_t i = 0; i < b.p(); ++i)
            for (size_t j = 0; j < b.p(); ++j) {
                R delta = inv(i, j);
                if (i == j) delta = delta - RingTraits<R>::one();
                if (!amdist::is_zero(delta)) {
                    R& cell = out.at_labels(b.vertices[i], b.vertices[j]);
                    cell = cell + delta;
                }
            }
    }
    return out;
}

template <ScalarRing R>
InverseParts<R> compute_parts(const GraphDatum<R>& g) {
    const size_t n = g.n();
    const size_t k = g.blocks.size();
    for (auto& b : g.blocks)
        if (amdist::is_zero(b.a))
            throw NonInvertibleWeight("a_e = 0 for block " + std::to_string(b.id));
    InverseParts<R> parts;
    parts.dstar_inv = dstar_inverse_assembled(g);  // also rejects singular blocks

    AmMatrices<R> am = build_matrices(g);
    parts.det_d = exact_det(am.d);
    if (amdist::is_zero(parts.det_d))
        throw SingularDistanceMatrix("det(D) = 0");

    auto bi = all_block_invariants(g);
    parts.kappa = RingTraits<R>::one();
    for (auto& b : bi) parts.kappa = parts.kappa * b.kappa_e;
    parts.alpha = parts.det_d / parts.kappa;

    parts.tau_in.assign(n, RingTraits<R>::zero());
    parts.tau_out.assign(n, RingTraits<R>::zero());
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            parts.tau_in[j] = parts.tau_in[j] + parts.dstar_inv(i, j);
            parts.tau_out[i] = parts.tau_out[i] + parts.dstar_inv(i, j);
        }

    // beta_i, in cleared form: one division at the very end.
    //   beta_i * det * prod_{e' ni i} a_e' =
    //     sum_{e ni i} prod_{e' ni i, e' != e} a_e'
    //         * sum_{f subset G_{i->e}} det_f * prod_{g != f} kappa_g
    BlockTopology topo = g.topology();
    for (VertexId i : g.vertices) {
        const auto& my_blocks = g.bct.blocks_of.at(i);
        R numer = RingTraits<R>::zero();
        R a_prod = RingTraits<R>::one();
        for (int e : my_blocks) a_prod = a_prod * g.blocks[e].a;
        for (int e : my_blocks) {
            R a_others = RingTraits<R>::one();
            for (int e2 : my_blocks)
                if (e2 != e) a_others = a_others * g.blocks[e2].a;
            SubgraphItoE sub = subgraph_i_to_e_topo(topo, g.bct, i, e);
            R inner = RingTraits<R>::zero();
            for (int f : sub.blocks) {
                R term = bi[f].det_e;
                for (size_t gph = 0; gph < k; ++gph)
                    if (static_cast<int>(gph) != f) term = term * bi[gph].kappa_e;
                inner = inner + term;
            }
            numer = numer + a_others * inner;
        }
        parts.beta[i] = numer / (parts.det_d * a_prod);
    }

    // C matrix: rows indexed by i; off-diagonal entries depend on which
    // G_{i->e} the column vertex falls into.
    parts.c_matrix = Matrix<R>(n, n);
    parts.c_matrix.set_labels(g.vertices, g.vertices);
    for (VertexId i : g.vertices) {
        parts.c_matrix.at_labels(i, i) = parts.beta.at(i);
        for (int e : g.bct.blocks_of.at(i)) {
            SubgraphItoE sub = subgraph_i_to_e_topo(topo, g.bct, i, e);
            R val = parts.beta.at(i) - RingTraits<R>::one() / g.blocks[e].a;
            for (VertexId j : sub.vertices)
                if (j != i) parts.c_matrix.at_labels(i, j) = val;
        }
    }

    // Additive-multiplicative Laplacian: l_ij = (-1/a_e)((D*)^{-1})_ij for
    // i != j sharing block e, zero across blocks, columns summing to zero.
    parts.laplacian = Matrix<R>(n, n);
    parts.laplacian.set_labels(g.vertices, g.vertices);
    for (auto& b : g.blocks) {
        R neg_inv_a = -(RingTraits<R>::one() / b.a);
        for (VertexId i : b.vertices)
            for (VertexId j : b.vertices)
                if (i != j)
                    parts.laplacian.at_labels(i, j) =
                        neg_inv_a * parts.dstar_inv.at_labels(i, j);
    }
    for (size_t j = 0; j < n; ++j) {
        R colsum = RingTraits<R>::zero();
        for (size_t i = 0; i < n; ++i)
            if (i != j) colsum = colsum + parts.laplacian(i, j);
        parts.laplacian(j, j) = -colsum;
    }
    return parts;
}

// D^{-1} = (kappa/det) tau_out tau_in^T + C (D*)^{-1}.
template <ScalarRing R>
Matrix<R> inverse_from_parts(const InverseParts<R>& parts) {
    const size_t n = parts.tau_in.size();
    R scale = RingTraits<R>::one() / parts.alpha;
    Matrix<R> out = parts.c_matrix * parts.dstar_inv;
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j)
            out(i, j) = out(i, j) + scale * parts.tau_out[i] * parts.tau_in[j];
    return out;
}

template <ScalarRing R>
Matrix<R> inverse_closed_form(const GraphDatum<R>& g) {
    return inverse_from_parts(compute_parts(g));
}

// D^{-1} = (1/alpha) tau_out tau_in^T - L + C diag(tau_in), with the
// rewrite identity C = (-L + C diag(tau_in)) D* asserted along the way.
template <ScalarRing R>
Matrix<R> inverse_via_laplacian(const GraphDatum<R>& g) {
    InverseParts<R> parts = compute_parts(g);
    const size_t n = parts.tau_in.size();
    Matrix<R> cd = parts.c_matrix;
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) cd(i, j) = cd(i, j) * parts.tau_in[j];
    Matrix<R> combo = cd - parts.laplacian;

    AmMatrices<R> am = build_matrices(g);
    Matrix<R> rewrite = combo * am.dstar;
    if (!(rewrite == parts.c_matrix))
        throw Error("C != (-L + C diag(tau_in)) D*: Laplacian rewrite failed");

    R scale = RingTraits<R>::one() / parts.alpha;
    Matrix<R> out = combo;
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j)
            out(i, j) = out(i, j) + scale * parts.tau_out[i] * parts.tau_in[j];
    return out;
}

// Constant-weight Sherman-Morrison assembly; at q-ring data, evaluation at
// q = 1 yields the classical additive inverse.
template <ScalarRing R>
Matrix<R> q_inverse_special(const GraphDatum<R>& g) {
    const R& a = g.blocks.front().a;
    for (auto& b : g.blocks)
        if (!(b.a == a)) throw SpecialCaseViolated("q_inverse_special needs constant a_e");
    if (amdist::is_zero(a)) throw NonInvertibleWeight("a = 0");
    Matrix<R> dsi = dstar_inverse_assembled(g);
    const size_t n = g.n();
    std::vector<R> rowsum(n, RingTraits<R>::zero()), colsum(n, RingTraits<R>::zero());
    R total = RingTraits<R>::zero();
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            rowsum[i] = rowsum[i] + dsi(i, j);
            colsum[j] = colsum[j] + dsi(i, j);
            total = total + dsi(i, j);
        }
    R denom = RingTraits<R>::one() - total;
    if (amdist::is_zero(denom))
        throw SingularUpdate("1 - e^T (D*)^{-1} e = 0");
    R inv_a = RingTraits<R>::one() / a;
    Matrix<R> out = dsi;
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j)
            out(i, j) = inv_a * (out(i, j) + rowsum[i] * colsum[j] / denom);
    out.set_labels(g.vertices, g.vertices);
    return out;
}

}  // namespace amdist
