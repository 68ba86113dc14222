#pragma once

// Test-only independent oracles. These must stay free of the library's
// determinant/inverse code paths so that checks against them mean something.

#include <algorithm>
#include <numeric>
#include <vector>

#include "amdist/matrix.hpp"

namespace amdist::oracles {

// Leibniz permutation-sum determinant; exponential, fine up to n ~ 8.
template <ScalarRing R>
R leibniz_det(const Matrix<R>& m) {
    const size_t n = m.rows();
    std::vector<size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    R acc = RingTraits<R>::zero();
    do {
        // sign by counting inversions
        int inversions = 0;
        for (size_t i = 0; i < n; ++i)
            for (size_t j = i + 1; j < n; ++j)
                if (perm[i] > perm[j]) ++inversions;
        R prod = RingTraits<R>::one();
        for (size_t i = 0; i < n; ++i) prod = prod * m(i, perm[i]);
        acc = (inversions % 2 == 0) ? acc + prod : acc - prod;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return acc;
}

// Shortest additive path distances over nonnegative integer edge weights.
inline std::vector<std::vector<long>> floyd_warshall(
    int n, const std::vector<std::tuple<int, int, long>>& edges) {
    const long INF = 1L << 60;
    std::vector<std::vector<long>> d(n, std::vector<long>(n, INF));
    for (int i = 0; i < n; ++i) d[i][i] = 0;
    for (auto& [u, v, w] : edges) {
        d[u][v] = std::min(d[u][v], w);
        d[v][u] = std::min(d[v][u], w);
    }
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (d[i][k] + d[k][j] < d[i][j]) d[i][j] = d[i][k] + d[k][j];
    return d;
}

}  // namespace amdist::oracles
