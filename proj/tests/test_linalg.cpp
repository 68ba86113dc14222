#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "amdist/linalg.hpp"
#include "oracles.hpp"

using namespace amdist;

namespace {

Matrix<Rational> j_minus_i(size_t n) {
    Matrix<Rational> m = Matrix<Rational>::ones(n, n) - Matrix<Rational>::identity(n);
    return m;
}

Matrix<Rational> random_rat_matrix(std::mt19937_64& rng, size_t n, long bound) {
    std::uniform_int_distribution<long> dist(-bound, bound);
    Matrix<Rational> m(n, n);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) m(i, j) = Rational(dist(rng));
    return m;
}

}  // namespace

TEST_CASE("exact_det basics") {
    Matrix<Rational> anti{{Rational(0), Rational(1)}, {Rational(1), Rational(0)}};
    CHECK(exact_det(anti) == Rational(-1));
    CHECK(exact_det(j_minus_i(3)) == Rational(2));  // brute forced: eigenvalues {2,-1,-1}
    CHECK(oracles::leibniz_det(j_minus_i(3)) == Rational(2));
    CHECK(exact_det(Matrix<Rational>::identity(4)) == Rational(1));
    Matrix<Rational> rect(2, 3);
    CHECK_THROWS_AS(exact_det(rect), DimensionMismatch);
}

TEST_CASE("adjugate") {
    Matrix<Rational> anti{{Rational(0), Rational(1)}, {Rational(1), Rational(0)}};
    Matrix<Rational> adj = adjugate(anti);
    CHECK(adj(0, 0) == 0);
    CHECK(adj(0, 1) == -1);
    CHECK(adj(1, 0) == -1);
    CHECK(adjugate(Matrix<Rational>::identity(5)) == Matrix<Rational>::identity(5));
    Matrix<Rational> a = adjugate(j_minus_i(3));
    CHECK(a(0, 0) == -1);
    CHECK(a(0, 1) == 1);
    // M adj(M) = det(M) Id, exactly
    std::mt19937_64 rng(7);
    for (int t = 0; t < 20; ++t) {
        Matrix<Rational> m = random_rat_matrix(rng, 4, 9);
        Matrix<Rational> prod = m * adjugate(m);
        CHECK(prod == Matrix<Rational>::identity(4) * exact_det(m));
    }
}

TEST_CASE("cof_sum") {
    Matrix<Rational> anti{{Rational(0), Rational(1)}, {Rational(1), Rational(0)}};
    CHECK(cof_sum(anti) == Rational(-2));
    CHECK(cof_sum(j_minus_i(3)) == Rational(3));
    CHECK(cof_sum(Matrix<Rational>::identity(6)) == Rational(6));
}

TEST_CASE("det_and_cof agrees with exact_det and cof_sum") {
    CHECK(det_and_cof(j_minus_i(3)) == std::pair{Rational(2), Rational(3)});
    Matrix<Rational> zero1(1, 1);
    CHECK(det_and_cof(zero1) == std::pair{Rational(0), Rational(1)});
    Matrix<Rational> p3{{Rational(0), Rational(1), Rational(2)},
                        {Rational(1), Rational(0), Rational(1)},
                        {Rational(2), Rational(1), Rational(0)}};
    CHECK(oracles::leibniz_det(p3) == Rational(4));
    CHECK(det_and_cof(p3) == std::pair{Rational(4), Rational(4)});

    std::mt19937_64 rng(11);
    for (int t = 0; t < 100; ++t) {
        size_t n = 1 + t % 8;
        Matrix<Rational> m = random_rat_matrix(rng, n, 50);
        auto [d, c] = det_and_cof(m);
        CHECK(d == exact_det(m));
        CHECK(c == cof_sum(m));
    }
}

TEST_CASE("cof is invariant under rank-one shifts (symbolic c)") {
    // cof(M) = cof(M + cJ) with c an indeterminate
    RationalFunction c = RationalFunction::variable("shift_c");
    std::mt19937_64 rng(13);
    for (int t = 0; t < 5; ++t) {
        size_t n = 2 + t % 3;
        Matrix<Rational> base = random_rat_matrix(rng, n, 9);
        Matrix<RationalFunction> m(n, n), shifted(n, n);
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j) {
                m(i, j) = RationalFunction(base(i, j));
                shifted(i, j) = m(i, j) + c;
            }
        CHECK(det_and_cof(m).second == det_and_cof(shifted).second);
    }
}

TEST_CASE("bareiss and cofactor expansion agree up to 5x5 over both rings") {
    std::mt19937_64 rng(17);
    for (size_t n = 1; n <= 5; ++n) {
        for (int t = 0; t < 10; ++t) {
            Matrix<Rational> m = random_rat_matrix(rng, n, 20);
            CHECK(detail::field_bareiss_det(m) == detail::cofactor_det(m));
            CHECK(detail::field_bareiss_det(m) == detail::dp_laplace_det(m));
        }
    }
    // symbolic: entries with a shared variable
    RationalFunction u = RationalFunction::variable("u_lin");
    for (size_t n = 2; n <= 4; ++n) {
        Matrix<RationalFunction> m(n, n);
        std::uniform_int_distribution<long> dist(-5, 5);
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j)
                m(i, j) = RationalFunction(Rational(dist(rng))) + u * Rational(dist(rng));
        auto [rows, scale] = detail::clear_rows(m);
        RationalFunction bareiss(detail::poly_bareiss_det(rows), scale);
        CHECK(bareiss == detail::cofactor_det(m));
    }
}

TEST_CASE("symbolic determinant with denominators") {
    // [[1, m],[m', 1]] inverse check through solve_inverse
    Matrix<RationalFunction> k2(2, 2);
    RationalFunction m = RationalFunction::variable("m_sym");
    RationalFunction mp = RationalFunction::variable("mp_sym");
    k2(0, 0) = RationalFunction(1);
    k2(1, 1) = RationalFunction(1);
    k2(0, 1) = m;
    k2(1, 0) = mp;
    Matrix<RationalFunction> inv = solve_inverse(k2);
    CHECK(k2 * inv == Matrix<RationalFunction>::identity(2));
    RationalFunction det = exact_det(k2);
    CHECK(det == RationalFunction(1) - m * mp);
    // entries: 1/(1-mm') and -m/(1-mm')
    CHECK(inv(0, 0) == RationalFunction(1) / det);
    CHECK(inv(0, 1) == -m / det);
}

TEST_CASE("solve_inverse") {
    Matrix<Rational> anti{{Rational(0), Rational(1)}, {Rational(1), Rational(0)}};
    CHECK(solve_inverse(anti) == anti);
    Matrix<Rational> inv = solve_inverse(j_minus_i(3));
    CHECK(inv(0, 0) == Rational(-1) / 2);
    CHECK(inv(0, 1) == Rational(1) / 2);
    Matrix<Rational> singular{{Rational(1), Rational(1)}, {Rational(1), Rational(1)}};
    CHECK_THROWS_AS(solve_inverse(singular), SingularMatrix);
    std::mt19937_64 rng(23);
    for (int t = 0; t < 20; ++t) {
        Matrix<Rational> m = random_rat_matrix(rng, 5, 30);
        if (is_zero(exact_det(m))) continue;
        CHECK(m * solve_inverse(m) == Matrix<Rational>::identity(5));
    }
}

TEST_CASE("evaluate on rational functions built from matrices") {
    // det over the q-ring evaluated at q = 3
    SparsePoly q = SparsePoly::variable("q");
    Matrix<RationalFunction> m(2, 2);
    m(0, 0) = RationalFunction(1);
    m(1, 1) = RationalFunction(1);
    m(0, 1) = RationalFunction(q);
    m(1, 0) = RationalFunction(q);
    RationalFunction det = exact_det(m);
    uint32_t qid = *VarPool::instance().lookup("q");
    CHECK(det.evaluate({{qid, Rational(3)}}) == Rational(-8));
}
