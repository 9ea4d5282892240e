#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <sstream>

#include "curvegreen/exact_solve.hpp"
#include "curvegreen/polymatrix.hpp"

using namespace curvegreen;

TEST_CASE("monomial_basis ordering and counts") {
    auto b = monomial_basis(2, 2);
    REQUIRE(b.size() == 3);
    CHECK(b[0] == MultiIndex{2, 0});
    CHECK(b[1] == MultiIndex{1, 1});
    CHECK(b[2] == MultiIndex{0, 2});

    CHECK(monomial_basis(3, 0) == std::vector<MultiIndex>{MultiIndex{0, 0, 0}});
    CHECK(monomial_basis(3, 3).size() == 10);

    for (int d = 1; d <= 4; ++d)
        for (int k = 0; k <= 6; ++k)
            CHECK(monomial_basis(d, k).size() == binomial(d + k - 1, k));
}

TEST_CASE("lexicographic order strict on distinct values") {
    auto b = monomial_basis(3, 4);
    for (size_t i = 0; i + 1 < b.size(); ++i) {
        CHECK(b[i] != b[i + 1]);
        CHECK(b[i + 1] < b[i]); // std::vector lex, descending listing
    }
}

static HomPolyMatrix single(int d, int deg, const MultiIndex& a, const GR& c) {
    HomPolyMatrix M(d, 1, 1, {deg}, {0});
    M.set(0, 0, a, c);
    return M;
}

TEST_CASE("mat_mul basics") {
    // [xi1] * [xi2] = [xi1 xi2]
    auto A = single(2, 1, MultiIndex{1, 0}, GR(1));
    auto B = single(2, 1, MultiIndex{0, 1}, GR(1));
    auto C = mat_mul(A, B);
    CHECK(C.coeff(0, 0, MultiIndex{1, 1}) == GR(1));
    CHECK(C.entries().size() == 1);

    // identity * M = M
    auto I = poly_identity(2, 1);
    CHECK(mat_mul(I, A) == A);

    // divergence certificate row: g_{e_j} = i e_j^T against p* = (-i xi_k)
    int d = 2;
    HomPolyMatrix ps(d, d, 1, {1, 1}, {0});
    for (int k = 0; k < d; ++k) ps.set(k, 0, MultiIndex::unit(d, k), -GR::unit_i());
    for (int j = 0; j < d; ++j) {
        HomPolyMatrix g(d, 1, d, {0}, {0, 0});
        g.set(0, j, MultiIndex(d), GR::unit_i());
        auto prod = mat_mul(g, ps);
        CHECK((prod - monomial_times_identity(MultiIndex::unit(d, j), 1)).is_zero());
    }
}

TEST_CASE("grading mismatch rejected with offending index") {
    HomPolyMatrix M(2, 1, 1, {1}, {0});
    CHECK_THROWS_AS(M.set(0, 0, MultiIndex{1, 1}, GR(1)), GradingError);
}

TEST_CASE("eval examples") {
    auto M = single(2, 2, MultiIndex{1, 1}, GR(1)); // xi1 xi2
    auto E = M.eval({{0.0, 1.0}, {2.0, 0.0}});      // (i, 2)
    CHECK(std::abs(E(0, 0) - std::complex<double>(0, 2)) < 1e-15);

    int d = 2;
    HomPolyMatrix ps(d, d, 1, {1, 1}, {0});
    for (int k = 0; k < d; ++k) ps.set(k, 0, MultiIndex::unit(d, k), -GR::unit_i());
    auto V = ps.eval({{0.0, 0.0}, {1.0, 0.0}});
    CHECK(std::abs(V(0, 0)) < 1e-15);
    CHECK(std::abs(V(1, 0) - std::complex<double>(0, -1)) < 1e-15);
}

static HomPolyMatrix random_hpm(std::mt19937_64& rng, int d, int rows, int cols, int rowdeg) {
    std::uniform_int_distribution<int> C(-3, 3);
    HomPolyMatrix M(d, rows, cols, std::vector<int>(rows, rowdeg), std::vector<int>(cols, 0));
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c)
            for (const auto& a : monomial_basis(d, rowdeg)) M.add(r, c, a, GR(C(rng)));
    return M;
}

TEST_CASE("eval commutes with mat_mul; exact associativity") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> U(-1, 1);
    for (int t = 0; t < 10; ++t) {
        auto A = random_hpm(rng, 2, 2, 3, 1);
        auto B = random_hpm(rng, 2, 3, 2, 2);
        auto C = random_hpm(rng, 2, 2, 2, 1);
        std::vector<std::complex<double>> xi = {{U(rng), U(rng)}, {U(rng), U(rng)}};
        auto AB = mat_mul(A, B);
        Eigen::MatrixXcd lhs = AB.eval(xi);
        Eigen::MatrixXcd rhs = A.eval(xi) * B.eval(xi);
        CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12 * (1 + rhs.cwiseAbs().maxCoeff()));
        CHECK((mat_mul(AB, C) - mat_mul(A, mat_mul(B, C))).is_zero());
    }
}

TEST_CASE("serialization round trip") {
    std::mt19937_64 rng(7);
    auto A = random_hpm(rng, 3, 2, 2, 2);
    std::ostringstream os;
    A.dump(os);
    std::istringstream is(os.str());
    auto B = HomPolyMatrix::load(is, 3, 2, 2, A.row_degrees(), A.col_degrees());
    CHECK(A == B);
}

TEST_CASE("exact solve: underdetermined minimal support and consistency") {
    // x + i y = 1 with free z: expect x = 1, y set by elimination, z = 0.
    ExactMatrix A(1, 3);
    A.at(0, 0) = GR(1);
    A.at(0, 1) = GR::unit_i();
    auto x = solve_exact(A, {GR(1)});
    REQUIRE(x.has_value());
    CHECK((*x)[0] == GR(1));
    CHECK((*x)[1].is_zero());
    CHECK((*x)[2].is_zero());

    // inconsistent
    ExactMatrix B(2, 1);
    B.at(0, 0) = GR(1);
    B.at(1, 0) = GR(1);
    CHECK(!solve_exact(B, {GR(1), GR(2)}).has_value());

    // nullspace of [1 1]
    ExactMatrix C(1, 2);
    C.at(0, 0) = GR(1);
    C.at(0, 1) = GR(1);
    auto ns = nullspace_exact(C);
    REQUIRE(ns.size() == 1);
    CHECK(ns[0][0] == -ns[0][1]);
}

TEST_CASE("exact arithmetic is exact on adversarial fractions") {
    // Hilbert-like system solved exactly.
    const int n = 6;
    ExactMatrix H(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) H.at(i, j) = GR::frac(1, i + j + 1);
    std::vector<GR> b(n, GR(1));
    auto x = solve_exact(H, b);
    REQUIRE(x.has_value());
    // residual exactly zero
    for (int i = 0; i < n; ++i) {
        GR s;
        for (int j = 0; j < n; ++j) s += GR::frac(1, i + j + 1) * (*x)[j];
        CHECK(s == GR(1));
    }
}
