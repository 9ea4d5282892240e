#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "curvegreen/augmented.hpp"

using namespace curvegreen;

static PolyField random_poly_field(std::mt19937_64& rng, int d, int ncomp, int deg) {
    std::uniform_int_distribution<int> C(-50, 50);
    PolyField f;
    for (int k = 0; k < ncomp; ++k) {
        PolyQ p(d);
        for (const auto& a : monomials_up_to(d, deg)) p.add(a, GR::frac(C(rng), 17));
        f.comp.push_back(p);
    }
    return f;
}

TEST_CASE("maximal divergence system: A = {phi}, B = 0, C_i = -1 at (0, K=i)") {
    auto P = builtin("divergence", 2);
    auto cert = find_certificate(P.adjoint().principal_symbol(), 4);
    auto S = maximal_from_certificate(P, *cert);
    CHECK(S.size() == 1);
    for (int i = 0; i < 2; ++i) {
        CHECK(S.B[i].empty());
        CHECK(S.C[i].at({0, MultiIndex(2), i}) == GR(-1));
    }
}

TEST_CASE("maximal double divergence, d=3: #A = 4, deepest degree -1") {
    auto P = builtin("double_divergence", 3);
    auto cert = find_certificate(P.adjoint().principal_symbol(), 5);
    auto S = maximal_from_certificate(P, *cert);
    CHECK(S.size() == 4);
    int deepest = 0;
    for (const auto& v : S.vars) deepest = std::min(deepest, v.degree);
    CHECK(deepest == -1);
    CHECK(S.N0() == 2);
}

TEST_CASE("maximal Killing system, d=3: #A = d + d^2 jets, residual oracle") {
    auto P = builtin("symmetric_divergence", 3);
    auto cert = find_certificate(P.adjoint().principal_symbol(), 5);
    auto S = maximal_from_certificate(P, *cert);
    CHECK(S.size() == 12);
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> U(-1.5, 1.5);
    PolyField om = random_poly_field(rng, 3, 3, 3);
    for (int t = 0; t < 50; ++t) {
        Vec x = {U(rng), U(rng), U(rng)};
        CHECK(S.pde_residual(om, x) <= 1e-12);
    }
}

TEST_CASE("special systems: sizes, degrees, grading, residuals") {
    struct Row {
        const char* name;
        int d;
        int size;
    };
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> U(-1.5, 1.5);
    for (const Row& r : {Row{"divergence", 3, 1}, Row{"double_divergence", 2, 3},
                         Row{"double_divergence", 3, 4}, Row{"tracefree_double_divergence", 3, 5},
                         Row{"symmetric_divergence", 2, 3}, Row{"symmetric_divergence", 3, 6},
                         Row{"tracefree_symmetric_divergence", 3, 10}, Row{"einstein_constraint", 3, 10},
                         Row{"einstein_constraint_cmc", 3, 14}}) {
        auto S = special_system(r.name, r.d);
        CHECK_MESSAGE(S.size() == r.size, r.name);
        CHECK_NOTHROW(S.check_grading());
        PolyField phi = random_poly_field(rng, r.d, S.r0, S.N0() + 1);
        double worst = 0;
        for (int t = 0; t < 50; ++t) {
            Vec x(r.d);
            for (auto& v : x) v = U(rng);
            worst = std::max(worst, S.pde_residual(phi, x));
        }
        CHECK_MESSAGE(worst <= 1e-11, r.name, " residual ", worst);
    }
}

TEST_CASE("trace-free double divergence carries the 1/(d-1) factor on the w row") {
    auto S = special_system("tracefree_double_divergence", 3);
    int vw = -1;
    for (int A = 0; A < S.size(); ++A)
        if (S.vars[A].name == "w") vw = A;
    REQUIRE(vw >= 0);
    CHECK(S.C[0].at({vw, MultiIndex::unit(3, 0), SlotSpace::pair_slot(3, 0, 0)}) == GR::frac(1, 2));
}

TEST_CASE("curvature: constant special systems are exactly flat") {
    for (const auto& name : zoo_names()) {
        int d = (std::string(name) == "tracefree_symmetric_divergence" ||
                 std::string(name) == "einstein_constraint_cmc")
                    ? 3
                    : 2;
        auto S = special_system(name, d);
        auto rep = is_completely_integrable(S, {});
        CHECK(rep.exact);
        CHECK(rep.integrable);
        CHECK(rep.max_curvature == 0.0);
    }
}

TEST_CASE("curvature: exact gradient lower-order B is flat, non-exact B is not") {
    // B = grad(x1 x2) = (x2, x1): curvature 0 by symmetry of second derivatives
    std::vector<PolyD> Bg(2, PolyD(2));
    Bg[0].add(MultiIndex{0, 1}, 1.0);
    Bg[1].add(MultiIndex{1, 0}, 1.0);
    auto S1 = divergence_system_with_B(2, Bg);
    auto r1 = is_completely_integrable(S1, {{0.4, -0.8}, {1.2, 0.3}});
    CHECK(r1.integrable);
    CHECK(r1.max_curvature <= 1e-10);

    // B = (0, x1): curvature entry (1,2) = 1
    std::vector<PolyD> Bn(2, PolyD(2));
    Bn[1].add(MultiIndex{1, 0}, 1.0);
    auto S2 = divergence_system_with_B(2, Bn);
    auto F = curvature(S2, {0.7, -0.3});
    CHECK(std::abs(F[0][1](0, 0) - 1.0) < 1e-9);
    auto r2 = is_completely_integrable(S2, {{0.7, -0.3}});
    CHECK(!r2.integrable);
}

TEST_CASE("cokernel bases: dimensions, exact annihilation, Gram nonsingularity") {
    struct Row {
        const char* name;
        int d;
        int dim;
    };
    for (const Row& r :
         {Row{"divergence", 2, 1}, Row{"divergence", 3, 1}, Row{"double_divergence", 2, 3},
          Row{"double_divergence", 3, 4}, Row{"tracefree_double_divergence", 2, 4},
          Row{"tracefree_double_divergence", 3, 5}, Row{"symmetric_divergence", 2, 3},
          Row{"symmetric_divergence", 3, 6}, Row{"tracefree_symmetric_divergence", 3, 10},
          Row{"einstein_constraint", 2, 6}, Row{"einstein_constraint", 3, 10},
          Row{"einstein_constraint_cmc", 3, 14}}) {
        auto cb = cokernel_basis(r.name, r.d);
        CHECK_MESSAGE(cb.dimension() == r.dim, r.name, " d=", r.d);
        auto adj = builtin(r.name, r.d).adjoint();
        for (const auto& Z : cb.Z) CHECK(adj.apply(Z).is_zero());
        // Gram on a reference ball (Monte-Carlo-free: tensor grid on [-1,1]^d)
        const int n = cb.dimension();
        Eigen::MatrixXd G = Eigen::MatrixXd::Zero(n, n);
        int steps = 6;
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
                double s = 0;
                std::vector<int> idx(r.d, 0);
                int total = 1;
                for (int i = 0; i < r.d; ++i) total *= steps;
                for (int t = 0; t < total; ++t) {
                    int q = t;
                    Vec x(r.d);
                    for (int i = 0; i < r.d; ++i) {
                        x[i] = -1.0 + 2.0 * (q % steps + 0.5) / steps;
                        q /= steps;
                    }
                    for (size_t c = 0; c < cb.Z[a].comp.size(); ++c)
                        s += (cb.Z[a].comp[c].eval(x) * std::conj(cb.Z[b].comp[c].eval(x))).real();
                }
                G(a, b) = s / total;
            }
        Eigen::FullPivLU<Eigen::MatrixXd> lu(G);
        CHECK(lu.isInvertible());
    }
    CHECK_THROWS_AS(cokernel_basis("tracefree_symmetric_divergence", 2), std::invalid_argument);
    CHECK_THROWS_AS(cokernel_basis("not_an_operator", 2), std::invalid_argument);
}

TEST_CASE("dim coker = #A exactly for the completely integrable flat systems") {
    for (const auto& name : zoo_names()) {
        for (int d : {2, 3}) {
            AugmentedSystem S;
            try {
                S = special_system(name, d);
            } catch (const std::exception&) {
                continue;
            }
            auto rep = is_completely_integrable(S, {});
            REQUIRE(rep.integrable);
            auto cb = cokernel_basis(name, d);
            CHECK(cb.dimension() == S.size());
        }
    }
}

TEST_CASE("maximal system over an operator with constant lower-order terms") {
    // P u = div u + c . u with constant c: maximal variables still work and
    // the top rows pick up the fold-in B entries.
    auto P0 = builtin("divergence", 2);
    std::map<DiffOperator::Key, GR> low;
    low[{MultiIndex(2), 0, 0}] = GR::frac(1, 3);
    low[{MultiIndex(2), 0, 1}] = GR(-2);
    auto P = P0.with_lower_order(low);
    auto cert = find_certificate(P.adjoint().principal_symbol(), 4);
    REQUIRE(cert.has_value());
    auto S = maximal_from_certificate(P, *cert);
    bool has_B = false;
    for (int i = 0; i < 2; ++i) has_B = has_B || !S.B[i].empty();
    CHECK(has_B);
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> U(-1, 1);
    PolyField phi = random_poly_field(rng, 2, 1, 3);
    for (int t = 0; t < 30; ++t) {
        Vec x = {U(rng), U(rng)};
        CHECK(S.pde_residual(phi, x) <= 1e-11);
    }
}

TEST_CASE("certificate/operator mismatch is rejected") {
    auto Pd = builtin("divergence", 2);
    auto Pk = builtin("symmetric_divergence", 2);
    auto cert = find_certificate(Pd.adjoint().principal_symbol(), 4);
    CHECK_THROWS_AS(maximal_from_certificate(Pk, *cert), std::exception);
}
