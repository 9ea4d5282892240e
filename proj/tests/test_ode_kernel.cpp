#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "curvegreen/ode_kernel.hpp"

using namespace curvegreen;

TEST_CASE("fundamental matrix: B = 0 gives the identity") {
    auto S = special_system("double_divergence", 2);
    // kill B by zeroing (copy with empty B): use the divergence system (B = 0)
    auto D = special_system("divergence", 2);
    RoughKernel rk(D, Curve::segment({0, 0}, {1, 2}));
    for (double s : {0.0, 0.3, 0.9})
        for (double t : {0.95, 1.0})
            CHECK((rk.fundamental_matrix(s, t) - Eigen::MatrixXd::Identity(1, 1)).cwiseAbs().maxCoeff() ==
                  0.0);
    (void)S;
}

TEST_CASE("divergence with B = grad(x1): Pi(0,1) = exp(-1) on the unit segment") {
    std::vector<PolyD> B(2, PolyD(2));
    B[0] = PolyD::constant(2, 1.0);
    auto S = divergence_system_with_B(2, B);
    RoughKernel rk(S, Curve::segment({0, 0}, {1, 0}));
    CHECK(std::abs(rk.fundamental_matrix(0, 1)(0, 0) - std::exp(-1.0)) < 1e-10);
}

TEST_CASE("Killing segment transport is polynomial of degree 1 and matches RK4") {
    auto S = special_system("symmetric_divergence", 3);
    Curve c = Curve::segment({0.2, -0.4, 0.7}, {1.0, 0.3, -0.5});
    RoughKernel rk(S, c);
    // cocycle
    Eigen::MatrixXd lhs = rk.fundamental_matrix(0.2, 0.55) * rk.fundamental_matrix(0.55, 0.9);
    CHECK((lhs - rk.fundamental_matrix(0.2, 0.9)).cwiseAbs().maxCoeff() <= 1e-11);
    // RK4 oracle
    const Vec xd = c.velocity();
    auto A = [&](double) {
        int n = S.size();
        Eigen::MatrixXd B = Eigen::MatrixXd::Zero(n, n);
        for (int i = 0; i < 3; ++i)
            for (const auto& [k, v] : S.B[i]) B(k.first, k.second) += xd[i] * v.to_complex().real();
        return B;
    };
    Eigen::MatrixXd num = fundamental_matrix_rk4(A, 1.0, 0.0, 400);
    CHECK((num - rk.fundamental_matrix(0, 1)).cwiseAbs().maxCoeff() <= 1e-12);
    // linearity in y1 - y of the omega->eta block: doubling the segment
    // doubles the off-diagonal block.
    RoughKernel rk2(S, Curve::segment({0.2, -0.4, 0.7}, {1.8, 1.0, -1.7}));
    Eigen::MatrixXd P1 = rk.fundamental_matrix(0, 1), P2 = rk2.fundamental_matrix(0, 1);
    CHECK(std::abs(P2(0, 3) - 2 * P1(0, 3)) < 1e-12);
}

TEST_CASE("cocycle property on random subdivisions (all zoo systems)") {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> U(-1, 1);
    for (const auto& name : zoo_names()) {
        int d = (std::string(name) == "tracefree_symmetric_divergence" ||
                 std::string(name) == "einstein_constraint_cmc")
                    ? 3
                    : 2;
        auto S = special_system(name, d);
        Vec y(d), y1(d);
        for (auto& v : y) v = U(rng);
        for (auto& v : y1) v = U(rng);
        RoughKernel rk(S, Curve::segment(y, y1));
        for (int t = 0; t < 10; ++t) {
            double a = 0.5 * (U(rng) + 1), b = 0.5 * (U(rng) + 1), c = 0.5 * (U(rng) + 1);
            double s = std::min({a, b, c}), u = a + b + c - std::min({a, b, c}) - std::max({a, b, c}),
                   tt = std::max({a, b, c});
            Eigen::MatrixXd lhs = rk.fundamental_matrix(s, u) * rk.fundamental_matrix(u, tt);
            CHECK((lhs - rk.fundamental_matrix(s, tt)).cwiseAbs().maxCoeff() <= 1e-11);
        }
    }
}

TEST_CASE("divergence rough kernel: <K_{y1}, psi> = int (y1-y).psi(x(s)) ds, <b, phi> = phi(y1)") {
    int d = 2;
    auto S = special_system("divergence", d);
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> U(-1, 1);
    Vec y = {0.2, -0.3}, y1 = {0.9, 0.8};
    RoughKernel rk(S, Curve::segment(y, y1));
    TestFunction psi = random_function(rng, d, d);
    Vec got = rk.pair_kernel(psi);
    auto direct = [&](double) {
        return integrate_adaptive(
            [&](double s) {
                Vec x = {y[0] + s * (y1[0] - y[0]), y[1] + s * (y1[1] - y[1])};
                return (y1[0] - y[0]) * psi.comp[0].eval(x) + (y1[1] - y[1]) * psi.comp[1].eval(x);
            },
            0.0, 1.0, 1e-12);
    };
    CHECK(std::abs(got[0] - direct(0)) <= 1e-9);
    TestFunction phi = random_function(rng, d, 1);
    CHECK(rk.pair_b(phi)[0] == doctest::Approx(phi.comp[0].eval(y1)).epsilon(1e-14));
}

TEST_CASE("double divergence endpoint distribution: phi(y1) - (y1-y).grad phi(y1)") {
    int d = 2;
    auto S = special_system("double_divergence", d);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> U(-1, 1);
    for (int t = 0; t < 10; ++t) {
        Vec y = {U(rng), U(rng)}, y1 = {U(rng), U(rng)};
        RoughKernel rk(S, Curve::segment(y, y1));
        TestFunction phi = random_function(rng, d, 1);
        double expect = phi.comp[0].eval(y1);
        for (int i = 0; i < d; ++i)
            expect -= (y1[i] - y[i]) * phi.comp[0].derivative(i).eval(y1);
        CHECK(std::abs(rk.pair_b(phi)[0] - expect) < 1e-12);
    }
}

TEST_CASE("recovery: exact for affine phi under double divergence (P* phi = 0 case)") {
    int d = 2;
    auto S = special_system("double_divergence", d);
    PolyField phi;
    PolyQ p(d);
    p.add(MultiIndex(d), GR::frac(7, 3));
    p.add(MultiIndex{1, 0}, GR(-2));
    p.add(MultiIndex{0, 1}, GR::frac(1, 5));
    phi.comp.push_back(p);
    RoughKernel rk(S, Curve::segment({0.4, -0.9}, {1.3, 2.0}));
    Vec rec = rk.recover(phi);
    CHECK(std::abs(rec[0] - phi.comp[0].eval({0.4, -0.9}).real()) < 1e-13);
}

TEST_CASE("recovery of a Gaussian bump under all zoo systems") {
    std::mt19937_64 rng(19);
    std::uniform_real_distribution<double> U(-1, 1);
    for (const auto& name : zoo_names()) {
        int d = (std::string(name) == "tracefree_symmetric_divergence" ||
                 std::string(name) == "einstein_constraint_cmc")
                    ? 3
                    : 2;
        auto S = special_system(name, d);
        double worst = 0, scale = 0;
        for (int t = 0; t < 8; ++t) {
            Vec y(d), y1(d);
            for (auto& v : y) v = U(rng);
            for (auto& v : y1) v = U(rng);
            RoughKernel rk(S, Curve::segment(y, y1));
            TestFunction phi = random_function(rng, d, S.r0);
            Vec rec = rk.recover(phi);
            Vec val = phi.eval(y);
            scale = std::max(scale, 1.0);
            for (int J = 0; J < S.r0; ++J) worst = std::max(worst, std::abs(rec[J] - val[J]));
        }
        CHECK_MESSAGE(worst <= 1e-8 * scale, name, " recovery residual ", worst);
    }
}

TEST_CASE("polynomial recovery: phi = x1^2 x2 under the Killing system, d = 2") {
    auto S = special_system("symmetric_divergence", 2);
    // omega = d(x1^2 x2) = (2 x1 x2, x1^2) as the covector input
    PolyField om;
    PolyQ o1(2), o2(2);
    o1.add(MultiIndex{1, 1}, GR(2));
    o2.add(MultiIndex{2, 0}, GR(1));
    om.comp = {o1, o2};
    RoughKernel rk(S, Curve::segment({0.7, -0.4}, {-1.1, 0.9}));
    Vec rec = rk.recover(om);
    CHECK(std::abs(rec[0] - om.comp[0].eval({0.7, -0.4}).real()) <= 1e-10);
    CHECK(std::abs(rec[1] - om.comp[1].eval({0.7, -0.4}).real()) <= 1e-10);
}

TEST_CASE("b-cokernel identity <b_{y1}, Z> = Z(y) for polynomial cokernel elements") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> U(-1, 1);
    for (const auto& name : zoo_names()) {
        int d = (std::string(name) == "tracefree_symmetric_divergence" ||
                 std::string(name) == "einstein_constraint_cmc")
                    ? 3
                    : 2;
        auto S = special_system(name, d);
        auto cb = cokernel_basis(name, d);
        for (int t = 0; t < 5; ++t) {
            Vec y(d), y1(d);
            for (auto& v : y) v = U(rng);
            for (auto& v : y1) v = U(rng);
            RoughKernel rk(S, Curve::segment(y, y1));
            for (const auto& Z : cb.Z) {
                Vec b = rk.pair_b(Z);
                for (int J = 0; J < S.r0; ++J)
                    CHECK(std::abs(b[J] - Z.comp[J].eval(y).real()) <= 1e-12);
            }
        }
    }
}

TEST_CASE("generalized sine/cosine and the radial oracle") {
    CHECK(gen_sin(0, 1.7) == 1.7);
    CHECK(gen_cos(0, 1.7) == 1.0);
    CHECK(std::abs(gen_cos(1, M_PI / 2)) < 1e-15);
    CHECK(std::abs(gen_sin(1, M_PI / 2) - 1.0) < 1e-15);
    CHECK(std::abs(gen_cos(-1, 1.0) - std::cosh(1.0)) < 1e-15);
    CHECK(std::abs(gen_sin(-1, 1.0) - std::sinh(1.0)) < 1e-15);

    // kappa = 0 flat limit: weight s, endpoint coefficients (1, -rho) exactly
    auto R0 = curvature_oracle_radial(0.0, 0.8);
    CHECK(R0.c == 1.0);
    CHECK(R0.s == 0.8);
    CHECK(R0.weight(0.33) == 0.33);

    for (double kappa : {-1.0, 0.0, 1.0}) {
        double rho = 1.3;
        auto R = curvature_oracle_radial(kappa, rho);
        auto A = [&](double) {
            Eigen::MatrixXd M(2, 2);
            M << 0, 1, -kappa, 0;
            return M;
        };
        Eigen::MatrixXd Pi = fundamental_matrix_rk4(A, rho, 0.0, 4000);
        CHECK(std::abs(Pi(0, 0) - R.c) <= 1e-10);
        CHECK(std::abs(Pi(0, 1) + R.s) <= 1e-10);
    }
}

TEST_CASE("rays are segments to y + L omega") {
    Curve c = Curve::ray({1.0, 2.0}, {0.6, 0.8}, 5.0);
    CHECK(c.at(0.0) == Vec{1.0, 2.0});
    CHECK(std::abs(c.at(1.0)[0] - 4.0) < 1e-15);
    CHECK(std::abs(c.at(1.0)[1] - 6.0) < 1e-15);
}

TEST_CASE("transport polynomial matches the evaluated fundamental matrix") {
    auto S = special_system("tracefree_symmetric_divergence", 3);
    auto T = transport_polynomial(S);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> U(-1, 1);
    for (int t = 0; t < 5; ++t) {
        Vec y = {U(rng), U(rng), U(rng)}, y1 = {U(rng), U(rng), U(rng)};
        RoughKernel rk(S, Curve::segment(y, y1));
        Eigen::MatrixXd Pi = rk.fundamental_matrix(0, 1);
        Vec z(3);
        for (int i = 0; i < 3; ++i) z[i] = y1[i] - y[i];
        for (int a = 0; a < S.size(); ++a)
            for (int b = 0; b < S.size(); ++b)
                CHECK(std::abs(Pi(a, b) - T[a][b].eval(z)) <= 1e-13);
    }
}
