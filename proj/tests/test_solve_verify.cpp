#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "curvegreen/solve_verify.hpp"

using namespace curvegreen;

static TestFunction gauss_bump(int d, const Vec& mu, double sigma, double amp, int comp, int ncomp) {
    TestFunction f(d, ncomp);
    GaussTerm t;
    t.mu = mu;
    t.sigma = sigma;
    t.poly = PolyD::constant(d, amp);
    f.comp[comp].terms.push_back(t);
    return f;
}

TEST_CASE("S(0) = 0") {
    int d = 2;
    auto w = Weight::bogovskii(d, {1.0, 0.0}, 0.5);
    auto K = closed_form_kernel("divergence", w, d);
    TestFunction f = gauss_bump(d, {0.0, 0.0}, 0.3, 0.0, 0, 1);
    QuadratureSpec q;
    Vec u = apply_operator_S(K, f, {0.4, 0.1}, q);
    for (double v : u) CHECK(v == 0.0);
}

TEST_CASE("conic divergence solution matches the radial Newtonian-gradient closed form (d=2)") {
    int d = 2;
    auto w = Weight::conic_uniform(d);
    auto K = closed_form_kernel("divergence", w, d);
    const double s = 0.35;
    TestFunction f = gauss_bump(d, {0.0, 0.0}, s, 1.0 / (2 * M_PI * s * s), 0, 1);
    QuadratureSpec q;
    q.outer_n = 48;
    // at |x| = 2: u_r(r) = M(r) / (2 pi r), M(r) = 1 - exp(-r^2 / (2 s^2))
    for (Vec x : {Vec{2.0, 0.0}, Vec{-1.2, 1.6}, Vec{0.0, -2.0}}) {
        double r = std::sqrt(x[0] * x[0] + x[1] * x[1]);
        double ur = (1 - std::exp(-r * r / (2 * s * s))) / (2 * M_PI * r);
        Vec u = apply_operator_S(K, f, x, q);
        for (int i = 0; i < d; ++i) CHECK(std::abs(u[i] - ur * x[i] / r) <= 1e-6);
    }
}

TEST_CASE("Bogovskii divergence: div u = f for mean-zero f (FD oracle)") {
    int d = 2;
    auto w = Weight::bogovskii(d, {0.0, 0.0}, 1.0);
    auto K = closed_form_kernel("divergence", w, d);
    // difference of two bumps => integral zero
    TestFunction f = gauss_bump(d, {0.45, 0.1}, 0.22, 1.0, 0, 1) +
                     gauss_bump(d, {-0.4, -0.2}, 0.22, -1.0, 0, 1);
    QuadratureSpec q;
    q.outer_n = 40;
    auto P = builtin("divergence", d);
    auto usample = [&](const Vec& x) { return apply_operator_S(K, f, x, q); };
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> U(-0.8, 0.8);
    double worst = 0;
        for (int t = 0; t < 12; ++t) {
        Vec x = {U(rng), U(rng)};
        Vec Pu = fd_apply_operator(P, usample, x, 2e-2);
        worst = std::max(worst, std::abs(Pu[0] - f.comp[0].eval(x)));
    }
    CHECK(worst <= 1e-5);
}

TEST_CASE("Green's identity residual: divergence conic, d = 2") {
    int d = 2;
    auto w = Weight::conic_uniform(d);
    auto K = closed_form_kernel("divergence", w, d);
    auto P = builtin("divergence", d);
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> U(-1, 1);
    TestFunction phi = random_function(rng, d, 1, 2, 0.4, 0.45, 0.7);
    QuadratureSpec q;
    for (int t = 0; t < 4; ++t) {
        Vec y = {0.4 * U(rng), 0.4 * U(rng)};
        double r = greens_identity_residual(K, P, nullptr, phi, y, q);
        CHECK(r <= 1e-6);
    }
}

TEST_CASE("Green's identity residual: double divergence Bogovskii with b_eta, d = 2") {
    int d = 2;
    auto w = Weight::bogovskii(d, {1.2, 0.4}, 0.5);
    auto K = closed_form_kernel("double_divergence", w, d);
    auto P = builtin("double_divergence", d);
    auto beta = b_eta(special_system("double_divergence", d), w);
    std::mt19937_64 rng(10);
    std::uniform_real_distribution<double> U(-1, 1);
    TestFunction phi = random_function(rng, d, 1, 2, 0.4, 0.5, 0.8);
    QuadratureSpec q;
    std::function<Eigen::MatrixXd(const Vec&, const Vec&)> b = beta;
    for (int t = 0; t < 3; ++t) {
        Vec y = {0.4 * U(rng), 0.4 * U(rng)};
        CHECK(greens_identity_residual(K, P, &b, phi, y, q) <= 1e-6);
    }
}

TEST_CASE("quadrature halving convergence: factor >= 4 until the floor") {
    int d = 2;
    auto w = Weight::conic_uniform(d);
    auto K = closed_form_kernel("divergence", w, d);
    auto P = builtin("divergence", d);
    std::mt19937_64 rng(12);
    TestFunction phi = random_function(rng, d, 1, 2, 0.4, 0.5, 0.7);
    Vec y = {0.2, -0.1};
    QuadratureSpec q;
    std::vector<double> res;
    for (QuadratureSpec ql : {q.halved().halved().halved(), q.halved().halved(), q.halved(), q})
        res.push_back(greens_identity_residual(K, P, nullptr, phi, y, ql));
    double floor = 2 * res.back() + 1e-11;
    for (size_t i = 0; i + 1 < res.size(); ++i) {
        if (res[i + 1] <= floor) continue; // at the tolerance floor
        CHECK(res[i] >= 4 * res[i + 1]);
    }
    CHECK(res.back() <= 1e-6);
}

TEST_CASE("support: conic solutions vanish outside cone + source ball") {
    int d = 2;
    Vec axis = {1.0, 0.0};
    auto w = Weight::conic_cap(d, axis, 0.5);
    auto K = closed_form_kernel("divergence", w, d);
    TestFunction f = gauss_bump(d, {0.0, 0.0}, 0.25, 1.0, 0, 1);
    QuadratureSpec q;
    q.outer_n = 24;
    auto region = [&](const Vec& x) {
        double r = std::sqrt(x[0] * x[0] + x[1] * x[1]);
        if (r <= 1.2) return true;
        double ang = std::acos(x[0] / r);
        return ang <= 0.5 + 1.0 / r; // aperture + margin for the source ball
    };
    std::vector<Vec> samples;
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(-3, 3);
    while (samples.size() < 200) {
        Vec x = {U(rng), U(rng)};
        double r = std::sqrt(x[0] * x[0] + x[1] * x[1]);
        if (r < 2.0 || region(x)) continue;
        samples.push_back(x);
    }
    auto us = [&](const Vec& x) {
        Vec u = apply_operator_S(K, f, x, q);
        double m = 0;
        for (double v : u) m = std::max(m, std::abs(v));
        return m;
    };
    auto rep = verify_support(us, region, samples, 1e-10);
    CHECK(rep.pass);
}

TEST_CASE("support: Bogovskii solutions vanish outside the star-shaped hull") {
    int d = 2;
    auto w = Weight::bogovskii(d, {0.0, 0.0}, 0.8);
    auto K = closed_form_kernel("double_divergence", w, d);
    TestFunction f = gauss_bump(d, {0.3, 0.0}, 0.2, 1.0, 0, 1);
    QuadratureSpec q;
    q.outer_n = 24;
    // hull of B_0.8(0) and supp f (ball radius ~1.8 covers both comfortably)
    auto region = [](const Vec& x) { return std::sqrt(x[0] * x[0] + x[1] * x[1]) <= 2.3; };
    std::vector<Vec> samples;
    for (int i = 0; i < 100; ++i) {
        double ang = 2 * M_PI * i / 100.0;
        samples.push_back({2.6 * std::cos(ang), 2.6 * std::sin(ang)});
    }
    auto us = [&](const Vec& x) {
        Vec u = apply_operator_S(K, f, x, q);
        double m = 0;
        for (double v : u) m = std::max(m, std::abs(v));
        return m;
    };
    auto rep = verify_support(us, region, samples, 1e-10);
    CHECK(rep.pass);
}

TEST_CASE("project_out_cokernel: moments cancel exactly") {
    int d = 2;
    auto cb = cokernel_basis("double_divergence", d);
    TestFunction f = gauss_bump(d, {0.4, -0.1}, 0.3, 1.3, 0, 1);
    auto g = project_out_cokernel(f, cb, {0.0, 0.0}, 0.5);
    for (const auto& Z : cb.Z) CHECK(std::abs(pair_poly_tf(Z, g)) <= 1e-11);

    // single moment case: f - (int f) * unit-mass bump
    auto cd = cokernel_basis("divergence", d);
    auto h = project_out_cokernel(f, cd, {0.0, 0.0}, 0.5);
    CHECK(std::abs(pair_poly_tf(cd.Z[0], h)) <= 1e-12);

    // already-orthogonal f is unchanged up to the zero correction
    auto h2 = project_out_cokernel(h, cd, {0.0, 0.0}, 0.5);
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> U(-1, 1);
    for (int t = 0; t < 10; ++t) {
        Vec x = {U(rng), U(rng)};
        CHECK(std::abs(h2.comp[0].eval(x) - h.comp[0].eval(x)) <= 1e-12);
    }
}

TEST_CASE("duality consistency <S f, P* phi>_w = <f, phi> - <B_eta f, phi>") {
    int d = 2;
    auto w = Weight::bogovskii(d, {1.0, 0.2}, 0.5);
    auto K = closed_form_kernel("double_divergence", w, d);
    auto P = builtin("double_divergence", d);
    auto beta = b_eta(special_system("double_divergence", d), w);
    TestFunction f = gauss_bump(d, {0.1, -0.2}, 0.3, 1.0, 0, 1);
    std::mt19937_64 rng(21);
    TestFunction phi = random_function(rng, d, 1, 2, 0.4, 0.5, 0.7);
    QuadratureSpec q;
    q.outer_n = 32;

    TestFunction pst = P.adjoint().apply(phi);
    auto wts = P.in_space().weights();
    // lhs by tensor quadrature over the box of phi (Sf is smooth)
    auto [lo, hi] = support_box(phi, 9.0);
    double lhs = 0;
    const GLRule& r = gauss_legendre(40);
    for (int i = 0; i < 40; ++i)
        for (int j = 0; j < 40; ++j) {
            Vec x = {0.5 * (lo[0] + hi[0]) + 0.5 * (hi[0] - lo[0]) * r.x[i],
                     0.5 * (lo[1] + hi[1]) + 0.5 * (hi[1] - lo[1]) * r.x[j]};
            double ww = 0.25 * (hi[0] - lo[0]) * (hi[1] - lo[1]) * r.w[i] * r.w[j];
            Vec u = apply_operator_S(K, f, x, q);
            Vec pv = pst.eval(x);
            double s = 0;
            for (int Kk = 0; Kk < K.s0; ++Kk) s += wts[Kk] * u[Kk] * pv[Kk];
            lhs += ww * s;
        }
    // rhs: <f, phi> - <B_eta f, phi>
    double rhs = pair_functions(f, phi);
    auto [flo, fhi] = support_box(f, 9.0);
    for (int i = 0; i < 40; ++i)
        for (int j = 0; j < 40; ++j) {
            Vec x = {0.5 * (lo[0] + hi[0]) + 0.5 * (hi[0] - lo[0]) * r.x[i],
                     0.5 * (lo[1] + hi[1]) + 0.5 * (hi[1] - lo[1]) * r.x[j]};
            double wwx = 0.25 * (hi[0] - lo[0]) * (hi[1] - lo[1]) * r.w[i] * r.w[j];
            for (int a = 0; a < 40; ++a)
                for (int b = 0; b < 40; ++b) {
                    Vec y = {0.5 * (flo[0] + fhi[0]) + 0.5 * (fhi[0] - flo[0]) * r.x[a],
                             0.5 * (flo[1] + fhi[1]) + 0.5 * (fhi[1] - flo[1]) * r.x[b]};
                    double wwy = 0.25 * (fhi[0] - flo[0]) * (fhi[1] - flo[1]) * r.w[a] * r.w[b];
                    // (B_eta f)(x)_J = int b^J_{J'}(x, y) ... f contracts the lower index
                    double bf = beta(x, y)(0, 0) * f.comp[0].eval(y);
                    rhs -= wwx * wwy * bf * phi.comp[0].eval(x);
                }
        }
    CHECK(std::abs(lhs - rhs) <= 1e-6 * (1 + std::abs(rhs)));
}

TEST_CASE("translation covariance of the conic operator") {
    int d = 2;
    auto w = Weight::conic_cap(d, {1.0, 0.0}, 0.6);
    auto K = closed_form_kernel("divergence", w, d);
    TestFunction f = gauss_bump(d, {0.0, 0.0}, 0.3, 1.0, 0, 1);
    Vec a = {0.7, -0.4};
    TestFunction fa = gauss_bump(d, {0.7, -0.4}, 0.3, 1.0, 0, 1); // f(. - a)
    QuadratureSpec q;
    q.outer_n = 32;
    for (Vec x : {Vec{1.5, 0.2}, Vec{2.0, -0.5}}) {
        Vec xa = {x[0] + a[0], x[1] + a[1]};
        Vec u1 = apply_operator_S(K, fa, xa, q);
        Vec u2 = apply_operator_S(K, f, x, q);
        for (int i = 0; i < d; ++i) CHECK(std::abs(u1[i] - u2[i]) <= 1e-10);
    }
}

TEST_CASE("residual law P(S f) - f = -int b f (double divergence, small grid)") {
    int d = 2;
    auto w = Weight::bogovskii(d, {0.0, 0.0}, 0.9);
    auto K = closed_form_kernel("double_divergence", w, d);
    auto P = builtin("double_divergence", d);
    auto beta = b_eta(special_system("double_divergence", d), w);
    TestFunction f = gauss_bump(d, {0.2, 0.1}, 0.25, 1.0, 0, 1); // nonzero mean
    QuadratureSpec q;
    q.outer_n = 32;
    std::vector<Vec> grid;
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) grid.push_back({-0.8 + 0.4 * i, -0.8 + 0.4 * j});
    auto rep = residual_matches_beta(K, P, beta, f, grid, q, 1e-4);
    CHECK_MESSAGE(rep.pass, rep.json());
}
