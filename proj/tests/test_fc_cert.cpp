#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/SVD>
#include <sstream>

#include "curvegreen/diffop.hpp"
#include "curvegreen/fc_cert.hpp"

using namespace curvegreen;

static HomPolyMatrix zoo_pstar(const std::string& name, int d) {
    return builtin(name, d).adjoint().principal_symbol();
}

TEST_CASE("divergence certificate at N0 = 1 with g_{e_j} = i e_j") {
    auto ps = zoo_pstar("divergence", 2);
    auto cert = find_certificate(ps, 5);
    REQUIRE(cert.has_value());
    CHECK(cert->N0 == 1);
    CHECK(verify_certificate(*cert, ps));
    for (int j = 0; j < 2; ++j) {
        const auto& G = cert->g.at(MultiIndex::unit(2, j));
        CHECK(G.coeff(0, j, MultiIndex(2)) == GR::unit_i());
    }
}

TEST_CASE("double divergence certificate at N0 = 2: xi_j xi_k = -p*_{jk}") {
    auto ps = zoo_pstar("double_divergence", 3);
    auto cert = find_certificate(ps, 6);
    REQUIRE(cert.has_value());
    CHECK(cert->N0 == 2);
    CHECK(verify_certificate(*cert, ps));
    MultiIndex a = MultiIndex::unit(3, 0) + MultiIndex::unit(3, 1);
    CHECK(cert->g.at(a).coeff(0, SlotSpace::pair_slot(3, 0, 1), MultiIndex(3)) == GR(-1));
}

TEST_CASE("perturbing a certificate coefficient breaks verification") {
    auto ps = zoo_pstar("divergence", 2);
    auto cert = find_certificate(ps, 5);
    REQUIRE(cert.has_value());
    FcCertificate bad = *cert;
    auto& G = bad.g.begin()->second;
    G.add(0, 0, MultiIndex(2), GR(1));
    CHECK(!verify_certificate(bad, ps));
}

TEST_CASE("empty certificate with r0 = 0 verifies vacuously") {
    FcCertificate c;
    c.N0 = 1;
    c.r0 = 0;
    c.s0 = 1;
    c.d = 2;
    HomPolyMatrix ps(2, 1, 0, {1}, {});
    CHECK(verify_certificate(c, ps));
}

TEST_CASE("minimal certificate degrees for the zoo (exhaustive from max m_K)") {
    struct Row {
        const char* name;
        int d;
        int n0;
    };
    for (const Row& r : {Row{"divergence", 3, 1}, Row{"double_divergence", 3, 2},
                         Row{"symmetric_divergence", 3, 2}, Row{"tracefree_double_divergence", 3, 3},
                         Row{"tracefree_symmetric_divergence", 3, 3}, Row{"einstein_constraint", 3, 2},
                         Row{"einstein_constraint_cmc", 3, 3}}) {
        auto ps = zoo_pstar(r.name, r.d);
        auto cert = find_certificate(ps, default_n0_max(ps));
        REQUIRE_MESSAGE(cert.has_value(), r.name);
        CHECK_MESSAGE(cert->N0 == r.n0, r.name);
        CHECK(verify_certificate(*cert, ps));
    }
}

TEST_CASE("soundness: certified symbols have no small singular values") {
    std::mt19937_64 rng(23);
    std::normal_distribution<double> N(0, 1);
    for (const auto& name : {"divergence", "double_divergence", "symmetric_divergence"}) {
        auto ps = zoo_pstar(name, 2);
        auto cert = find_certificate(ps, default_n0_max(ps));
        REQUIRE(cert.has_value());
        CHECK(verify_certificate(*cert, ps));
        for (int t = 0; t < 100; ++t) {
            std::vector<std::complex<double>> xi(2);
            double nn = 0;
            for (auto& v : xi) {
                v = {N(rng), N(rng)};
                nn += std::norm(v);
            }
            for (auto& v : xi) v /= std::sqrt(nn);
            Eigen::JacobiSVD<Eigen::MatrixXcd> svd(ps.eval(xi));
            CHECK(svd.singularValues()(ps.cols() - 1) >= 1e-8);
        }
    }
}

TEST_CASE("falsifier: P = d_1 in d = 2 with exact witness xi = (0, 1)") {
    DiffOperator P(2, SlotSpace::scalar(2, "f"), SlotSpace::scalar(2, "u"));
    P.set_coeff(MultiIndex{1, 0}, 0, 0, GR(1));
    auto ps = P.adjoint().principal_symbol();
    std::mt19937_64 rng(1);
    auto w = falsify_fc(ps, 100, rng);
    REQUIRE(w.has_value());
    CHECK(w->exact);
    CHECK(std::abs(w->xi[0]) < 1e-15);
    CHECK(std::abs(w->xi[1] - std::complex<double>(1, 0)) < 1e-15);
    CHECK(std::abs(std::abs(w->phi[0]) - 1.0) < 1e-15);

    auto v = decide_fc(ps, default_n0_max(ps), 100, rng);
    CHECK(v.kind == FcVerdict::Falsified);
}

TEST_CASE("falsifier finds nothing for divergence over 500 trials; minimum recorded") {
    auto ps = zoo_pstar("divergence", 3);
    std::mt19937_64 rng(9);
    double min_sv = -1;
    auto w = falsify_fc(ps, 500, rng, &min_sv);
    CHECK(!w.has_value());
    CHECK(min_sv > 1e-3); // bounded below, FC holds
}

TEST_CASE("curl-like two-row operator: exact common zero on a coordinate subspace") {
    // p* rows (-i xi2, i xi1, 0) and (0, -i xi3, i xi2) acting on scalar phi.
    HomPolyMatrix ps(3, 2, 1, {1, 1}, {0});
    ps.set(0, 0, MultiIndex{0, 1, 0}, -GR::unit_i());
    ps.add(0, 0, MultiIndex{1, 0, 0}, GR::unit_i());
    ps.set(1, 0, MultiIndex{0, 0, 1}, -GR::unit_i());
    ps.add(1, 0, MultiIndex{0, 1, 0}, GR::unit_i());
    std::mt19937_64 rng(3);
    auto w = falsify_fc(ps, 50, rng);
    REQUIRE(w.has_value());
    CHECK(w->exact);
    // the returned xi kills both rows exactly
    auto E = ps.eval(w->xi);
    CHECK(E.cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("mutual exclusion on the zoo") {
    std::mt19937_64 rng(31);
    for (const auto& name : zoo_names()) {
        int d = (name == "tracefree_symmetric_divergence" || name == "einstein_constraint_cmc") ? 3 : 2;
        auto ps = zoo_pstar(name, d);
        auto cert = find_certificate(ps, default_n0_max(ps));
        auto w = falsify_fc(ps, 50, rng);
        CHECK(cert.has_value());
        CHECK(!(cert.has_value() && w.has_value() && w->exact));
    }
}

TEST_CASE("block composition: N0(block) = max of the blocks") {
    auto nh = find_certificate(zoo_pstar("double_divergence", 3), 6)->N0;
    auto nk = find_certificate(zoo_pstar("symmetric_divergence", 3), 6)->N0;
    auto nc = find_certificate(zoo_pstar("tracefree_symmetric_divergence", 3), 6)->N0;
    auto ne = find_certificate(zoo_pstar("einstein_constraint", 3), 6)->N0;
    auto nm = find_certificate(zoo_pstar("einstein_constraint_cmc", 3), 6)->N0;
    CHECK(ne == std::max(nh, nk));
    CHECK(nm == std::max(nh, nc));
}

TEST_CASE("certificate dump / load round trip") {
    auto P = builtin("double_divergence", 2);
    auto ps = P.adjoint().principal_symbol();
    auto cert = find_certificate(ps, 4);
    REQUIRE(cert.has_value());
    std::ostringstream os;
    cert->dump(os);
    std::istringstream is(os.str());
    auto back = FcCertificate::load(is, ps.row_degrees());
    CHECK(back.N0 == cert->N0);
    CHECK(verify_certificate(back, ps));
    REQUIRE(back.g.size() == cert->g.size());
    for (const auto& [a, G] : cert->g) CHECK(back.g.at(a) == G);
}

TEST_CASE("certificates attach to maximal systems only after verification") {
    auto P = builtin("divergence", 2);
    auto ps = P.adjoint().principal_symbol();
    auto cert = find_certificate(ps, 4);
    FcCertificate bad = *cert;
    bad.g.begin()->second.add(0, 0, MultiIndex(2), GR(3));
    CHECK(!verify_certificate(bad, ps));
}
