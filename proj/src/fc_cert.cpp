#include "curvegreen/fc_cert.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>

namespace curvegreen {

namespace {

ExactMatrix eval_exact(const HomPolyMatrix& M, const std::vector<GR>& xi) {
    ExactMatrix E(M.rows(), M.cols());
    for (const auto& [key, v] : M.entries()) {
        const auto& [r, c, a] = key;
        GR t = v;
        for (int i = 0; i < M.dim(); ++i)
            for (int k = 0; k < a[i]; ++k) t *= xi[i];
        E.at(r, c) += t;
    }
    return E;
}

// Solve the coefficient-matching system for row J of g_alpha. Unknowns are
// (K, beta) with |beta| = N0 - m_K; equations are (J', mu) with |mu| = N0.
std::optional<std::vector<GR>> solve_row(const HomPolyMatrix& pstar, const MultiIndex& alpha, int J, int N0,
                                         const std::vector<std::vector<MultiIndex>>& col_basis,
                                         const std::vector<int>& unknown_offset, int n_unknowns) {
    const int r0 = pstar.cols(), s0 = pstar.rows(), d = pstar.dim();
    auto mu_basis = monomial_basis(d, N0);
    std::map<MultiIndex, int> mu_index;
    for (size_t i = 0; i < mu_basis.size(); ++i) mu_index[mu_basis[i]] = static_cast<int>(i);

    const int n_eq = r0 * static_cast<int>(mu_basis.size());
    ExactMatrix A(n_eq, n_unknowns);
    std::vector<GR> b(n_eq);

    // A[(J', mu), (K, beta)] = coeff of xi^lambda in pstar(K, J') with beta+lambda=mu.
    for (const auto& [key, v] : pstar.entries()) {
        const auto& [K, Jp, lam] = key;
        for (size_t bi = 0; bi < col_basis[K].size(); ++bi) {
            const MultiIndex& beta = col_basis[K][bi];
            MultiIndex mu = beta + lam;
            auto it = mu_index.find(mu);
            if (it == mu_index.end()) continue;
            int row = Jp * static_cast<int>(mu_basis.size()) + it->second;
            A.at(row, unknown_offset[K] + static_cast<int>(bi)) += v;
        }
    }
    b[J * static_cast<int>(mu_basis.size()) + mu_index.at(alpha)] = GR(1);
    return solve_exact(std::move(A), std::move(b));
}

} // namespace

std::optional<FcCertificate> find_certificate(const HomPolyMatrix& pstar, int n0_max) {
    const int s0 = pstar.rows(), r0 = pstar.cols(), d = pstar.dim();
    const auto& m = pstar.row_degrees();
    int m_max = m.empty() ? 0 : *std::max_element(m.begin(), m.end());

    for (int N0 = std::max(m_max, 1); N0 <= n0_max; ++N0) {
        // Per-column monomial bases of degree N0 - m_K and unknown layout.
        std::vector<std::vector<MultiIndex>> col_basis(s0);
        std::vector<int> unknown_offset(s0, 0);
        int n_unknowns = 0;
        for (int K = 0; K < s0; ++K) {
            col_basis[K] = monomial_basis(d, N0 - m[K]);
            unknown_offset[K] = n_unknowns;
            n_unknowns += static_cast<int>(col_basis[K].size());
        }

        FcCertificate cert;
        cert.N0 = N0;
        cert.r0 = r0;
        cert.s0 = s0;
        cert.d = d;
        bool ok = true;
        for (const MultiIndex& alpha : monomial_basis(d, N0)) {
            std::vector<int> gcol(s0);
            for (int K = 0; K < s0; ++K) gcol[K] = N0 - m[K];
            HomPolyMatrix G(d, r0, s0, std::vector<int>(r0, 0), gcol);
            for (int J = 0; J < r0 && ok; ++J) {
                auto x = solve_row(pstar, alpha, J, N0, col_basis, unknown_offset, n_unknowns);
                if (!x) {
                    ok = false;
                    break;
                }
                for (int K = 0; K < s0; ++K)
                    for (size_t bi = 0; bi < col_basis[K].size(); ++bi)
                        G.add(J, K, col_basis[K][bi], (*x)[unknown_offset[K] + bi]);
            }
            if (!ok) break;
            cert.g.emplace(alpha, std::move(G));
        }
        if (ok) return cert;
    }
    return std::nullopt;
}

bool verify_certificate(const FcCertificate& cert, const HomPolyMatrix& pstar) {
    if (cert.r0 == 0) return true; // vacuous
    for (const auto& [alpha, G] : cert.g) {
        if (alpha.order() != cert.N0) return false;
        HomPolyMatrix prod = mat_mul(G, pstar);
        HomPolyMatrix target = monomial_times_identity(alpha, cert.r0);
        if (!(prod - target).is_zero()) return false;
    }
    // Every alpha of order N0 must be present.
    return cert.g.size() == monomial_basis(cert.d, cert.N0).size();
}

std::optional<FcWitness> falsify_fc(const HomPolyMatrix& pstar, int trials, std::mt19937_64& rng,
                                    double* min_singular_out) {
    const int d = pstar.dim(), r0 = pstar.cols();
    double min_sv = std::numeric_limits<double>::infinity();

    // Phase 1: exact scan over small Gaussian-integer points on coordinate
    // axes and coordinate planes.
    const std::vector<GR> vals = {GR(1), GR(-1), GR::unit_i(), -GR::unit_i()};
    std::vector<std::vector<GR>> candidates;
    for (int i = 0; i < d; ++i)
        for (const GR& a : vals) {
            std::vector<GR> xi(d);
            xi[i] = a;
            candidates.push_back(xi);
        }
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j)
            for (const GR& a : vals)
                for (const GR& b : vals) {
                    std::vector<GR> xi(d);
                    xi[i] = a;
                    xi[j] = b;
                    candidates.push_back(xi);
                }
    for (const auto& xi : candidates) {
        ExactMatrix E = eval_exact(pstar, xi);
        auto null = nullspace_exact(E);
        if (!null.empty()) {
            FcWitness w;
            w.exact = true;
            w.residual = 0.0;
            for (const auto& v : xi) w.xi.push_back(v.to_complex());
            double nrm = 0;
            for (const auto& v : null[0]) nrm += std::norm(v.to_complex());
            nrm = std::sqrt(nrm);
            for (const auto& v : null[0]) w.phi.push_back(v.to_complex() / nrm);
            if (min_singular_out) *min_singular_out = 0.0;
            return w;
        }
    }

    // Phase 2: random complex unit vectors, numeric SVD.
    std::normal_distribution<double> N(0.0, 1.0);
    FcWitness best;
    bool found = false;
    for (int t = 0; t < trials; ++t) {
        std::vector<std::complex<double>> xi(d);
        double nrm = 0;
        for (auto& v : xi) {
            v = {N(rng), N(rng)};
            nrm += std::norm(v);
        }
        nrm = std::sqrt(nrm);
        for (auto& v : xi) v /= nrm;
        Eigen::MatrixXcd M = pstar.eval(xi);
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(M, Eigen::ComputeThinV);
        double s = svd.singularValues()(r0 - 1);
        if (s < min_sv) {
            min_sv = s;
            if (s < 1e-10) {
                best.xi = xi;
                best.phi.assign(r0, 0);
                for (int i = 0; i < r0; ++i) best.phi[i] = svd.matrixV()(i, r0 - 1);
                best.residual = s;
                best.exact = false;
                found = true;
            }
        }
    }
    if (min_singular_out) *min_singular_out = min_sv;
    if (found) return best;
    return std::nullopt;
}

FcVerdict decide_fc(const HomPolyMatrix& pstar, int n0_max, int trials, std::mt19937_64& rng) {
    FcVerdict v;
    v.n0_searched = n0_max;
    auto cert = find_certificate(pstar, n0_max);
    if (cert) {
        v.kind = FcVerdict::Certified;
        v.certificate = std::move(cert);
        return v;
    }
    auto w = falsify_fc(pstar, trials, rng, &v.min_singular);
    if (w && w->exact) {
        v.kind = FcVerdict::Falsified;
        v.witness = std::move(w);
    } else {
        v.kind = FcVerdict::Inconclusive;
        if (w) v.witness = std::move(w); // numeric-only lead, not a proof
    }
    return v;
}

int default_n0_max(const HomPolyMatrix& pstar) {
    int m_max = 0;
    for (int v : pstar.row_degrees()) m_max = std::max(m_max, v);
    return m_max + 4;
}

void FcCertificate::dump(std::ostream& os) const {
    os << N0 << ' ' << r0 << ' ' << s0 << ' ' << d << "\n";
    for (const auto& [alpha, G] : g) {
        os << "alpha";
        for (int i = 0; i < d; ++i) os << ' ' << alpha[i];
        os << "\n";
        G.dump(os);
    }
}

FcCertificate FcCertificate::load(std::istream& is, const std::vector<int>& m) {
    FcCertificate c;
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("certificate: missing header");
    {
        std::istringstream ss(line);
        ss >> c.N0 >> c.r0 >> c.s0 >> c.d;
        if (!ss) throw std::runtime_error("certificate: bad header");
    }
    std::vector<int> gcol(c.s0);
    for (int K = 0; K < c.s0; ++K) gcol[K] = c.N0 - m[K];
    MultiIndex cur;
    std::string body;
    auto flush = [&]() {
        if (cur.dim() == 0) return;
        std::istringstream bs(body);
        c.g.emplace(cur, HomPolyMatrix::load(bs, c.d, c.r0, c.s0, std::vector<int>(c.r0, 0), gcol));
        body.clear();
    };
    while (std::getline(is, line)) {
        if (line.rfind("alpha", 0) == 0) {
            flush();
            std::istringstream ss(line.substr(5));
            cur = MultiIndex(c.d);
            for (int i = 0; i < c.d; ++i) ss >> cur[i];
        } else if (!line.empty()) {
            body += line + "\n";
        }
    }
    flush();
    return c;
}

} // namespace curvegreen
