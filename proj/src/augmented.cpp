#include "curvegreen/augmented.hpp"

#include <stdexcept>

namespace curvegreen {

std::vector<int> AugmentedSystem::gamma_orders() const {
    std::vector<int> mp(op.in_components(), 0);
    for (const auto& Ci : C)
        for (const auto& [key, v] : Ci) {
            const auto& [A, gamma, K] = key;
            mp[K] = std::max(mp[K], gamma.order());
        }
    return mp;
}

double AugmentedSystem::B_entry(int i, int A, int Ap, const Vec& x) const {
    double v = 0;
    auto it = B[i].find({A, Ap});
    if (it != B[i].end()) v += it->second.to_complex().real();
    if (!B_fn[i].empty()) {
        auto jt = B_fn[i].find({A, Ap});
        if (jt != B_fn[i].end()) v += jt->second(x);
    }
    return v;
}

void AugmentedSystem::check_grading() const {
    auto m = op.adjoint().orders(); // per u-side K
    auto mp = gamma_orders();
    for (int i = 0; i < d; ++i) {
        for (const auto& [key, v] : B[i]) {
            if (v.is_zero()) continue;
            auto [A, Ap] = key;
            if (vars[A].degree > vars[Ap].degree + 1)
                throw std::logic_error("graded structure violated: B_" + std::to_string(i + 1) + " (" +
                                       vars[A].name + "," + vars[Ap].name + ")");
        }
        for (const auto& [key, v] : C[i]) {
            if (v.is_zero()) continue;
            const auto& [A, gamma, K] = key;
            if (vars[A].degree > -m[K] - gamma.order() + 1)
                throw std::logic_error("graded structure violated: C_" + std::to_string(i + 1) + " (" +
                                       vars[A].name + ", gamma=" + gamma.str() + ", K=" + std::to_string(K) +
                                       ")");
            if (gamma.order() > mp[K]) throw std::logic_error("C support bound violated");
        }
    }
}

PolyQ AugmentedSystem::jet_apply(int A, const PolyField& phi) const {
    PolyQ s(d);
    for (const auto& [key, c] : vars[A].jet) {
        const auto& [alpha, J] = key;
        s = s + phi.comp[J].derivative(alpha) * c;
    }
    return s;
}

double AugmentedSystem::pde_residual(const PolyField& phi, const Vec& x) const {
    PolyField pstar_phi = op.adjoint().apply(phi);
    double worst = 0;
    for (int A = 0; A < size(); ++A) {
        PolyQ PhiA = jet_apply(A, phi);
        for (int i = 0; i < d; ++i) {
            std::complex<double> lhs = PhiA.derivative(i).eval(x);
            std::complex<double> rhs = 0;
            for (const auto& [key, v] : B[i]) {
                auto [Arow, Ap] = key;
                if (Arow != A) continue;
                rhs += v.to_complex() * jet_apply(Ap, phi).eval(x);
            }
            if (!B_fn[i].empty())
                for (const auto& [key, fn] : B_fn[i]) {
                    auto [Arow, Ap] = key;
                    if (Arow != A) continue;
                    rhs += fn(x) * jet_apply(Ap, phi).eval(x);
                }
            for (const auto& [key, v] : C[i]) {
                const auto& [Arow, gamma, K] = key;
                if (Arow != A) continue;
                rhs += v.to_complex() * pstar_phi.comp[K].derivative(gamma).eval(x);
            }
            worst = std::max(worst, std::abs(lhs - rhs));
        }
    }
    return worst;
}

AugmentedSystem maximal_from_certificate(const DiffOperator& P, const FcCertificate& cert) {
    const int d = P.dim();
    DiffOperator adj = P.adjoint();
    HomPolyMatrix ps = adj.principal_symbol();
    if (!verify_certificate(cert, ps))
        throw std::invalid_argument("certificate does not verify against the operator's adjoint symbol");

    AugmentedSystem S;
    S.d = d;
    S.op = P;
    S.r0 = P.out_components();
    S.name = P.name() + "_maximal";
    S.B.assign(d, {});
    S.B_fn.assign(d, {});
    S.C.assign(d, {});

    const int N0 = cert.N0;
    auto m = adj.orders();

    // Jet variables (alpha, J), graded order; vars[J] = phi_J first.
    std::map<std::pair<MultiIndex, int>, int> index;
    for (const MultiIndex& alpha : monomials_up_to(d, N0 - 1))
        for (int J = 0; J < S.r0; ++J) {
            AugVar v;
            v.degree = -alpha.order();
            v.name = "D" + alpha.str() + "phi" + std::to_string(J + 1);
            if (alpha.order() == 0) v.name = "phi" + std::to_string(J + 1);
            v.jet[{alpha, J}] = GR(1);
            index[{alpha, J}] = S.size();
            S.vars.push_back(std::move(v));
        }
    S.phi_var.resize(S.r0);
    for (int J = 0; J < S.r0; ++J) S.phi_var[J] = index.at({MultiIndex(d), J});

    // Shift rule below the top grade.
    for (const auto& [key, A] : index) {
        const auto& [alpha, J] = key;
        if (alpha.order() >= N0 - 1) continue;
        for (int i = 0; i < d; ++i) S.B[i][{A, index.at({alpha.plus(i), J})}] = GR(1);
    }

    // Top rows from the certificate; constant lower-order terms of P* fold
    // into B (the re-expression of (P*_prin d^gamma - d^gamma P*) phi).
    const auto& lower = adj.lower_coeffs(); // (beta, K, J') for the adjoint
    for (const auto& [key, A] : index) {
        const auto& [alpha, J] = key;
        if (alpha.order() != N0 - 1) continue;
        for (int i = 0; i < d; ++i) {
            const HomPolyMatrix& G = cert.g.at(alpha.plus(i));
            for (const auto& [gk, v] : G.entries()) {
                const auto& [Jg, K, gamma] = gk;
                if (Jg != J) continue;
                GR c = GR::i_pow(1 + alpha.order() - gamma.order()) * v;
                if (c.is_zero()) continue;
                S.C[i][{A, gamma, K}] += c;
                for (const auto& [lk, lv] : lower) {
                    const auto& [beta, Kl, Jp] = lk;
                    if (Kl != K) continue;
                    MultiIndex target = gamma + beta;
                    if (target.order() > N0 - 1)
                        throw std::logic_error("lower-order fold-in escapes the jet range");
                    S.B[i][{A, index.at({target, Jp})}] += -(c * lv);
                }
            }
        }
    }
    // Drop exact zeros accumulated by +=.
    for (int i = 0; i < d; ++i) {
        std::erase_if(S.B[i], [](const auto& kv) { return kv.second.is_zero(); });
        std::erase_if(S.C[i], [](const auto& kv) { return kv.second.is_zero(); });
    }
    S.check_grading();
    return S;
}

namespace {

int var_index(const std::vector<AugVar>& vars, const std::string& name) {
    for (size_t i = 0; i < vars.size(); ++i)
        if (vars[i].name == name) return static_cast<int>(i);
    throw std::logic_error("no augmented variable named " + name);
}

// Shared builders. phi_off / om_off refer to component indices of phi on the
// r0 side; slot_off to u-side slots; var names get an optional prefix for the
// Einstein blocks.
void build_hessian_block(AugmentedSystem& S, int d, int phi_comp, int slot_off, const std::string& pre) {
    // vars: phi (0), om_j = d_j phi (-1)
    AugVar phi;
    phi.name = pre + "phi";
    phi.degree = 0;
    phi.jet[{MultiIndex(d), phi_comp}] = GR(1);
    S.vars.push_back(phi);
    for (int j = 0; j < d; ++j) {
        AugVar om;
        om.name = pre + "om" + std::to_string(j + 1);
        om.degree = -1;
        om.jet[{MultiIndex::unit(d, j), phi_comp}] = GR(1);
        S.vars.push_back(om);
    }
    int vphi = var_index(S.vars, pre + "phi");
    for (int i = 0; i < d; ++i) {
        S.B[i][{vphi, var_index(S.vars, pre + "om" + std::to_string(i + 1))}] = GR(1);
        for (int j = 0; j < d; ++j) {
            int vom = var_index(S.vars, pre + "om" + std::to_string(j + 1));
            S.C[i][{vom, MultiIndex(d), slot_off + SlotSpace::pair_slot(d, i, j)}] = GR(1);
        }
    }
}

void build_killing_block(AugmentedSystem& S, int d, int om_comp0, int slot_off, const std::string& pre,
                         bool tracefree) {
    // vars: om_j (0), eta_jk j<k (-1); trace-free adds w (-1), zeta_j (-2).
    for (int j = 0; j < d; ++j) {
        AugVar om;
        om.name = pre + "om" + std::to_string(j + 1);
        om.degree = 0;
        om.jet[{MultiIndex(d), om_comp0 + j}] = GR(1);
        S.vars.push_back(om);
    }
    for (int j = 0; j < d; ++j)
        for (int k = j + 1; k < d; ++k) {
            AugVar eta; // eta_jk = 1/2 (d_j om_k - d_k om_j)
            eta.name = pre + "eta" + std::to_string(j + 1) + std::to_string(k + 1);
            eta.degree = -1;
            eta.jet[{MultiIndex::unit(d, j), om_comp0 + k}] = GR::frac(1, 2);
            eta.jet[{MultiIndex::unit(d, k), om_comp0 + j}] = GR::frac(-1, 2);
            S.vars.push_back(eta);
        }
    if (tracefree) {
        AugVar w; // w = (1/d) div om
        w.name = pre + "w";
        w.degree = -1;
        for (int l = 0; l < d; ++l) w.jet[{MultiIndex::unit(d, l), om_comp0 + l}] = GR::frac(1, d);
        S.vars.push_back(w);
        for (int j = 0; j < d; ++j) {
            AugVar z; // zeta_j = d_j w
            z.name = pre + "zeta" + std::to_string(j + 1);
            z.degree = -2;
            for (int l = 0; l < d; ++l)
                z.jet[{MultiIndex::unit(d, j) + MultiIndex::unit(d, l), om_comp0 + l}] = GR::frac(1, d);
            S.vars.push_back(z);
        }
    }

    auto eta_split = [&](int a, int b) { // eta_ab = sign * eta_(min,max)
        int sgn = a < b ? 1 : (a > b ? -1 : 0);
        if (sgn == 0) return std::pair<int, int>(-1, 0);
        int lo = std::min(a, b), hi = std::max(a, b);
        return std::pair<int, int>(
            var_index(S.vars, pre + "eta" + std::to_string(lo + 1) + std::to_string(hi + 1)), sgn);
    };

    // d_i om_j = eta_ij [+ w delta_ij] - (P* om)_ij
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            int vom = var_index(S.vars, pre + "om" + std::to_string(j + 1));
            auto [veta, sgn] = eta_split(i, j);
            if (sgn != 0) S.B[i][{vom, veta}] += GR(sgn);
            if (tracefree && i == j) S.B[i][{vom, var_index(S.vars, pre + "w")}] += GR(1);
            S.C[i][{vom, MultiIndex(d), slot_off + SlotSpace::pair_slot(d, i, j)}] += GR(-1);
        }

    // d_i eta_jk = [zeta_j g_ik - zeta_k g_ij] + d_k (P*om)_ij - d_j (P*om)_ki
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            for (int k = j + 1; k < d; ++k) {
                int veta = var_index(S.vars, pre + "eta" + std::to_string(j + 1) + std::to_string(k + 1));
                if (tracefree) {
                    if (i == k) S.B[i][{veta, var_index(S.vars, pre + "zeta" + std::to_string(j + 1))}] += GR(1);
                    if (i == j) S.B[i][{veta, var_index(S.vars, pre + "zeta" + std::to_string(k + 1))}] += GR(-1);
                }
                S.C[i][{veta, MultiIndex::unit(d, k), slot_off + SlotSpace::pair_slot(d, i, j)}] += GR(1);
                S.C[i][{veta, MultiIndex::unit(d, j), slot_off + SlotSpace::pair_slot(d, k, i)}] += GR(-1);
            }

    if (tracefree) {
        int vw = var_index(S.vars, pre + "w");
        // d_i w = zeta_i
        for (int i = 0; i < d; ++i) S.B[i][{vw, var_index(S.vars, pre + "zeta" + std::to_string(i + 1))}] = GR(1);
        // d_i zeta_j = 1/(d-2) Cc(P*om)_ij with
        // Cc(psi)_ij = -d^l d_i psi_lj - d^l d_j psi_li + Lap psi_ij
        //              + 1/(d-1) d^l d^m psi_lm delta_ij.
        GR f = GR::frac(1, d - 2);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                int vz = var_index(S.vars, pre + "zeta" + std::to_string(j + 1));
                auto addC = [&](const MultiIndex& gamma, int a, int b, const GR& c) {
                    S.C[i][{vz, gamma, slot_off + SlotSpace::pair_slot(d, a, b)}] += c;
                };
                for (int l = 0; l < d; ++l) {
                    addC(MultiIndex::unit(d, l) + MultiIndex::unit(d, i), l, j, -f);
                    addC(MultiIndex::unit(d, l) + MultiIndex::unit(d, j), l, i, -f);
                    addC(MultiIndex::unit(d, l) + MultiIndex::unit(d, l), i, j, f);
                    if (i == j)
                        for (int mm = 0; mm < d; ++mm)
                            addC(MultiIndex::unit(d, l) + MultiIndex::unit(d, mm), l, mm, f * GR::frac(1, d - 1));
                }
            }
    }
}

} // namespace

AugmentedSystem special_system(const std::string& name, int d) {
    AugmentedSystem S;
    S.d = d;
    S.name = name + "_special";
    S.op = builtin(name, d);
    S.r0 = S.op.out_components();
    S.B.assign(d, {});
    S.B_fn.assign(d, {});
    S.C.assign(d, {});

    if (name == "divergence") {
        AugVar phi;
        phi.name = "phi";
        phi.degree = 0;
        phi.jet[{MultiIndex(d), 0}] = GR(1);
        S.vars.push_back(phi);
        for (int i = 0; i < d; ++i) S.C[i][{0, MultiIndex(d), i}] = GR(-1);
    } else if (name == "double_divergence") {
        build_hessian_block(S, d, 0, 0, "");
    } else if (name == "tracefree_double_divergence") {
        // phi(0), om_j(-1), w(-2):
        //   d_i phi = om_i
        //   d_i om_j = (P*phi)_ij + w delta_ij
        //   d_i w = 1/(d-1) d^l (P*phi)_il
        build_hessian_block(S, d, 0, 0, "");
        AugVar w;
        w.name = "w";
        w.degree = -2;
        for (int l = 0; l < d; ++l)
            w.jet[{MultiIndex::unit(d, l) + MultiIndex::unit(d, l), 0}] = GR::frac(1, d);
        S.vars.push_back(w);
        int vw = var_index(S.vars, "w");
        for (int i = 0; i < d; ++i) {
            int vom = var_index(S.vars, "om" + std::to_string(i + 1));
            S.B[i][{vom, vw}] = GR(1);
            for (int l = 0; l < d; ++l)
                S.C[i][{vw, MultiIndex::unit(d, l), SlotSpace::pair_slot(d, i, l)}] = GR::frac(1, d - 1);
        }
    } else if (name == "symmetric_divergence") {
        build_killing_block(S, d, 0, 0, "", false);
    } else if (name == "tracefree_symmetric_divergence") {
        build_killing_block(S, d, 0, 0, "", true);
    } else if (name == "einstein_constraint") {
        build_hessian_block(S, d, 0, 0, "a.");
        build_killing_block(S, d, 1, d * (d + 1) / 2, "b.", false);
    } else if (name == "einstein_constraint_cmc") {
        build_hessian_block(S, d, 0, 0, "a.");
        build_killing_block(S, d, 1, d * (d + 1) / 2, "b.", true);
    } else {
        throw std::invalid_argument("unknown special system '" + name + "'");
    }
    if (name == "einstein_constraint" || name == "einstein_constraint_cmc") {
        S.phi_var.push_back(var_index(S.vars, "a.phi"));
        for (int j = 0; j < d; ++j) S.phi_var.push_back(var_index(S.vars, "b.om" + std::to_string(j + 1)));
    } else if (name == "divergence") {
        S.phi_var = {0};
    } else if (name == "double_divergence" || name == "tracefree_double_divergence") {
        S.phi_var = {var_index(S.vars, "phi")};
    } else {
        for (int j = 0; j < d; ++j) S.phi_var.push_back(var_index(S.vars, "om" + std::to_string(j + 1)));
    }
    S.check_grading();
    return S;
}

AugmentedSystem divergence_system_with_B(int d, const std::vector<PolyD>& Bpoly) {
    AugmentedSystem S = special_system("divergence", d);
    S.name = "divergence_lower_special";
    for (int i = 0; i < d; ++i) {
        if (Bpoly[i].is_zero()) continue;
        PolyD p = Bpoly[i];
        S.B_fn[i][{0, 0}] = [p](const Vec& x) { return p.eval(x); };
    }
    return S;
}

namespace {

double fd_dB(const AugmentedSystem& sys, int dir, int i, int A, int Ap, Vec x) {
    // Richardson-extrapolated central difference, base step 1e-5 (1+|x|).
    double nx = 0;
    for (double v : x) nx += v * v;
    double h = 1e-5 * (1 + std::sqrt(nx));
    auto D = [&](double step) {
        Vec xp = x, xm = x;
        xp[dir] += step;
        xm[dir] -= step;
        return (sys.B_entry(i, A, Ap, xp) - sys.B_entry(i, A, Ap, xm)) / (2 * step);
    };
    double d1 = D(h), d2 = D(h / 2);
    return (4 * d2 - d1) / 3;
}

} // namespace

std::vector<std::vector<Eigen::MatrixXd>> curvature(const AugmentedSystem& sys, const Vec& x) {
    const int n = sys.size(), d = sys.d;
    std::vector<Eigen::MatrixXd> Bx(d, Eigen::MatrixXd::Zero(n, n));
    for (int i = 0; i < d; ++i)
        for (int A = 0; A < n; ++A)
            for (int Ap = 0; Ap < n; ++Ap) Bx[i](A, Ap) = sys.B_entry(i, A, Ap, x);

    std::vector<std::vector<Eigen::MatrixXd>> F(d, std::vector<Eigen::MatrixXd>(d, Eigen::MatrixXd::Zero(n, n)));
    const bool cst = sys.constant_coefficients();
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            Eigen::MatrixXd M = Bx[i] * Bx[j] - Bx[j] * Bx[i];
            if (!cst) {
                for (int A = 0; A < n; ++A)
                    for (int Ap = 0; Ap < n; ++Ap) {
                        bool has_ij = sys.B_fn[j].count({A, Ap}) > 0;
                        bool has_ji = sys.B_fn[i].count({A, Ap}) > 0;
                        if (has_ij) M(A, Ap) += fd_dB(sys, i, j, A, Ap, x);
                        if (has_ji) M(A, Ap) -= fd_dB(sys, j, i, A, Ap, x);
                    }
            }
            F[i][j] = M;
        }
    return F;
}

bool curvature_zero_exact(const AugmentedSystem& sys) {
    if (!sys.constant_coefficients()) return false;
    const int n = sys.size();
    auto get = [&](int i, int A, int Ap) {
        auto it = sys.B[i].find({A, Ap});
        return it == sys.B[i].end() ? GR() : it->second;
    };
    for (int i = 0; i < sys.d; ++i)
        for (int j = i + 1; j < sys.d; ++j)
            for (int A = 0; A < n; ++A)
                for (int Ap = 0; Ap < n; ++Ap) {
                    GR s;
                    for (int Am = 0; Am < n; ++Am)
                        s += get(i, A, Am) * get(j, Am, Ap) - get(j, A, Am) * get(i, Am, Ap);
                    if (!s.is_zero()) return false;
                }
    return true;
}

IntegrabilityReport is_completely_integrable(const AugmentedSystem& sys, const std::vector<Vec>& samples) {
    IntegrabilityReport R;
    if (sys.constant_coefficients()) {
        R.exact = true;
        R.integrable = curvature_zero_exact(sys);
        R.max_curvature = R.integrable ? 0.0 : 1.0;
        if (!R.integrable) {
            auto F = curvature(sys, Vec(sys.d, 0.0));
            double m = 0;
            for (const auto& row : F)
                for (const auto& M : row) m = std::max(m, M.cwiseAbs().maxCoeff());
            R.max_curvature = m;
        }
        return R;
    }
    double m = 0;
    for (const auto& x : samples) {
        auto F = curvature(sys, x);
        for (const auto& row : F)
            for (const auto& M : row) m = std::max(m, M.cwiseAbs().maxCoeff());
    }
    R.max_curvature = m;
    R.integrable = m <= 1e-10;
    return R;
}

namespace {

PolyField scalar_field(int d, const PolyQ& p) {
    PolyField f;
    f.comp.push_back(p);
    return f;
}

std::vector<PolyField> hessian_kernel(int d) {
    std::vector<PolyField> Z;
    Z.push_back(scalar_field(d, PolyQ::constant(d, GR(1))));
    for (int i = 0; i < d; ++i) Z.push_back(scalar_field(d, PolyQ::variable(d, i)));
    return Z;
}

std::vector<PolyField> killing_kernel(int d) {
    std::vector<PolyField> Z;
    for (int J = 0; J < d; ++J) {
        PolyField f;
        f.comp.assign(d, PolyQ(d));
        f.comp[J] = PolyQ::constant(d, GR(1));
        Z.push_back(f);
    }
    for (int J = 0; J < d; ++J)
        for (int K = J + 1; K < d; ++K) {
            PolyField f;
            f.comp.assign(d, PolyQ(d));
            f.comp[J] = PolyQ::variable(d, K);
            f.comp[K] = PolyQ::variable(d, J) * GR(-1);
            Z.push_back(f);
        }
    return Z;
}

std::vector<PolyField> conformal_killing_kernel(int d) {
    auto Z = killing_kernel(d);
    {
        PolyField dil; // x^j e_j
        dil.comp.assign(d, PolyQ(d));
        for (int j = 0; j < d; ++j) dil.comp[j] = PolyQ::variable(d, j);
        Z.push_back(dil);
    }
    PolyQ norm2(d);
    for (int j = 0; j < d; ++j) norm2 = norm2 + PolyQ::variable(d, j) * PolyQ::variable(d, j);
    for (int J = 0; J < d; ++J) {
        // Special conformal field 2 x_J x^j e_j - |x|^2 e_J.
        PolyField f;
        f.comp.assign(d, PolyQ(d));
        for (int j = 0; j < d; ++j) f.comp[j] = PolyQ::variable(d, J) * PolyQ::variable(d, j) * GR(2);
        f.comp[J] = f.comp[J] - norm2;
        Z.push_back(f);
    }
    return Z;
}

std::vector<PolyField> block_union(int d, const std::vector<PolyField>& A, int acomp,
                                   const std::vector<PolyField>& B, int bcomp) {
    std::vector<PolyField> Z;
    for (const auto& a : A) {
        PolyField f;
        f.comp = a.comp;
        for (int i = 0; i < bcomp; ++i) f.comp.push_back(PolyQ(d));
        Z.push_back(f);
    }
    for (const auto& b : B) {
        PolyField f;
        f.comp.assign(acomp, PolyQ(d));
        for (const auto& c : b.comp) f.comp.push_back(c);
        Z.push_back(f);
    }
    return Z;
}

} // namespace

CokernelBasis cokernel_basis(const std::string& name, int d) {
    CokernelBasis B;
    B.name = name;
    B.d = d;
    if (name == "divergence") {
        B.Z = {scalar_field(d, PolyQ::constant(d, GR(1)))};
    } else if (name == "double_divergence") {
        B.Z = hessian_kernel(d);
    } else if (name == "tracefree_double_divergence") {
        if (d < 2) throw std::invalid_argument("tracefree_double_divergence requires d >= 2");
        B.Z = hessian_kernel(d);
        PolyQ norm2(d);
        for (int j = 0; j < d; ++j) norm2 = norm2 + PolyQ::variable(d, j) * PolyQ::variable(d, j);
        B.Z.push_back(scalar_field(d, norm2));
    } else if (name == "symmetric_divergence") {
        B.Z = killing_kernel(d);
    } else if (name == "tracefree_symmetric_divergence") {
        if (d < 3) throw std::invalid_argument("tracefree_symmetric_divergence requires d >= 3");
        B.Z = conformal_killing_kernel(d);
    } else if (name == "einstein_constraint") {
        B.Z = block_union(d, hessian_kernel(d), 1, killing_kernel(d), d);
    } else if (name == "einstein_constraint_cmc") {
        if (d < 3) throw std::invalid_argument("einstein_constraint_cmc requires d >= 3");
        B.Z = block_union(d, hessian_kernel(d), 1, conformal_killing_kernel(d), d);
    } else {
        throw std::invalid_argument("no cokernel basis for '" + name + "'");
    }
    return B;
}

} // namespace curvegreen
