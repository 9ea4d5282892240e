#include "curvegreen/averaging.hpp"

#include <cmath>

namespace curvegreen {

double sphere_area(int d) {
    return 2.0 * std::pow(M_PI, 0.5 * d) / std::tgamma(0.5 * d);
}

Weight Weight::bogovskii(int d, Vec center, double radius, int p) {
    Weight w;
    w.kind = Bogovskii;
    w.d = d;
    w.center = std::move(center);
    w.radius = radius;
    w.p = p;
    w.norm = 1.0;
    double m = w.mass();
    w.norm = 1.0 / m;
    return w;
}

Weight Weight::conic_cap(int d, Vec axis, double aperture, int p) {
    Weight w;
    w.kind = ConicCap;
    w.d = d;
    w.axis = std::move(axis);
    double nn = 0;
    for (double v : w.axis) nn += v * v;
    nn = std::sqrt(nn);
    for (double& v : w.axis) v /= nn;
    w.aperture = aperture;
    w.p = p;
    w.norm = 1.0;
    double m = w.mass();
    w.norm = 1.0 / m;
    return w;
}

Weight Weight::conic_uniform(int d) {
    Weight w;
    w.kind = ConicUniform;
    w.d = d;
    w.norm = 1.0 / sphere_area(d);
    return w;
}

double Weight::eval(const Vec& y) const {
    double u = 0;
    for (int i = 0; i < d; ++i) u += (y[i] - center[i]) * (y[i] - center[i]);
    u /= radius * radius;
    if (u >= 1) return 0;
    return norm * std::pow(1 - u, p);
}

Vec Weight::grad(const Vec& y) const {
    Vec g(d, 0.0);
    double u = 0;
    for (int i = 0; i < d; ++i) u += (y[i] - center[i]) * (y[i] - center[i]);
    u /= radius * radius;
    if (u >= 1) return g;
    double f = -norm * 2.0 * p * std::pow(1 - u, p - 1) / (radius * radius);
    for (int i = 0; i < d; ++i) g[i] = f * (y[i] - center[i]);
    return g;
}

Eigen::MatrixXd Weight::hess(const Vec& y) const {
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(d, d);
    double u = 0;
    for (int i = 0; i < d; ++i) u += (y[i] - center[i]) * (y[i] - center[i]);
    u /= radius * radius;
    if (u >= 1) return H;
    double r2 = radius * radius;
    double a = norm * 4.0 * p * (p - 1) * std::pow(1 - u, p - 2) / (r2 * r2);
    double b = -norm * 2.0 * p * std::pow(1 - u, p - 1) / r2;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            H(i, j) = a * (y[i] - center[i]) * (y[j] - center[j]);
            if (i == j) H(i, j) += b;
        }
    return H;
}

double Weight::deriv(const MultiIndex& alpha, const Vec& y) const {
    int o = alpha.order();
    if (o == 0) return eval(y);
    if (o == 1) {
        for (int i = 0; i < d; ++i)
            if (alpha[i] == 1) return grad(y)[i];
    }
    if (o == 2) {
        int i0 = -1, j0 = -1;
        for (int i = 0; i < d; ++i) {
            if (alpha[i] == 2) return hess(y)(i, i);
            if (alpha[i] == 1) (i0 < 0 ? i0 : j0) = i;
        }
        return hess(y)(i0, j0);
    }
    throw std::invalid_argument("Weight::deriv supports |alpha| <= 2");
}

double Weight::angular(const Vec& omega) const {
    if (kind == ConicUniform) return norm;
    double dot = 0, nn = 0;
    for (int i = 0; i < d; ++i) {
        dot += omega[i] * axis[i];
        nn += omega[i] * omega[i];
    }
    dot /= std::sqrt(nn);
    double u = (1 - dot) / (1 - std::cos(aperture));
    if (u >= 1) return 0;
    return norm * std::pow(1 - u, p);
}

bool Weight::in_cap(const Vec& omega) const {
    if (kind == ConicUniform) return true;
    double dot = 0, nn = 0;
    for (int i = 0; i < d; ++i) {
        dot += omega[i] * axis[i];
        nn += omega[i] * omega[i];
    }
    return dot / std::sqrt(nn) > std::cos(aperture);
}

double Weight::mass(double tol) const {
    if (kind == Bogovskii) {
        auto f = [&](double r) {
            double u = r * r / (radius * radius);
            return norm * std::pow(1 - u, p) * std::pow(r, d - 1);
        };
        return sphere_area(d) * integrate_adaptive(f, 0.0, radius, tol);
    }
    if (kind == ConicUniform) return norm * sphere_area(d);
    auto f = [&](double a) {
        double u = (1 - std::cos(a)) / (1 - std::cos(aperture));
        double s = (d >= 3) ? std::pow(std::sin(a), d - 2) : 1.0;
        return norm * std::pow(1 - u, p) * s;
    };
    double fac = (d == 2) ? 2.0 : sphere_area(d - 1); // two arcs in d = 2
    return fac * integrate_adaptive(f, 0.0, aperture, tol);
}

double fd_partial(const std::function<double(const Vec&)>& f, Vec z, int axis) {
    double nz = 0;
    for (double v : z) nz += v * v;
    nz = std::sqrt(nz);
    double h = std::min(1e-4 * (1 + nz), 0.05 * nz);
    if (h <= 0) h = 1e-6;
    auto D = [&](double step) {
        Vec zp = z, zm = z;
        zp[axis] += step;
        zm[axis] -= step;
        return (f(zp) - f(zm)) / (2 * step);
    };
    double d1 = D(h), d2 = D(h / 2);
    return (4 * d2 - d1) / 3;
}

namespace {

double fd_second(const std::function<double(const Vec&)>& f, const Vec& z, int i, int j) {
    double nz = 0;
    for (double v : z) nz += v * v;
    nz = std::sqrt(nz);
    double h = std::min(1e-4 * (1 + nz), 0.05 * nz);
    if (h <= 0) h = 1e-6;
    auto S = [&](double step) {
        if (i == j) {
            Vec zp = z, zm = z;
            zp[i] += step;
            zm[i] -= step;
            return (f(zp) - 2 * f(z) + f(zm)) / (step * step);
        }
        Vec a = z, b = z, c = z, e = z;
        a[i] += step; a[j] += step;
        b[i] += step; b[j] -= step;
        c[i] -= step; c[j] += step;
        e[i] -= step; e[j] -= step;
        return (f(a) - f(b) - f(c) + f(e)) / (4 * step * step);
    };
    double s1 = S(h), s2 = S(h / 2);
    return (4 * s2 - s1) / 3;
}

double norm2(const Vec& z) {
    double s = 0;
    for (double v : z) s += v * v;
    return std::sqrt(s);
}

// Radial factor of the averaged kernels: the Bogovskii ray integral
// R(z; y) = int_{|z|}^inf eta1(y + r z/|z|) r^{d-1} dr (exact GL on the
// support interval; the integrand is a polynomial in r), or the angular
// density for conic weights.
double radial_factor(const Weight& w, const Vec& z, const Vec& y) {
    const int d = w.d;
    if (w.is_conic()) return w.angular(z);
    double nz = norm2(z);
    Vec zh(d);
    for (int i = 0; i < d; ++i) zh[i] = z[i] / nz;
    double b = 0, cc = -w.radius * w.radius;
    for (int i = 0; i < d; ++i) {
        b += zh[i] * (y[i] - w.center[i]);
        cc += (y[i] - w.center[i]) * (y[i] - w.center[i]);
    }
    double disc = b * b - cc;
    if (disc <= 0) return 0;
    double r0 = std::max(nz, -b - std::sqrt(disc));
    double r1 = -b + std::sqrt(disc);
    if (r1 <= r0) return 0;
    auto f = [&](double r) {
        Vec yy(d);
        for (int i = 0; i < d; ++i) yy[i] = y[i] + r * zh[i];
        return w.eval(yy) * std::pow(r, d - 1);
    };
    return integrate_gl(f, r0, r1, 24);
}

using MatFn = std::function<Eigen::MatrixXd(const Vec&)>;

// (T* F)_{ij} = 1/2 (F_{ij} + F_{ji}) - delta_ij tr F / d, entrywise.
Eigen::MatrixXd tstar(const Eigen::MatrixXd& F) {
    int d = F.rows();
    Eigen::MatrixXd R = 0.5 * (F + F.transpose());
    double tr = F.trace() / d;
    for (int i = 0; i < d; ++i) R(i, i) -= tr;
    return R;
}

} // namespace

AveragedKernel closed_form_kernel(const std::string& name, const Weight& w, int d) {
    DiffOperator P = builtin(name, d);
    AveragedKernel K;
    K.backing = "closed_form";
    K.op_name = name;
    K.d = d;
    K.s0 = P.in_components();
    K.r0 = P.out_components();
    K.weight = w;
    K.row_order = P.adjoint().orders();
    K.in_weights = P.in_space().weights();

    auto W = [w](const Vec& z, const Vec& y) { return radial_factor(w, z, y); };

    if (name == "divergence") {
        K.eval = [d, W](const Vec& x, const Vec& y) {
            Eigen::MatrixXd M = Eigen::MatrixXd::Zero(d, 1);
            Vec z(d);
            for (int i = 0; i < d; ++i) z[i] = x[i] - y[i];
            double nz = norm2(z);
            if (nz < 1e-6) return M;
            double f = W(z, y) / std::pow(nz, d);
            for (int j = 0; j < d; ++j) M(j, 0) = z[j] * f;
            return M;
        };
    } else if (name == "double_divergence") {
        K.eval = [d, W](const Vec& x, const Vec& y) {
            int ns = d * (d + 1) / 2;
            Eigen::MatrixXd M = Eigen::MatrixXd::Zero(ns, 1);
            Vec z(d);
            for (int i = 0; i < d; ++i) z[i] = x[i] - y[i];
            double nz = norm2(z);
            if (nz < 1e-6) return M;
            double f = W(z, y) / std::pow(nz, d);
            for (int a = 0; a < d; ++a)
                for (int b = a; b < d; ++b) M(SlotSpace::pair_slot(d, a, b), 0) = z[a] * z[b] * f;
            return M;
        };
    } else if (name == "tracefree_double_divergence") {
        K.eval = [d, W](const Vec& x, const Vec& y) {
            int ns = d * (d + 1) / 2;
            Eigen::MatrixXd M = Eigen::MatrixXd::Zero(ns, 1);
            Vec z(d);
            for (int i = 0; i < d; ++i) z[i] = x[i] - y[i];
            double nz = norm2(z);
            if (nz < 1e-6) return M;
            Eigen::MatrixXd F(d, d);
            double f = W(z, y) / std::pow(nz, d);
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) F(i, j) = z[i] * z[j] * f;
            // + 1/(2(d-1)) T*( d_{z^j} ( W z^i / |z|^{d-2} ) )
            Eigen::MatrixXd G(d, d);
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) {
                    auto gi = [&, i](const Vec& zz) {
                        return W(zz, y) * zz[i] / std::pow(norm2(zz), d - 2);
                    };
                    G(i, j) = fd_partial(gi, z, j);
                }
            Eigen::MatrixXd T = tstar(F) + tstar(G) / (2.0 * (d - 1));
            for (int a = 0; a < d; ++a)
                for (int b = a; b < d; ++b) M(SlotSpace::pair_slot(d, a, b), 0) = T(a, b);
            return M;
        };
    } else if (name == "symmetric_divergence") {
        K.eval = [d, W](const Vec& x, const Vec& y) {
            int ns = d * (d + 1) / 2;
            Eigen::MatrixXd M = Eigen::MatrixXd::Zero(ns, d);
            Vec z(d);
            for (int i = 0; i < d; ++i) z[i] = x[i] - y[i];
            double nz = norm2(z);
            if (nz < 1e-6) return M;
            double f = W(z, y) / std::pow(nz, d);
            for (int a = 0; a < d; ++a)
                for (int b = a; b < d; ++b) {
                    int s = SlotSpace::pair_slot(d, a, b);
                    for (int k = 0; k < d; ++k) {
                        double v = 0;
                        // 1/2 W (z^i d_k^j + z^j d_k^i) / |z|^d
                        if (b == k) v += 0.5 * z[a] * f;
                        if (a == k) v += 0.5 * z[b] * f;
                        // + 1/2 d_m ( W z^m (z^i d_k^j + z^j d_k^i) / |z|^d )
                        for (int m = 0; m < d; ++m) {
                            auto g = [&, m](const Vec& zz) {
                                double ff = W(zz, y) / std::pow(norm2(zz), d);
                                double t = 0;
                                if (b == k) t += zz[m] * zz[a] * ff;
                                if (a == k) t += zz[m] * zz[b] * ff;
                                return 0.5 * t;
                            };
                            v += fd_partial(g, z, m);
                        }
                        // - d_k ( W z^i z^j / |z|^d )
                        auto h = [&](const Vec& zz) {
                            return W(zz, y) * zz[a] * zz[b] / std::pow(norm2(zz), d);
                        };
                        v -= fd_partial(h, z, k);
                        M(s, k) = v;
                    }
                }
            return M;
        };
    } else if (name == "tracefree_symmetric_divergence") {
        K.eval = [d, W](const Vec& x, const Vec& y) {
            int ns = d * (d + 1) / 2;
            Eigen::MatrixXd M = Eigen::MatrixXd::Zero(ns, d);
            Vec z(d);
            for (int i = 0; i < d; ++i) z[i] = x[i] - y[i];
            double nz = norm2(z);
            if (nz < 1e-6) return M;

            for (int k = 0; k < d; ++k) {
                // Term 1: T*( W z^i delta_k^j / |z|^d )  (algebraic)
                Eigen::MatrixXd F1 = Eigen::MatrixXd::Zero(d, d);
                double f = W(z, y) / std::pow(nz, d);
                for (int i = 0; i < d; ++i) F1(i, k) = z[i] * f;

                // C* of a matrix-valued field (argument need not be
                // symmetric; T* symmetrizes afterwards): (C* F)_{ij} =
                //   -d^l d_i F_{lj} - d^l d_i F_{jl} + Lap F_{ij}
                //   + 1/(d-1) d_i d_j tr F.
                auto cstar = [&](const std::function<double(const Vec&, int, int)>& Ffn) {
                    Eigen::MatrixXd R = Eigen::MatrixXd::Zero(d, d);
                    for (int i = 0; i < d; ++i)
                        for (int j = 0; j < d; ++j) {
                            double v = 0;
                            for (int l = 0; l < d; ++l) {
                                v -= fd_second([&](const Vec& zz) { return Ffn(zz, l, j); }, z, l, i);
                                v -= fd_second([&](const Vec& zz) { return Ffn(zz, j, l); }, z, l, i);
                                v += fd_second([&](const Vec& zz) { return Ffn(zz, i, j); }, z, l, l);
                            }
                            double tr = 0;
                            for (int l = 0; l < d; ++l)
                                tr += fd_second([&](const Vec& zz) { return Ffn(zz, l, l); }, z, i, j);
                            v += tr / (d - 1);
                            R(i, j) = v;
                        }
                    return R;
                };

                // Term 2 + 3: 1/(2(d-2)) T* C* ( W (z^i delta_k^j |z|^2 - 2 z^i z^j z_k) / |z|^d )
                Eigen::MatrixXd F23 = cstar([&](const Vec& zz, int i, int j) {
                    double ff = W(zz, y) / std::pow(norm2(zz), d);
                    double t = -2.0 * zz[i] * zz[j] * zz[k];
                    if (j == k) t += zz[i] * norm2(zz) * norm2(zz);
                    return ff * t;
                }) / (2.0 * (d - 2));

                // Term 4: -( T* delta_l^j d_k - T* delta_k^j d_l )( W z^i z^l / |z|^d ):
                // with G^{il} = W z^i z^l / |z|^d this is
                // T*( -d_k G^{ij} + delta_k^j d_l G^{il} ).
                Eigen::MatrixXd F4 = Eigen::MatrixXd::Zero(d, d);
                for (int i = 0; i < d; ++i)
                    for (int j = 0; j < d; ++j) {
                        auto Gij = [&](const Vec& zz) {
                            return W(zz, y) * zz[i] * zz[j] / std::pow(norm2(zz), d);
                        };
                        F4(i, j) = -fd_partial(Gij, z, k);
                        if (j == k)
                            for (int l = 0; l < d; ++l) {
                                auto Gil = [&](const Vec& zz) {
                                    return W(zz, y) * zz[i] * zz[l] / std::pow(norm2(zz), d);
                                };
                                F4(i, j) += fd_partial(Gil, z, l);
                            }
                    }

                Eigen::MatrixXd T = tstar(F1) + tstar(F23) + tstar(F4);
                for (int a = 0; a < d; ++a)
                    for (int b = a; b < d; ++b) M(SlotSpace::pair_slot(d, a, b), k) = T(a, b);
            }
            return M;
        };
    } else if (name == "einstein_constraint" || name == "einstein_constraint_cmc") {
        bool cmc = (name == "einstein_constraint_cmc");
        AveragedKernel Kd = closed_form_kernel("double_divergence", w, d);
        AveragedKernel Ks =
            closed_form_kernel(cmc ? "tracefree_symmetric_divergence" : "symmetric_divergence", w, d);
        int np = d * (d + 1) / 2;
        K.eval = [d, np, Kd, Ks](const Vec& x, const Vec& y) {
            Eigen::MatrixXd M = Eigen::MatrixXd::Zero(2 * np, 1 + d);
            M.block(0, 0, np, 1) = Kd.eval(x, y);
            M.block(np, 1, np, d) = Ks.eval(x, y);
            return M;
        };
    } else {
        throw std::invalid_argument("no closed-form kernel for '" + name + "'");
    }
    return K;
}

AveragedKernel ode_kernel_average(const AugmentedSystem& sys, const Weight& w) {
    if (!sys.constant_coefficients())
        throw std::invalid_argument("ode_kernel_average requires constant coefficients");
    const int d = sys.d;
    DiffOperator adj = sys.op.adjoint();
    AveragedKernel K;
    K.backing = "ode_average";
    K.op_name = sys.op.name();
    K.d = d;
    K.s0 = sys.op.in_components();
    K.r0 = sys.r0;
    K.weight = w;
    K.row_order = adj.orders();
    K.in_weights = sys.op.in_space().weights();

    auto in_w = sys.op.in_space().weights();
    const int n = sys.size();
    // Collect (gamma, K) -> per-direction C columns.
    std::map<std::pair<MultiIndex, int>, std::vector<Eigen::VectorXd>> cdir;
    for (int i = 0; i < d; ++i)
        for (const auto& [key, v] : sys.C[i]) {
            const auto& [A, gamma, Kk] = key;
            auto& vs = cdir[{gamma, Kk}];
            if (vs.empty()) vs.assign(d, Eigen::VectorXd::Zero(n));
            vs[i](A) += v.to_complex().real();
        }

    auto sysp = std::make_shared<AugmentedSystem>(sys);
    K.eval = [d, n, sysp, cdir, w, in_w](const Vec& x, const Vec& y) {
        const AugmentedSystem& S = *sysp;
        const int s0 = S.op.in_components(), r0 = S.r0;
        Eigen::MatrixXd M = Eigen::MatrixXd::Zero(s0, r0);
        Vec z(d);
        for (int i = 0; i < d; ++i) z[i] = x[i] - y[i];
        if (norm2(z) < 1e-6) return M;

        // I_{gamma,K,J}(z) = -[Pi01(z) (z . C)]_J Rad(z) / |z|^d, where
        // Pi01(z) = exp(-sum z_i B_i) (terminating series).
        auto Ival = [&](const Vec& zz, const std::vector<Eigen::VectorXd>& cols, int J) {
            Eigen::MatrixXd Mz = Eigen::MatrixXd::Zero(n, n);
            for (int i = 0; i < d; ++i)
                for (const auto& [key, v] : S.B[i]) {
                    auto [A, Ap] = key;
                    Mz(A, Ap) += zz[i] * v.to_complex().real();
                }
            Eigen::MatrixXd Pi = Eigen::MatrixXd::Identity(n, n);
            Eigen::MatrixXd T = Eigen::MatrixXd::Identity(n, n);
            for (int k = 1; k <= n; ++k) {
                T = (Mz * T) * (-1.0 / k);
                if (T.cwiseAbs().maxCoeff() == 0.0) break;
                Pi += T;
            }
            Eigen::VectorXd vz = Eigen::VectorXd::Zero(n);
            for (int i = 0; i < d; ++i) vz += zz[i] * cols[i];
            double rad = radial_factor(w, zz, y);
            return -Pi.row(S.phi_var[J]).dot(vz) * rad / std::pow(norm2(zz), d);
        };

        for (const auto& [gk, cols] : cdir) {
            const auto& [gamma, Kk] = gk;
            for (int J = 0; J < r0; ++J) {
                auto f = [&](const Vec& zz) { return Ival(zz, cols, J); };
                double v = 0;
                const int o = gamma.order();
                if (o == 0) {
                    v = f(z);
                } else if (o == 1) {
                    for (int i = 0; i < d; ++i)
                        if (gamma[i] == 1) v = -fd_partial(f, z, i);
                } else if (o == 2) {
                    int i0 = -1, j0 = -1;
                    for (int i = 0; i < d; ++i) {
                        if (gamma[i] == 2) i0 = j0 = i;
                        if (gamma[i] == 1) (i0 < 0 ? i0 : j0) = i;
                    }
                    v = fd_second(f, z, i0, j0);
                } else {
                    throw std::logic_error("gamma order > 2 not supported");
                }
                M(Kk, J) += v / in_w[Kk];
            }
        }
        // The pairing only tests trace-free fields, so the transported kernel
        // is determined modulo pure traces on trace-free blocks; project onto
        // the trace-free representative (the published convention).
        for (const auto& blk : S.op.in_space().blocks) {
            if (blk.kind != SlotSpace::Block::SymPairs || !blk.tracefree) continue;
            for (int J = 0; J < r0; ++J) {
                double tr = 0;
                for (int a = 0; a < d; ++a) tr += M(blk.offset + SlotSpace::pair_slot(d, a, a), J);
                for (int a = 0; a < d; ++a) M(blk.offset + SlotSpace::pair_slot(d, a, a), J) -= tr / d;
            }
        }
        return M;
    };
    return K;
}

std::function<Eigen::MatrixXd(const Vec&, const Vec&)> b_eta(const AugmentedSystem& sys, const Weight& w) {
    if (w.is_conic())
        throw std::invalid_argument("b_eta requires a Bogovskii weight; conic constructions are "
                                    "nontrapped and have b == 0 on the domain");
    auto T = transport_polynomial(sys);
    const int d = sys.d, r0 = sys.r0, n = sys.size();
    auto sysp = std::make_shared<AugmentedSystem>(sys);

    return [d, r0, n, T, w, sysp](const Vec& x, const Vec& y) {
        const AugmentedSystem& S = *sysp;
        Eigen::MatrixXd B = Eigen::MatrixXd::Zero(r0, r0);
        Vec z(d);
        for (int i = 0; i < d; ++i) z[i] = x[i] - y[i];
        for (int A = 0; A < n; ++A) {
            for (const auto& [key, c] : S.vars[A].jet) {
                const auto& [alpha, Jp] = key;
                double cc = c.to_complex().real();
                // (-1)^{|alpha|} d_x^alpha [ Z^A_J(y,x) eta(x) ] via Leibniz;
                // Z is a polynomial in z = x - y.
                double sgn = (alpha.order() % 2 == 0) ? 1.0 : -1.0;
                for (int J = 0; J < r0; ++J) {
                    const PolyD& Z = T[S.phi_var[J]][A];
                    if (Z.is_zero()) continue;
                    double acc = 0;
                    // Enumerate beta <= alpha.
                    std::vector<MultiIndex> betas;
                    for (const auto& b : monomials_up_to(d, alpha.order()))
                        if (b.leq(alpha)) betas.push_back(b);
                    for (const auto& beta : betas) {
                        double binom = 1;
                        for (int i = 0; i < d; ++i) {
                            for (int t = 0; t < beta[i]; ++t)
                                binom *= static_cast<double>(alpha[i] - t) / (t + 1);
                        }
                        PolyD Zb = Z;
                        for (int i = 0; i < d; ++i)
                            for (int t = 0; t < beta[i]; ++t) Zb = Zb.derivative(i);
                        if (Zb.is_zero()) continue;
                        acc += binom * Zb.eval(z) * w.deriv(alpha - beta, x);
                    }
                    B(J, Jp) += sgn * cc * acc;
                }
            }
        }
        return B;
    };
}

} // namespace curvegreen
