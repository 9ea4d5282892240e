#include "curvegreen/solve_verify.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <sstream>

namespace curvegreen {

std::string VerificationReport::json() const {
    std::ostringstream os;
    os.precision(17);
    os << "{\"identity\":\"" << identity << "\",\"pass\":" << (pass ? "true" : "false");
    os << ",\"residuals\":{";
    bool first = true;
    for (const auto& [k, v] : residuals) {
        os << (first ? "" : ",") << "\"" << k << "\":" << v;
        first = false;
    }
    os << "},\"tolerances\":{";
    first = true;
    for (const auto& [k, v] : tolerances) {
        os << (first ? "" : ",") << "\"" << k << "\":" << v;
        first = false;
    }
    os << "}";
    if (!provenance.empty()) os << ",\"provenance\":\"" << provenance << "\"";
    os << "}";
    return os.str();
}

std::pair<Vec, Vec> support_box(const TestFunction& f, double k) {
    const int d = f.d;
    Vec lo(d, 1e300), hi(d, -1e300);
    for (const auto& c : f.comp)
        for (const auto& t : c.terms)
            for (int i = 0; i < d; ++i) {
                lo[i] = std::min(lo[i], t.mu[i] - k * t.sigma);
                hi[i] = std::max(hi[i], t.mu[i] + k * t.sigma);
            }
    return {lo, hi};
}

namespace {

double dist(const Vec& a, const Vec& b) {
    double s = 0;
    for (size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}

// Smooth cutoff: 1 for t <= 1/2, 0 for t >= 1.
double blend(double t) {
    auto e = [](double u) { return u > 0 ? std::exp(-1.0 / u) : 0.0; };
    double u = 2.0 - 2.0 * t;
    double a = e(u), b = e(1.0 - u);
    return a / (a + b);
}

// Tensor Gauss-Legendre over a box (d = 2 or 3).
void tensor_gl(const Vec& lo, const Vec& hi, int n,
               const std::function<void(const Vec&, double)>& visit) {
    const int d = static_cast<int>(lo.size());
    const GLRule& r = gauss_legendre(n);
    if (d == 2) {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                Vec y = {0.5 * (lo[0] + hi[0]) + 0.5 * (hi[0] - lo[0]) * r.x[i],
                         0.5 * (lo[1] + hi[1]) + 0.5 * (hi[1] - lo[1]) * r.x[j]};
                visit(y, 0.25 * (hi[0] - lo[0]) * (hi[1] - lo[1]) * r.w[i] * r.w[j]);
            }
        return;
    }
    if (d == 3) {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k) {
                    Vec y = {0.5 * (lo[0] + hi[0]) + 0.5 * (hi[0] - lo[0]) * r.x[i],
                             0.5 * (lo[1] + hi[1]) + 0.5 * (hi[1] - lo[1]) * r.x[j],
                             0.5 * (lo[2] + hi[2]) + 0.5 * (hi[2] - lo[2]) * r.x[k]};
                    visit(y, 0.125 * (hi[0] - lo[0]) * (hi[1] - lo[1]) * (hi[2] - lo[2]) * r.w[i] * r.w[j] *
                                 r.w[k]);
                }
        return;
    }
    throw std::invalid_argument("tensor_gl supports d = 2, 3");
}

// Polar patch around x0 of radius rho (d = 2: trapezoid in angle; d = 3:
// GL in cos(theta), trapezoid in phi). Visits y = x0 - r omega with weight
// including r^{d-1} and the surface element.
void polar_patch(const Vec& x0, double rho, int nrad, int nang,
                 const std::function<void(const Vec&, double)>& visit) {
    const int d = static_cast<int>(x0.size());
    const GLRule& rr = gauss_legendre(nrad);
    if (d == 2) {
        const double dphi = 2 * M_PI / nang;
        for (int a = 0; a < nang; ++a) {
            double phi = dphi * a;
            Vec om = {std::cos(phi), std::sin(phi)};
            for (int i = 0; i < nrad; ++i) {
                double r = 0.5 * rho * (1 + rr.x[i]);
                double w = 0.5 * rho * rr.w[i] * r * dphi;
                visit({x0[0] - r * om[0], x0[1] - r * om[1]}, w);
            }
        }
        return;
    }
    if (d == 3) {
        const GLRule& rc = gauss_legendre(nang);
        const int nphi = 2 * nang;
        const double dphi = 2 * M_PI / nphi;
        for (int c = 0; c < nang; ++c) {
            double ct = rc.x[c]; // cos(theta) in [-1, 1], weight rc.w
            double st = std::sqrt(std::max(0.0, 1 - ct * ct));
            for (int p = 0; p < nphi; ++p) {
                double phi = dphi * p;
                Vec om = {st * std::cos(phi), st * std::sin(phi), ct};
                for (int i = 0; i < nrad; ++i) {
                    double r = 0.5 * rho * (1 + rr.x[i]);
                    double w = 0.5 * rho * rr.w[i] * r * r * rc.w[c] * dphi;
                    visit({x0[0] - r * om[0], x0[1] - r * om[1], x0[2] - r * om[2]}, w);
                }
            }
        }
        return;
    }
    throw std::invalid_argument("polar_patch supports d = 2, 3");
}

} // namespace

Vec apply_operator_S(const AveragedKernel& K, const TestFunction& f, const Vec& x, const QuadratureSpec& q) {
    const int d = K.d;
    auto [lo, hi] = support_box(f, q.support_sigmas);
    bool near = true;
    for (int i = 0; i < d; ++i)
        if (x[i] < lo[i] - q.polar_radius || x[i] > hi[i] + q.polar_radius) near = false;

    Eigen::VectorXd acc = Eigen::VectorXd::Zero(K.s0);
    auto add_sample = [&](const Vec& y, double w, double cut) {
        if (cut == 0.0) return;
        if (K.near_diagonal(x, y)) return;
        Eigen::MatrixXd Kxy = K.eval(x, y);
        Vec fv = f.eval(y);
        for (int s = 0; s < K.s0; ++s) {
            double row = 0;
            for (int j = 0; j < K.r0; ++j) row += Kxy(s, j) * fv[j];
            acc(s) += w * cut * row;
        }
    };
    if (!near) {
        tensor_gl(lo, hi, q.outer_n, [&](const Vec& y, double w) { add_sample(y, w, 1.0); });
    } else {
        tensor_gl(lo, hi, q.outer_n, [&](const Vec& y, double w) {
            add_sample(y, w, 1.0 - blend(dist(x, y) / q.polar_radius));
        });
        polar_patch(x, q.polar_radius, q.polar_radial, q.polar_angular, [&](const Vec& y, double w) {
            add_sample(y, w, blend(dist(x, y) / q.polar_radius));
        });
    }
    Vec u(K.s0);
    for (int s = 0; s < K.s0; ++s) u[s] = acc(s);
    return u;
}

double greens_identity_residual(const AveragedKernel& K, const DiffOperator& P,
                                const std::function<Eigen::MatrixXd(const Vec&, const Vec&)>* beta,
                                const TestFunction& phi, const Vec& y, const QuadratureSpec& q) {
    const int d = K.d, r0 = K.r0;
    TestFunction pstar_phi = P.adjoint().apply(phi);
    auto [lo, hi] = support_box(phi, q.support_sigmas);
    const auto& w_K = K.in_weights;

    Eigen::VectorXd acc = Eigen::VectorXd::Zero(r0);
    auto add_sample = [&](const Vec& xx, double w, double cut) {
        if (cut == 0.0) return;
        if (K.near_diagonal(xx, y)) return;
        Eigen::MatrixXd Kxy = K.eval(xx, y);
        Vec pv = pstar_phi.eval(xx);
        for (int J = 0; J < r0; ++J) {
            double s = 0;
            for (int Kk = 0; Kk < K.s0; ++Kk) s += w_K[Kk] * Kxy(Kk, J) * pv[Kk];
            acc(J) += w * cut * s;
        }
    };
    bool near = true;
    for (int i = 0; i < d; ++i)
        if (y[i] < lo[i] - q.polar_radius || y[i] > hi[i] + q.polar_radius) near = false;
    if (!near) {
        tensor_gl(lo, hi, q.outer_n, [&](const Vec& xx, double w) { add_sample(xx, w, 1.0); });
    } else {
        tensor_gl(lo, hi, q.outer_n, [&](const Vec& xx, double w) {
            add_sample(xx, w, 1.0 - blend(dist(xx, y) / q.polar_radius));
        });
        polar_patch(y, q.polar_radius, q.polar_radial, q.polar_angular, [&](const Vec& xx, double w) {
            add_sample(xx, w, blend(dist(xx, y) / q.polar_radius));
        });
    }

    if (beta) {
        // b is supported in the weight ball; integrate over its box.
        const Weight& w = K.weight;
        Vec blo(d), bhi(d);
        for (int i = 0; i < d; ++i) {
            blo[i] = w.center[i] - w.radius;
            bhi[i] = w.center[i] + w.radius;
        }
        tensor_gl(blo, bhi, q.outer_n, [&](const Vec& xx, double ww) {
            Eigen::MatrixXd B = (*beta)(xx, y);
            Vec pv = phi.eval(xx);
            for (int J = 0; J < r0; ++J) {
                double s = 0;
                for (int Jp = 0; Jp < r0; ++Jp) s += B(J, Jp) * pv[Jp];
                acc(J) += ww * s;
            }
        });
    }

    double worst = 0;
    Vec val = phi.eval(y);
    for (int J = 0; J < r0; ++J) worst = std::max(worst, std::abs(acc(J) - val[J]));
    return worst;
}

VerificationReport verify_support(const std::function<double(const Vec&)>& usampler,
                                  const std::function<bool(const Vec&)>& region,
                                  const std::vector<Vec>& samples, double tol) {
    VerificationReport R;
    R.identity = "support";
    double worst = 0;
    int outside = 0;
    for (const auto& x : samples) {
        if (region(x)) continue;
        ++outside;
        worst = std::max(worst, std::abs(usampler(x)));
    }
    R.note("max_outside", worst, tol);
    R.residuals["outside_samples"] = outside;
    R.tolerances["outside_samples"] = 1e300;
    return R;
}

double pair_poly_tf(const PolyField& Z, const TestFunction& f, const std::vector<double>& w) {
    double s = 0;
    for (size_t J = 0; J < Z.comp.size(); ++J) {
        double wj = w.empty() ? 1.0 : w[J];
        for (const auto& t : f.comp[J].terms) {
            GaussTerm prod = t;
            PolyD zp(f.d);
            for (const auto& [a, c] : Z.comp[J].terms()) zp.add(a, c.to_complex().real());
            prod.poly = t.poly * zp;
            s += wj * gauss_integral(prod);
        }
    }
    return s;
}

TestFunction project_out_cokernel(const TestFunction& f, const CokernelBasis& basis, const Vec& bump_center,
                                  double bump_sigma) {
    const int n = basis.dimension();
    const int d = f.d;
    // Correction bumps u_A = Z^A(x) G(x) with a shared Gaussian G.
    std::vector<TestFunction> bumps;
    for (const auto& Z : basis.Z) {
        TestFunction u(d, f.components());
        for (int J = 0; J < f.components(); ++J) {
            if (Z.comp[J].is_zero()) continue;
            GaussTerm t;
            t.mu = bump_center;
            t.sigma = bump_sigma;
            t.poly = PolyD(d);
            for (const auto& [a, c] : Z.comp[J].terms()) t.poly.add(a, c.to_complex().real());
            u.comp[J].terms.push_back(t);
        }
        bumps.push_back(std::move(u));
    }
    Eigen::MatrixXd G(n, n);
    Eigen::VectorXd m(n);
    for (int A = 0; A < n; ++A) {
        m(A) = pair_poly_tf(basis.Z[A], f);
        for (int B = 0; B < n; ++B) G(A, B) = pair_poly_tf(basis.Z[A], bumps[B]);
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(G);
    if (!lu.isInvertible()) throw std::runtime_error("singular Gram matrix in project_out_cokernel");
    Eigen::VectorXd c = lu.solve(m);
    TestFunction g = f;
    for (int A = 0; A < n; ++A) g = g + bumps[A].scaled(-c(A));
    return g;
}

Vec fd_apply_operator(const DiffOperator& P, const std::function<Vec(const Vec&)>& u, const Vec& x,
                      double h) {
    const int d = P.dim();
    std::map<std::vector<int>, Vec> cache;
    auto sample = [&](const std::vector<int>& off, double step) -> const Vec& {
        auto key = off;
        key.push_back(static_cast<int>(std::lround(step * 1e9)));
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
        Vec xx = x;
        for (int i = 0; i < d; ++i) xx[i] += off[i] * step;
        return cache.emplace(key, u(xx)).first->second;
    };
    auto deriv = [&](const MultiIndex& a, int K, double step) -> double {
        int o = a.order();
        std::vector<int> z(d, 0);
        if (o == 0) return sample(z, step)[K];
        if (o == 1) {
            int i = 0;
            while (a[i] == 0) ++i;
            std::vector<int> p = z, m = z;
            p[i] = 1;
            m[i] = -1;
            return (sample(p, step)[K] - sample(m, step)[K]) / (2 * step);
        }
        if (o == 2) {
            int i0 = -1, j0 = -1;
            for (int i = 0; i < d; ++i) {
                if (a[i] == 2) i0 = j0 = i;
                if (a[i] == 1) (i0 < 0 ? i0 : j0) = i;
            }
            if (i0 == j0) {
                std::vector<int> p = z, m = z;
                p[i0] = 1;
                m[i0] = -1;
                return (sample(p, step)[K] - 2 * sample(z, step)[K] + sample(m, step)[K]) / (step * step);
            }
            std::vector<int> pp = z, pm = z, mp = z, mm = z;
            pp[i0] = pp[j0] = 1;
            pm[i0] = 1;
            pm[j0] = -1;
            mp[i0] = -1;
            mp[j0] = 1;
            mm[i0] = mm[j0] = -1;
            return (sample(pp, step)[K] - sample(pm, step)[K] - sample(mp, step)[K] + sample(mm, step)[K]) /
                   (4 * step * step);
        }
        throw std::invalid_argument("fd_apply_operator supports orders <= 2");
    };
    Vec out(P.out_components(), 0.0);
    for (const auto& [key, v] : P.coeffs()) {
        const auto& [a, j, k] = key;
        double d1 = deriv(a, k, h), d2 = deriv(a, k, h / 2);
        double val = a.order() == 0 ? d1 : (4 * d2 - d1) / 3;
        out[j] += v.to_complex().real() * val;
    }
    return out;
}

VerificationReport residual_matches_beta(const AveragedKernel& K, const DiffOperator& P,
                                         const std::function<Eigen::MatrixXd(const Vec&, const Vec&)>& beta,
                                         const TestFunction& f, const std::vector<Vec>& grid,
                                         const QuadratureSpec& q, double tol, double fd_step) {
    VerificationReport R;
    R.identity = "residual_matches_beta";
    R.provenance = "lhs: FD of P applied to quadrature solution; rhs: -int b(x,y) f(y) dy";
    auto [lo, hi] = support_box(f, q.support_sigmas);
    auto u = [&](const Vec& x) { return apply_operator_S(K, f, x, q); };
    double worst = 0;
    for (const auto& x : grid) {
        Vec Pu = fd_apply_operator(P, u, x, fd_step);
        Vec fv = f.eval(x);
        // rhs_J = f_J(x) - int b(x, y)_{J,J'} f_{J'}(y) dy
        Eigen::VectorXd bint = Eigen::VectorXd::Zero(P.out_components());
        tensor_gl(lo, hi, q.outer_n, [&](const Vec& y, double w) {
            Eigen::MatrixXd B = beta(x, y);
            Vec fy = f.eval(y);
            for (int J = 0; J < P.out_components(); ++J) {
                double s = 0;
                for (int Jp = 0; Jp < P.out_components(); ++Jp) s += B(Jp, J) * fy[Jp];
                bint(J) += w * s;
            }
        });
        for (int J = 0; J < P.out_components(); ++J)
            worst = std::max(worst, std::abs(Pu[J] - (fv[J] - bint(J))));
    }
    R.note("max_discrepancy", worst, tol);
    return R;
}

double decay_slope(const AveragedKernel& K, const Vec& y, const Vec& theta, double tmin, double tmax,
                   int npts, int row) {
    std::vector<double> lx, ly;
    for (int i = 0; i < npts; ++i) {
        double t = tmin * std::pow(tmax / tmin, static_cast<double>(i) / (npts - 1));
        Vec x(y.size());
        for (size_t j = 0; j < y.size(); ++j) x[j] = y[j] + t * theta[j];
        Eigen::MatrixXd M = K.eval(x, y);
        double v = (row >= 0) ? M.row(row).cwiseAbs().maxCoeff() : M.cwiseAbs().maxCoeff();
        if (v <= 0) continue;
        lx.push_back(std::log(t));
        ly.push_back(std::log(v));
    }
    const int n = static_cast<int>(lx.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < n; ++i) {
        sx += lx[i];
        sy += ly[i];
        sxx += lx[i] * lx[i];
        sxy += lx[i] * ly[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

} // namespace curvegreen
