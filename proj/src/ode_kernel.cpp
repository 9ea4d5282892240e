#include "curvegreen/ode_kernel.hpp"

#include <cmath>

namespace curvegreen {

namespace {

bool strictly_graded(const AugmentedSystem& sys) {
    for (int i = 0; i < sys.d; ++i)
        for (const auto& [key, v] : sys.B[i]) {
            if (v.is_zero()) continue;
            auto [A, Ap] = key;
            if (sys.vars[Ap].degree >= sys.vars[A].degree) return false;
        }
    return true;
}

} // namespace

RoughKernel::RoughKernel(const AugmentedSystem& sys, Curve curve) : sys_(&sys), curve_(std::move(curve)) {
    const int n = sys.size(), d = sys.d;
    const Vec xdot = curve_.velocity();
    const_B_ = sys.constant_coefficients();
    nilpotent_ = const_B_ && strictly_graded(sys);
    if (const_B_) {
        M_ = Eigen::MatrixXd::Zero(n, n);
        for (int i = 0; i < d; ++i)
            for (const auto& [key, v] : sys.B[i]) {
                auto [A, Ap] = key;
                M_(A, Ap) += xdot[i] * v.to_complex().real();
            }
        if (nilpotent_) {
            Mpow_.push_back(Eigen::MatrixXd::Identity(n, n));
            Eigen::MatrixXd P = M_;
            while (P.cwiseAbs().maxCoeff() > 0 && static_cast<int>(Mpow_.size()) <= n) {
                Mpow_.push_back(P);
                P = P * M_;
            }
        }
    }
    // Per (gamma, K): vector over A of xdot^i (C_i)_A^(gamma,K).
    for (int i = 0; i < d; ++i)
        for (const auto& [key, v] : sys.C[i]) {
            const auto& [A, gamma, K] = key;
            auto& vec = cvec_[{gamma, K}];
            if (vec.size() == 0) vec = Eigen::VectorXd::Zero(n);
            vec(A) += xdot[i] * v.to_complex().real();
        }
    for (const auto& [gk, vec] : cvec_) gk_.push_back(gk);
}

Eigen::MatrixXd RoughKernel::fundamental_matrix(double s, double t) const {
    const int n = sys_->size();
    if (const_B_) {
        const double tau = s - t; // Pi(s,t) = exp((s-t) M)
        if (nilpotent_) {
            Eigen::MatrixXd R = Eigen::MatrixXd::Zero(n, n);
            double f = 1;
            for (size_t k = 0; k < Mpow_.size(); ++k) {
                R += f * Mpow_[k];
                f *= tau / static_cast<double>(k + 1);
            }
            return R;
        }
        return expm(tau * M_);
    }
    // Callable coefficients: RK4 on dPi/ds = xdot B(x(s)) Pi from t down to s.
    const Vec xdot = curve_.velocity();
    auto A = [&](double u) {
        Eigen::MatrixXd B = Eigen::MatrixXd::Zero(n, n);
        Vec x = curve_.at(u);
        for (int i = 0; i < sys_->d; ++i)
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b) {
                    double v = sys_->B_entry(i, a, b, x);
                    if (v != 0) B(a, b) += xdot[i] * v;
                }
        return B;
    };
    int steps = std::max(64, static_cast<int>(std::ceil(1024 * std::abs(t - s))));
    return fundamental_matrix_rk4(A, t, s, steps); // integrate from t to s
}

double RoughKernel::S(int J, const MultiIndex& gamma, int K, double t) const {
    auto it = cvec_.find({gamma, K});
    if (it == cvec_.end()) return 0.0;
    Eigen::MatrixXd Pi = fundamental_matrix(0.0, t);
    return -Pi.row(sys_->phi_var[J]).dot(it->second);
}

Vec RoughKernel::pair_kernel(const TestFunction& psi, double tol) const {
    const int r0 = sys_->r0;
    Vec out(r0, 0.0);
    // Precompute d^gamma psi_K along with per-(gamma,K) weights.
    std::vector<TFComponent> dpsi;
    dpsi.reserve(gk_.size());
    for (const auto& [gamma, K] : gk_) dpsi.push_back(psi.comp[K].derivative(gamma));
    for (int J = 0; J < r0; ++J) {
        auto f = [&](double t) {
            Eigen::MatrixXd Pi = fundamental_matrix(0.0, t);
            double s = 0;
            for (size_t g = 0; g < gk_.size(); ++g) {
                const auto& vec = cvec_.at(gk_[g]);
                s += -Pi.row(sys_->phi_var[J]).dot(vec) * dpsi[g].eval(curve_.at(t));
            }
            return s;
        };
        out[J] = integrate_adaptive(f, 0.0, 1.0, tol);
    }
    return out;
}

Vec RoughKernel::pair_kernel(const PolyField& psi, double tol) const {
    const int r0 = sys_->r0;
    Vec out(r0, 0.0);
    std::vector<PolyQ> dpsi;
    dpsi.reserve(gk_.size());
    for (const auto& [gamma, K] : gk_) dpsi.push_back(psi.comp[K].derivative(gamma));
    for (int J = 0; J < r0; ++J) {
        auto f = [&](double t) {
            Eigen::MatrixXd Pi = fundamental_matrix(0.0, t);
            double s = 0;
            for (size_t g = 0; g < gk_.size(); ++g) {
                const auto& vec = cvec_.at(gk_[g]);
                s += -Pi.row(sys_->phi_var[J]).dot(vec) * dpsi[g].eval(curve_.at(t)).real();
            }
            return s;
        };
        out[J] = integrate_adaptive(f, 0.0, 1.0, tol);
    }
    return out;
}

Vec RoughKernel::pair_b(const TestFunction& phi) const {
    const int r0 = sys_->r0, n = sys_->size();
    Eigen::MatrixXd Pi = endpoint_transport();
    const Vec& y1 = curve_.y1;
    Eigen::VectorXd PhiA(n);
    for (int A = 0; A < n; ++A) {
        double v = 0;
        for (const auto& [key, c] : sys_->vars[A].jet) {
            const auto& [alpha, J] = key;
            v += c.to_complex().real() * phi.comp[J].derivative(alpha).eval(y1);
        }
        PhiA(A) = v;
    }
    Vec out(r0);
    for (int J = 0; J < r0; ++J) out[J] = Pi.row(sys_->phi_var[J]).dot(PhiA);
    return out;
}

Vec RoughKernel::pair_b(const PolyField& phi) const {
    const int r0 = sys_->r0, n = sys_->size();
    Eigen::MatrixXd Pi = endpoint_transport();
    Eigen::VectorXd PhiA(n);
    for (int A = 0; A < n; ++A)
        PhiA(A) = sys_->jet_apply(A, phi).eval(curve_.y1).real();
    Vec out(r0);
    for (int J = 0; J < r0; ++J) out[J] = Pi.row(sys_->phi_var[J]).dot(PhiA);
    return out;
}

Vec RoughKernel::recover(const TestFunction& phi, double tol) const {
    TestFunction pstar_phi = sys_->op.adjoint().apply(phi);
    Vec a = pair_kernel(pstar_phi, tol);
    Vec b = pair_b(phi);
    for (size_t i = 0; i < a.size(); ++i) a[i] += b[i];
    return a;
}

Vec RoughKernel::recover(const PolyField& phi, double tol) const {
    PolyField pstar_phi = sys_->op.adjoint().apply(phi);
    Vec a = pair_kernel(pstar_phi, tol);
    Vec b = pair_b(phi);
    for (size_t i = 0; i < a.size(); ++i) a[i] += b[i];
    return a;
}

double gen_sin(double kappa, double t) {
    if (kappa == 0) return t;
    if (kappa > 0) {
        double r = std::sqrt(kappa);
        return std::sin(r * t) / r;
    }
    double r = std::sqrt(-kappa);
    return std::sinh(r * t) / r;
}

double gen_cos(double kappa, double t) {
    if (kappa == 0) return 1.0;
    if (kappa > 0) return std::cos(std::sqrt(kappa) * t);
    return std::cosh(std::sqrt(-kappa) * t);
}

RadialTransport curvature_oracle_radial(double kappa, double rho) {
    RadialTransport R;
    R.kappa = kappa;
    R.rho = rho;
    R.c = gen_cos(kappa, rho);
    R.s = gen_sin(kappa, rho);
    return R;
}

Eigen::MatrixXd fundamental_matrix_rk4(const std::function<Eigen::MatrixXd(double)>& A, double t0, double t1,
                                       int steps) {
    const int n = A(t0).rows();
    Eigen::MatrixXd Y = Eigen::MatrixXd::Identity(n, n);
    const double h = (t1 - t0) / steps;
    double t = t0;
    for (int k = 0; k < steps; ++k) {
        Eigen::MatrixXd k1 = A(t) * Y;
        Eigen::MatrixXd k2 = A(t + h / 2) * (Y + 0.5 * h * k1);
        Eigen::MatrixXd k3 = A(t + h / 2) * (Y + 0.5 * h * k2);
        Eigen::MatrixXd k4 = A(t + h) * (Y + h * k3);
        Y += (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4);
        t += h;
    }
    return Y;
}

Eigen::MatrixXd expm(const Eigen::MatrixXd& M) {
    const int n = M.rows();
    double nrm = M.cwiseAbs().rowwise().sum().maxCoeff();
    int squarings = 0;
    Eigen::MatrixXd A = M;
    while (nrm > 0.5) {
        A *= 0.5;
        nrm *= 0.5;
        ++squarings;
    }
    Eigen::MatrixXd R = Eigen::MatrixXd::Identity(n, n), T = Eigen::MatrixXd::Identity(n, n);
    for (int k = 1; k <= 24; ++k) {
        T = (A * T) / k;
        R += T;
        if (T.cwiseAbs().maxCoeff() < 1e-18) break;
    }
    for (int i = 0; i < squarings; ++i) R = R * R;
    return R;
}

std::vector<std::vector<PolyD>> transport_polynomial(const AugmentedSystem& sys) {
    if (!sys.constant_coefficients() || !strictly_graded(sys))
        throw std::logic_error("transport_polynomial needs a constant strictly graded system");
    const int n = sys.size(), d = sys.d;
    using Mat = std::vector<std::vector<PolyD>>;
    auto zero = [&]() { return Mat(n, std::vector<PolyD>(n, PolyD(d))); };
    Mat M = zero();
    for (int i = 0; i < d; ++i)
        for (const auto& [key, v] : sys.B[i]) {
            auto [A, Ap] = key;
            PolyD t(d);
            t.add(MultiIndex::unit(d, i), v.to_complex().real());
            M[A][Ap] = M[A][Ap] + t;
        }
    // exp(-M): terminating series (nilpotent).
    Mat R = zero(), P = zero();
    for (int i = 0; i < n; ++i) {
        R[i][i] = PolyD::constant(d, 1.0);
        P[i][i] = PolyD::constant(d, 1.0);
    }
    for (int k = 1; k <= n; ++k) {
        Mat Q = zero();
        bool nonzero = false;
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
                PolyD s(d);
                for (int c = 0; c < n; ++c)
                    if (!P[a][c].is_zero() && !M[c][b].is_zero()) s = s + P[a][c] * M[c][b];
                Q[a][b] = s * (-1.0 / k);
                if (!Q[a][b].is_zero()) nonzero = true;
            }
        P = Q;
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) R[a][b] = R[a][b] + P[a][b];
        if (!nonzero) break;
    }
    return R;
}

} // namespace curvegreen
