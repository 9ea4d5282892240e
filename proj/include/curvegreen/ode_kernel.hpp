#pragma once

#include <Eigen/Dense>

#include "curvegreen/augmented.hpp"
#include "curvegreen/quadrature.hpp"

namespace curvegreen {

/// Curve family; rays are realized as segments to y + L omega with L chosen
/// so the curve exits the working domain.
struct Curve {
    Vec y, y1;
    int dim() const { return static_cast<int>(y.size()); }
    Vec at(double s) const {
        Vec x(y.size());
        for (size_t i = 0; i < y.size(); ++i) x[i] = y[i] + s * (y1[i] - y[i]);
        return x;
    }
    Vec velocity() const {
        Vec v(y.size());
        for (size_t i = 0; i < y.size(); ++i) v[i] = y1[i] - y[i];
        return v;
    }
    static Curve segment(Vec y, Vec y1) { return {std::move(y), std::move(y1)}; }
    static Curve ray(const Vec& y, const Vec& omega, double L) {
        Vec y1(y.size());
        for (size_t i = 0; i < y.size(); ++i) y1[i] = y[i] + L * omega[i];
        return {y, y1};
    }
};

/// Transport data along one curve for an augmented system: the fundamental
/// matrix Pi(s, t) of d/ds - xdot^i B_i, the distributional kernel data
/// S_J^(gamma,K)(t), and the endpoint data (Z^A, jets of phi at y1).
class RoughKernel {
public:
    RoughKernel(const AugmentedSystem& sys, Curve curve);

    const AugmentedSystem& system() const { return *sys_; }
    const Curve& curve() const { return curve_; }

    /// Fundamental matrix Pi(s, t), 0 <= s <= t <= 1. Exact polynomial
    /// matrix exponential for constant B (nilpotent case terminates);
    /// scaling-and-squaring or RK4 otherwise.
    Eigen::MatrixXd fundamental_matrix(double s, double t) const;

    /// S_J^(gamma,K)(t) = -Pi_J^A(0,t) xdot^i (C_i)_A^(gamma,K).
    double S(int J, const MultiIndex& gamma, int K, double t) const;
    /// The (gamma, K) pairs with nonzero S.
    const std::vector<std::pair<MultiIndex, int>>& gamma_slots() const { return gk_; }

    /// Z^A(y, y1) = Pi_J^A(0, 1).
    Eigen::MatrixXd endpoint_transport() const { return fundamental_matrix(0.0, 1.0); }

    /// <K_{y1}, psi> for an s0-component test field (slot values; the slot
    /// contraction is the plain sum matching the ODE derivation).
    Vec pair_kernel(const TestFunction& psi, double tol = 1e-10) const;

    /// <b_{y1}, phi>_J = sum_A Pi_J^A(0,1) Phi_A(phi)(y1), exact jets.
    Vec pair_b(const TestFunction& phi) const;
    Vec pair_b(const PolyField& phi) const;

    /// <K_{y1}, psi> for a polynomial field (exact polynomial evaluation
    /// along the curve; quadrature only in the curve parameter).
    Vec pair_kernel(const PolyField& psi, double tol = 1e-10) const;

    /// Duhamel recovery of phi(y) from P* phi along the curve and the jet of
    /// phi at y1; equals pair_kernel(P* phi) + pair_b(phi).
    Vec recover(const TestFunction& phi, double tol = 1e-10) const;
    Vec recover(const PolyField& phi, double tol = 1e-10) const;

private:
    const AugmentedSystem* sys_;
    Curve curve_;
    bool const_B_ = true;
    bool nilpotent_ = true;
    Eigen::MatrixXd M_;                  // xdot^i B_i for constant systems
    std::vector<Eigen::MatrixXd> Mpow_;  // powers up to nilpotency
    std::vector<std::pair<MultiIndex, int>> gk_;
    std::map<std::pair<MultiIndex, int>, Eigen::VectorXd> cvec_; // per (gamma,K): A-vector
};

/// Generalized sine/cosine: s_kappa'' = -kappa s_kappa, s(0)=0, c = s'.
double gen_sin(double kappa, double t);
double gen_cos(double kappa, double t);

/// Radial double-divergence transport on a constant-curvature background:
/// weight s_kappa(s) on the curve integral and endpoint coefficients
/// (c_kappa(rho), -s_kappa(rho)) on (phi, d_r phi).
struct RadialTransport {
    double kappa = 0, rho = 0;
    double c = 1, s = 0;          // c_kappa(rho), s_kappa(rho)
    double weight(double t) const { return gen_sin(kappa, t); }
};

RadialTransport curvature_oracle_radial(double kappa, double rho);

/// RK4 fundamental matrix for a general time-dependent linear system
/// Y' = A(t) Y on [t0, t1] with fixed step count; used as the oracle.
Eigen::MatrixXd fundamental_matrix_rk4(const std::function<Eigen::MatrixXd(double)>& A, double t0, double t1,
                                       int steps);

/// Matrix exponential by scaling and squaring (Taylor core).
Eigen::MatrixXd expm(const Eigen::MatrixXd& M);

/// Pi(0,1) of a constant nilpotent system as a polynomial matrix in
/// z = y1 - y (r0 x #A block is rows 0..r0).
std::vector<std::vector<PolyD>> transport_polynomial(const AugmentedSystem& sys);

} // namespace curvegreen
