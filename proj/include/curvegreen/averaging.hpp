#pragma once

#include <functional>

#include "curvegreen/ode_kernel.hpp"

namespace curvegreen {

/// Smooth averaging data. Bogovskii: bump eta_1 = N (1 - |y-c|^2/R^2)^p on
/// B_R(c), unit mass on R^d. Conic: angular density on S^{d-1}, either a cap
/// bump N (1 - u)^p with u = (1 - w.axis)/(1 - cos aperture) or the uniform
/// density 1/|S^{d-1}|; unit mass on the sphere.
struct Weight {
    enum Kind { Bogovskii, ConicCap, ConicUniform } kind = Bogovskii;
    int d = 0;
    Vec center;            // Bogovskii
    double radius = 1.0;   // Bogovskii
    Vec axis;               // conic cap
    double aperture = 0.5;  // conic cap (radians)
    int p = 8;              // profile power
    double norm = 1.0;      // normalization (computed)

    static Weight bogovskii(int d, Vec center, double radius, int p = 8);
    static Weight conic_cap(int d, Vec axis, double aperture, int p = 8);
    static Weight conic_uniform(int d);

    bool is_conic() const { return kind != Bogovskii; }

    // Bogovskii bump and its exact derivatives.
    double eval(const Vec& y) const;
    Vec grad(const Vec& y) const;
    Eigen::MatrixXd hess(const Vec& y) const;
    double deriv(const MultiIndex& alpha, const Vec& y) const; // |alpha| <= 2

    // Conic angular density (omega need not be normalized).
    double angular(const Vec& omega) const;
    bool in_cap(const Vec& omega) const;

    /// Mass computed by adaptive quadrature with the current norm factor
    /// (== 1 to the quadrature tolerance after construction).
    double mass(double tol = 1e-13) const;
};

/// Surface measure of S^{d-1}.
double sphere_area(int d);

/// Pointwise-evaluable averaged Green's kernel; values are full-index tensor
/// components per slot (s0 x r0). Near the diagonal (|x - y| < 1e-6) the
/// evaluator reports via near_diagonal() and eval returns zeros.
struct AveragedKernel {
    std::string backing; // "closed_form" or "ode_average"
    std::string op_name;
    int d = 0, s0 = 0, r0 = 0;
    Weight weight;
    std::vector<int> row_order;  // m_K per row: |K| ~ |x-y|^(-d + m_K)
    std::vector<int> in_weights; // slot multiplicities for K-contractions
    std::function<Eigen::MatrixXd(const Vec& x, const Vec& y)> eval;

    bool near_diagonal(const Vec& x, const Vec& y) const {
        double s = 0;
        for (int i = 0; i < d; ++i) s += (x[i] - y[i]) * (x[i] - y[i]);
        return std::sqrt(s) < 1e-6;
    }
};

/// Closed-form flat-space kernels transcribed from the published formulas;
/// outer derivative operators applied by Richardson-extrapolated central
/// differences.
AveragedKernel closed_form_kernel(const std::string& name, const Weight& w, int d);

/// Kernel synthesized from the augmented system by smooth averaging over
/// segments (change of variables z1 = z/s, radial substitution r = |z|/s);
/// constant-coefficient systems only.
AveragedKernel ode_kernel_average(const AugmentedSystem& sys, const Weight& w);

/// Smooth endpoint density b_eta(x, y) (r0 x r0; entry (J, J') multiplies
/// phi_{J'} in the pairing <b_eta(.,y), phi>_J). Bogovskii weights only;
/// throws std::invalid_argument for conic weights.
std::function<Eigen::MatrixXd(const Vec& x, const Vec& y)> b_eta(const AugmentedSystem& sys, const Weight& w);

/// Richardson-extrapolated central difference of f at z along axis; base
/// step 1e-4 (1 + |z|), clamped to 0.05 |z| near the origin.
double fd_partial(const std::function<double(const Vec&)>& f, Vec z, int axis);

} // namespace curvegreen
