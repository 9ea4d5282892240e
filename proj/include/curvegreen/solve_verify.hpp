#pragma once

#include <map>
#include <string>

#include "curvegreen/averaging.hpp"

namespace curvegreen {

struct QuadratureSpec {
    int outer_n = 48;          // Gauss-Legendre points per axis, outer box
    double polar_radius = 0.2; // blend radius around the kernel diagonal
    int polar_radial = 32;
    int polar_angular = 32;
    double support_sigmas = 9.0; // box = term centers +- this many sigmas
    QuadratureSpec halved() const {
        QuadratureSpec q = *this;
        q.outer_n = std::max(4, outer_n / 2);
        q.polar_radial = std::max(4, polar_radial / 2);
        q.polar_angular = std::max(4, polar_angular / 2);
        return q;
    }
};

struct VerificationReport {
    std::string identity;
    std::map<std::string, double> residuals;
    std::map<std::string, double> tolerances;
    bool pass = true;
    std::string provenance;

    void note(const std::string& key, double value, double tol) {
        residuals[key] = value;
        tolerances[key] = tol;
        if (!(value <= tol)) pass = false;
    }
    std::string json() const;
};

/// Bounding box of the effective support of f (term centers +- k sigma).
std::pair<Vec, Vec> support_box(const TestFunction& f, double k = 9.0);

/// u(x) = int K(x, y) f(y) dy with smooth-blend polar refinement when x lies
/// inside (an enlargement of) the integration box.
Vec apply_operator_S(const AveragedKernel& K, const TestFunction& f, const Vec& x, const QuadratureSpec& q);

/// Weak Green's identity residual at y:
///   max_J | <K(.,y), P* phi>_w + <b(.,y), phi> - phi_J(y) |.
/// Pass beta = nullptr for the conic/nontrapped variant (b == 0 on U).
double greens_identity_residual(const AveragedKernel& K, const DiffOperator& P,
                                const std::function<Eigen::MatrixXd(const Vec&, const Vec&)>* beta,
                                const TestFunction& phi, const Vec& y, const QuadratureSpec& q);

/// Max |u| over points outside the region; pass iff <= tol.
VerificationReport verify_support(const std::function<double(const Vec&)>& usampler,
                                  const std::function<bool(const Vec&)>& region,
                                  const std::vector<Vec>& samples, double tol);

/// Exact pairing of a polynomial field with a Gaussian test function.
double pair_poly_tf(const PolyField& Z, const TestFunction& f, const std::vector<double>& w = {});

/// f - sum_A c_A (Z^A bump) with exact moment cancellation <Z^A, f_perp> = 0;
/// correction bumps are Z^A times a Gaussian at bump_center with bump_sigma.
TestFunction project_out_cokernel(const TestFunction& f, const CokernelBasis& basis, const Vec& bump_center,
                                  double bump_sigma);

/// Compare FD-computed P(S f) - f against -int b(x, y) f(y) dy on a grid.
VerificationReport residual_matches_beta(const AveragedKernel& K, const DiffOperator& P,
                                         const std::function<Eigen::MatrixXd(const Vec&, const Vec&)>& beta,
                                         const TestFunction& f, const std::vector<Vec>& grid,
                                         const QuadratureSpec& q, double tol, double fd_step = 3e-2);

/// Apply the constant-coefficient operator to a numerically evaluable field
/// by Richardson central differences (orders up to 2 per axis pair).
Vec fd_apply_operator(const DiffOperator& P, const std::function<Vec(const Vec&)>& u, const Vec& x,
                      double h);

/// Log-log regression slope of |K(y + t theta, y)| over t in [tmin, tmax].
double decay_slope(const AveragedKernel& K, const Vec& y, const Vec& theta, double tmin, double tmax,
                   int npts, int row = -1);

} // namespace curvegreen
