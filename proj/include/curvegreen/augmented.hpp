#pragma once

#include <functional>
#include <optional>

#include "curvegreen/diffop.hpp"
#include "curvegreen/fc_cert.hpp"

namespace curvegreen {

/// One augmented variable Phi_A = sum c^(alpha,J) d^alpha phi_J, with its
/// grading degree d_A <= 0 (minus the jet order).
struct AugVar {
    std::string name;
    int degree = 0;
    std::map<std::pair<MultiIndex, int>, GR> jet; // (alpha, J) -> coefficient
};

/// Graded augmented first-order system
///   d_i Phi_A = (B_i)_A^A' Phi_A' + (C_i)_A^(gamma,K) d^gamma (P* phi)_K.
/// B entries are exact constants or spatial callables; C entries constant.
struct AugmentedSystem {
    int d = 0;
    int r0 = 0; // phi components
    std::string name;
    DiffOperator op; // underlying P (adjoint() gives P*)
    std::vector<AugVar> vars;
    std::vector<int> phi_var; // variable index of phi_J, J < r0

    using BKey = std::pair<int, int>;              // (A, A')
    using CKey = std::tuple<int, MultiIndex, int>; // (A, gamma, K)
    std::vector<std::map<BKey, GR>> B;             // per direction i
    std::vector<std::map<BKey, std::function<double(const Vec&)>>> B_fn;
    std::vector<std::map<CKey, GR>> C;

    int size() const { return static_cast<int>(vars.size()); }
    int N0() const {
        int m = 0;
        for (const auto& v : vars) m = std::max(m, -v.degree);
        return m + 1;
    }
    bool constant_coefficients() const {
        for (const auto& m : B_fn)
            if (!m.empty()) return false;
        return true;
    }
    /// Per u-side component K: max |gamma| appearing in C (the m'_K bound).
    std::vector<int> gamma_orders() const;

    double B_entry(int i, int A, int Ap, const Vec& x) const;

    /// Structural graded-system checks (Phi-4 and the C support bound);
    /// throws std::logic_error naming the first violated entry.
    void check_grading() const;

    /// Exact Phi_A from a polynomial phi (r0 components).
    PolyQ jet_apply(int A, const PolyField& phi) const;

    /// Residual of the augmented PDE at x for a polynomial phi:
    /// max_A,i |d_i Phi_A - B Phi - C d^gamma (P* phi)|.
    double pde_residual(const PolyField& phi, const Vec& x) const;
};

/// Maximal system from a verified certificate: jet variables up to order
/// N0 - 1, shift rule below the top, certificate rows on top. Constant
/// lower-order terms of P are folded into the top B rows.
AugmentedSystem maximal_from_certificate(const DiffOperator& P, const FcCertificate& cert);

/// The special covariant systems specialized to flat space. Names:
/// divergence, double_divergence, tracefree_double_divergence,
/// symmetric_divergence, tracefree_symmetric_divergence,
/// einstein_constraint, einstein_constraint_cmc.
AugmentedSystem special_system(const std::string& name, int d);

/// Divergence system with variable zeroth-order coefficients B_j (the
/// operator is u -> div u + B_j u^j; the single augmented variable is phi).
AugmentedSystem divergence_system_with_B(int d, const std::vector<PolyD>& Bpoly);

/// Curvature 2-form F_ij = d_i B_j - d_j B_i + [B_i, B_j] at x, as a matrix
/// per direction pair; spatial derivatives of callable entries use
/// Richardson-extrapolated central differences (step 1e-5 (1+|x|)).
std::vector<std::vector<Eigen::MatrixXd>> curvature(const AugmentedSystem& sys, const Vec& x);

/// Exact zero-curvature test for constant systems (commutators in Q(i)).
bool curvature_zero_exact(const AugmentedSystem& sys);

struct IntegrabilityReport {
    bool integrable = false;
    double max_curvature = 0.0;
    bool exact = false; // decided by exact commutators
};

IntegrabilityReport is_completely_integrable(const AugmentedSystem& sys, const std::vector<Vec>& samples);

/// Closed-form polynomial cokernel basis for the flat zoo (spec'd names
/// only); every element is annihilated exactly by the adjoint.
struct CokernelBasis {
    std::string name;
    int d = 0;
    std::vector<PolyField> Z;
    int dimension() const { return static_cast<int>(Z.size()); }
};

CokernelBasis cokernel_basis(const std::string& name, int d);

} // namespace curvegreen
