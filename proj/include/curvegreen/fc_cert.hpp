#pragma once

#include <iosfwd>
#include <optional>
#include <random>

#include "curvegreen/exact_solve.hpp"
#include "curvegreen/polymatrix.hpp"

namespace curvegreen {

/// Nullstellensatz certificate: for every |alpha| = N0,
///   xi^alpha I_{r0} = g_alpha(xi) * pstar(xi)
/// holds as an exact polynomial identity. g_alpha has shape r0 x s0 with
/// column-K entries homogeneous of degree N0 - m_K.
struct FcCertificate {
    int N0 = 0;
    int r0 = 0, s0 = 0, d = 0;
    std::map<MultiIndex, HomPolyMatrix> g;

    void dump(std::ostream& os) const;
    static FcCertificate load(std::istream& is, const std::vector<int>& m);
};

struct FcWitness {
    std::vector<std::complex<double>> xi;
    std::vector<std::complex<double>> phi;
    double residual = 0.0; // ||pstar(xi) phi|| with ||xi|| = ||phi|| = 1
    bool exact = false;    // confirmed by exact kernel computation
};

struct FcVerdict {
    enum Kind { Certified, Falsified, Inconclusive } kind = Inconclusive;
    std::optional<FcCertificate> certificate;
    std::optional<FcWitness> witness;
    int n0_searched = 0;      // largest N0 tried (Inconclusive / Certified)
    double min_singular = -1; // observed falsifier minimum (when scanned)
};

/// Exact certificate search for N0 = max m_K .. n0_max; returns the
/// minimal-N0 certificate (free unknowns zero) or nullopt. pstar must be a
/// row-graded constant-coefficient principal symbol (of the adjoint).
std::optional<FcCertificate> find_certificate(const HomPolyMatrix& pstar, int n0_max);

/// True iff the polynomial identity holds exactly for every stored alpha.
bool verify_certificate(const FcCertificate& cert, const HomPolyMatrix& pstar);

/// Searches for xi with nontrivial kernel of pstar(xi): first small
/// Gaussian-integer points on coordinate subspaces (exact kernel), then
/// random complex unit vectors (numeric SVD, threshold 1e-10).
/// min_singular_out reports the smallest singular value seen.
std::optional<FcWitness> falsify_fc(const HomPolyMatrix& pstar, int trials, std::mt19937_64& rng,
                                    double* min_singular_out = nullptr);

/// Full three-valued decision combining search and falsifier.
FcVerdict decide_fc(const HomPolyMatrix& pstar, int n0_max, int trials, std::mt19937_64& rng);

/// Default search cap: max m_K + 4.
int default_n0_max(const HomPolyMatrix& pstar);

} // namespace curvegreen
