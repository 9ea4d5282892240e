#pragma once

#include <optional>
#include <vector>

#include "curvegreen/rational.hpp"

namespace curvegreen {

/// Dense exact matrix over Q(i), row-major.
struct ExactMatrix {
    int rows = 0, cols = 0;
    std::vector<GR> a;

    ExactMatrix() = default;
    ExactMatrix(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c) {}
    GR& at(int r, int c) { return a[static_cast<size_t>(r) * cols + c]; }
    const GR& at(int r, int c) const { return a[static_cast<size_t>(r) * cols + c]; }
};

/// Solves A x = b exactly by fraction-free (Bareiss) Gaussian elimination.
/// Rows are scaled to Gaussian-integer entries first; pivoting is the first
/// nonzero entry in column order, so the result is deterministic. The system
/// may be rectangular and underdetermined; free variables are set to zero
/// (minimal-support solution). Returns nullopt when inconsistent.
std::optional<std::vector<GR>> solve_exact(ExactMatrix A, std::vector<GR> b);

/// Exact nullspace basis vectors of A (free variables set to unit vectors).
std::vector<std::vector<GR>> nullspace_exact(ExactMatrix A);

} // namespace curvegreen
