#pragma once

#include "curvegreen/solve_verify.hpp"

namespace curvegreen {

/// Batch evaluation surfaces. Each output slot depends only on its own input
/// point, so the parallel versions are bitwise identical to the serial
/// reference for any thread count; reductions over samples are done serially
/// in index order by the callers.

/// Kernel table K(x_i, y_i) for a list of point pairs.
std::vector<Eigen::MatrixXd> eval_kernel_batch_serial(const AveragedKernel& K,
                                                      const std::vector<std::pair<Vec, Vec>>& xy);
std::vector<Eigen::MatrixXd> eval_kernel_batch(const AveragedKernel& K,
                                               const std::vector<std::pair<Vec, Vec>>& xy);

/// Solution values u(x_i) = (S f)(x_i).
std::vector<Vec> apply_S_batch_serial(const AveragedKernel& K, const TestFunction& f,
                                      const std::vector<Vec>& xs, const QuadratureSpec& q);
std::vector<Vec> apply_S_batch(const AveragedKernel& K, const TestFunction& f, const std::vector<Vec>& xs,
                               const QuadratureSpec& q);

/// Least singular values of an evaluated symbol over a list of covectors.
std::vector<double> min_singular_batch_serial(const HomPolyMatrix& pstar,
                                              const std::vector<std::vector<std::complex<double>>>& xis);
std::vector<double> min_singular_batch(const HomPolyMatrix& pstar,
                                       const std::vector<std::vector<std::complex<double>>>& xis);

} // namespace curvegreen
