#pragma once

#include <functional>
#include <vector>

namespace curvegreen {

struct GLRule {
    std::vector<double> x, w; // nodes/weights on [-1, 1]
};

/// Gauss-Legendre rule of order n (cached).
const GLRule& gauss_legendre(int n);

double integrate_gl(const std::function<double(double)>& f, double a, double b, int n);

/// Adaptive bisection with embedded GL(n)/GL(2n) error estimate.
/// achieved_out (optional) receives the final error estimate.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b, double tol,
                          int max_depth = 12, double* achieved_out = nullptr);

} // namespace curvegreen
