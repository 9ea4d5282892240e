#include "curvegreen/parallel.hpp"

#include <Eigen/SVD>

namespace curvegreen {

std::vector<Eigen::MatrixXd> eval_kernel_batch_serial(const AveragedKernel& K,
                                                      const std::vector<std::pair<Vec, Vec>>& xy) {
    std::vector<Eigen::MatrixXd> out(xy.size());
    for (size_t i = 0; i < xy.size(); ++i) out[i] = K.eval(xy[i].first, xy[i].second);
    return out;
}

std::vector<Eigen::MatrixXd> eval_kernel_batch(const AveragedKernel& K,
                                               const std::vector<std::pair<Vec, Vec>>& xy) {
    std::vector<Eigen::MatrixXd> out(xy.size());
    const long n = static_cast<long>(xy.size());
#pragma omp parallel for schedule(static)
    for (long i = 0; i < n; ++i) out[i] = K.eval(xy[i].first, xy[i].second);
    return out;
}

std::vector<Vec> apply_S_batch_serial(const AveragedKernel& K, const TestFunction& f,
                                      const std::vector<Vec>& xs, const QuadratureSpec& q) {
    std::vector<Vec> out(xs.size());
    for (size_t i = 0; i < xs.size(); ++i) out[i] = apply_operator_S(K, f, xs[i], q);
    return out;
}

std::vector<Vec> apply_S_batch(const AveragedKernel& K, const TestFunction& f, const std::vector<Vec>& xs,
                               const QuadratureSpec& q) {
    std::vector<Vec> out(xs.size());
    const long n = static_cast<long>(xs.size());
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < n; ++i) out[i] = apply_operator_S(K, f, xs[i], q);
    return out;
}

std::vector<double> min_singular_batch_serial(const HomPolyMatrix& pstar,
                                              const std::vector<std::vector<std::complex<double>>>& xis) {
    std::vector<double> out(xis.size());
    for (size_t i = 0; i < xis.size(); ++i) {
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(pstar.eval(xis[i]));
        out[i] = svd.singularValues()(pstar.cols() - 1);
    }
    return out;
}

std::vector<double> min_singular_batch(const HomPolyMatrix& pstar,
                                       const std::vector<std::vector<std::complex<double>>>& xis) {
    std::vector<double> out(xis.size());
    const long n = static_cast<long>(xis.size());
#pragma omp parallel for schedule(static)
    for (long i = 0; i < n; ++i) {
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(pstar.eval(xis[i]));
        out[i] = svd.singularValues()(pstar.cols() - 1);
    }
    return out;
}

} // namespace curvegreen
