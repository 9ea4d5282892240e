#include "curvegreen/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace curvegreen {

namespace {
GLRule make_rule(int n) {
    GLRule r;
    r.x.resize(n);
    r.w.resize(n);
    for (int i = 0; i < n; ++i) {
        // Newton on P_n with Chebyshev initial guess.
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        for (int it = 0; it < 100; ++it) {
            double p0 = 1, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            double dp = n * (x * p1 - p0) / (x * x - 1);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        double p0 = 1, p1 = x;
        for (int k = 2; k <= n; ++k) {
            double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        double dp = n * (x * p1 - p0) / (x * x - 1);
        r.x[n - 1 - i] = x;
        r.w[n - 1 - i] = 2.0 / ((1 - x * x) * dp * dp);
    }
    return r;
}
} // namespace

const GLRule& gauss_legendre(int n) {
    static std::map<int, GLRule> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, make_rule(n)).first;
    return it->second;
}

double integrate_gl(const std::function<double(double)>& f, double a, double b, int n) {
    const GLRule& r = gauss_legendre(n);
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double s = 0;
    for (int i = 0; i < n; ++i) s += r.w[i] * f(c + h * r.x[i]);
    return s * h;
}

namespace {
double adapt(const std::function<double(double)>& f, double a, double b, double tol, int depth,
             double coarse, double& err_acc) {
    double fine = integrate_gl(f, a, 0.5 * (a + b), 10) + integrate_gl(f, 0.5 * (a + b), b, 10);
    double err = std::abs(fine - coarse);
    if (err <= tol || depth <= 0) {
        err_acc += err;
        return fine;
    }
    double m = 0.5 * (a + b);
    double left = integrate_gl(f, a, m, 10);
    double right = integrate_gl(f, m, b, 10);
    return adapt(f, a, m, 0.5 * tol, depth - 1, left, err_acc) +
           adapt(f, m, b, 0.5 * tol, depth - 1, right, err_acc);
}
} // namespace

double integrate_adaptive(const std::function<double(double)>& f, double a, double b, double tol,
                          int max_depth, double* achieved_out) {
    double err = 0;
    double coarse = integrate_gl(f, a, b, 10);
    double v = adapt(f, a, b, tol, max_depth, coarse, err);
    if (achieved_out) *achieved_out = err;
    return v;
}

} // namespace curvegreen
