// Benchmark: serial reference vs OpenMP batch evaluation of the averaged
// kernels and of the solution operator on a grid.
#include <chrono>
#include <iostream>
#include <omp.h>

#include "curvegreen/parallel.hpp"

using namespace curvegreen;
using clk = std::chrono::steady_clock;

static double secs(clk::time_point a, clk::time_point b) {
    return std::chrono::duration<double>(b - a).count();
}

int main(int argc, char** argv) {
    int n = argc > 1 ? std::atoi(argv[1]) : 64;
    const int d = 2;
    Weight w = Weight::bogovskii(d, {1.5, 0.0}, 0.5);
    AveragedKernel K = closed_form_kernel("symmetric_divergence", w, d);

    std::vector<std::pair<Vec, Vec>> pts;
    Vec y = {0.0, 0.0};
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            pts.push_back({{-3.0 + 6.0 * (i + 0.5) / n, -3.0 + 6.0 * (j + 0.5) / n}, y});

    std::cout << "threads available: " << omp_get_max_threads() << "\n";
    auto t0 = clk::now();
    auto a = eval_kernel_batch_serial(K, pts);
    auto t1 = clk::now();
    auto b = eval_kernel_batch(K, pts);
    auto t2 = clk::now();
    double diff = 0;
    for (size_t i = 0; i < a.size(); ++i) diff = std::max(diff, (a[i] - b[i]).cwiseAbs().maxCoeff());
    std::cout << "kernel grid " << n << "x" << n << ": serial " << secs(t0, t1) << " s, parallel "
              << secs(t1, t2) << " s, speedup " << secs(t0, t1) / secs(t1, t2) << ", max|diff| " << diff
              << "\n";

    TestFunction f(d, 1);
    GaussTerm t;
    t.mu = {0.0, 0.0};
    t.sigma = 0.35;
    t.poly = PolyD::constant(d, 1.0);
    f.comp[0].terms.push_back(t);
    AveragedKernel Kd = closed_form_kernel("double_divergence", w, d);
    QuadratureSpec q;
    q.outer_n = 24;
    std::vector<Vec> xs;
    int m = std::max(4, n / 8);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) xs.push_back({-2.0 + 4.0 * (i + 0.5) / m, -2.0 + 4.0 * (j + 0.5) / m});

    t0 = clk::now();
    auto us = apply_S_batch_serial(Kd, f, xs, q);
    t1 = clk::now();
    auto up = apply_S_batch(Kd, f, xs, q);
    t2 = clk::now();
    double diff2 = 0;
    for (size_t i = 0; i < us.size(); ++i)
        for (size_t c = 0; c < us[i].size(); ++c) diff2 = std::max(diff2, std::abs(us[i][c] - up[i][c]));
    std::cout << "apply_S grid " << m << "x" << m << ": serial " << secs(t0, t1) << " s, parallel "
              << secs(t1, t2) << " s, speedup " << secs(t0, t1) / secs(t1, t2) << ", max|diff| " << diff2
              << "\n";
    return 0;
}
