#pragma once

#include <random>
#include <vector>

#include "curvegreen/polynomial.hpp"

namespace curvegreen {

using Vec = std::vector<double>;

/// One term p(x) * exp(-|x - mu|^2 / (2 sigma^2)). The class is closed under
/// partial differentiation and under multiplication by polynomials, which is
/// what makes exact operator application possible.
struct GaussTerm {
    PolyD poly;
    Vec mu;
    double sigma = 1.0;

    int dim() const { return static_cast<int>(mu.size()); }
    double eval(const Vec& x) const;
    GaussTerm derivative(int axis) const;
};

/// Scalar test function: finite sum of Gaussian-polynomial terms.
struct TFComponent {
    std::vector<GaussTerm> terms;

    double eval(const Vec& x) const;
    TFComponent derivative(int axis) const;
    TFComponent derivative(const MultiIndex& alpha) const;
    TFComponent& operator+=(const TFComponent& o) {
        terms.insert(terms.end(), o.terms.begin(), o.terms.end());
        return *this;
    }
    TFComponent scaled(double s) const;
};

/// Vector-valued test function with `components()` components; effectively
/// compactly supported (|value| < 1e-300 outside support_radius()).
struct TestFunction {
    int d = 0;
    std::vector<TFComponent> comp;

    TestFunction() = default;
    TestFunction(int dim, int ncomp) : d(dim), comp(ncomp) {}

    int components() const { return static_cast<int>(comp.size()); }
    Vec eval(const Vec& x) const;
    double eval_comp(int k, const Vec& x) const { return comp[k].eval(x); }

    TestFunction scaled(double s) const;
    TestFunction operator+(const TestFunction& o) const;

    /// Radius of a ball centered at the origin outside which all components
    /// are below 1e-300 in absolute value.
    double support_radius() const;
    /// Max absolute coefficient-based crude amplitude bound.
    double amplitude() const;
};

/// Exact integral of p(x) exp(-|x-mu|^2/(2 sigma^2)) over R^d via Gaussian
/// moment recursion (no quadrature).
double gauss_integral(const GaussTerm& t);

/// Exact L2 pairing of two scalar components (sum over pairwise term
/// products, each reduced to a single Gaussian integral).
double pair_components(const TFComponent& a, const TFComponent& b);

/// Weighted pairing sum_K w_K <a_K, b_K>; w may be empty for unit weights.
double pair_functions(const TestFunction& a, const TestFunction& b, const std::vector<double>& w = {});

/// Random scalar bump: polynomial of degree <= pdeg with coefficients in
/// [-1,1], center in [-c,c]^d, sigma in [smin, smax].
TFComponent random_component(std::mt19937_64& rng, int d, int pdeg, double c, double smin, double smax);

TestFunction random_function(std::mt19937_64& rng, int d, int ncomp, int pdeg = 2, double c = 1.0,
                             double smin = 0.4, double smax = 0.9);

} // namespace curvegreen
