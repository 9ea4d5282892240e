#include "curvegreen/testfunction.hpp"

#include <cmath>

namespace curvegreen {

double GaussTerm::eval(const Vec& x) const {
    double q = 0;
    for (int i = 0; i < dim(); ++i) q += (x[i] - mu[i]) * (x[i] - mu[i]);
    return poly.eval(x) * std::exp(-q / (2 * sigma * sigma));
}

GaussTerm GaussTerm::derivative(int axis) const {
    // d/dx_i [p G] = (dp/dx_i - p (x_i - mu_i)/sigma^2) G
    GaussTerm r = *this;
    PolyD lin = PolyD::variable(poly.dim(), axis) + PolyD::constant(poly.dim(), -mu[axis]);
    r.poly = poly.derivative(axis) + poly * lin * (-1.0 / (sigma * sigma));
    return r;
}

double TFComponent::eval(const Vec& x) const {
    double s = 0;
    for (const auto& t : terms) s += t.eval(x);
    return s;
}

TFComponent TFComponent::derivative(int axis) const {
    TFComponent r;
    r.terms.reserve(terms.size());
    for (const auto& t : terms) r.terms.push_back(t.derivative(axis));
    return r;
}

TFComponent TFComponent::derivative(const MultiIndex& alpha) const {
    TFComponent r = *this;
    for (int i = 0; i < alpha.dim(); ++i)
        for (int k = 0; k < alpha[i]; ++k) r = r.derivative(i);
    return r;
}

TFComponent TFComponent::scaled(double s) const {
    TFComponent r = *this;
    for (auto& t : r.terms) t.poly = t.poly * s;
    return r;
}

Vec TestFunction::eval(const Vec& x) const {
    Vec v(comp.size());
    for (size_t i = 0; i < comp.size(); ++i) v[i] = comp[i].eval(x);
    return v;
}

TestFunction TestFunction::scaled(double s) const {
    TestFunction r = *this;
    for (auto& c : r.comp) c = c.scaled(s);
    return r;
}

TestFunction TestFunction::operator+(const TestFunction& o) const {
    TestFunction r = *this;
    for (size_t i = 0; i < comp.size(); ++i) r.comp[i] += o.comp[i];
    return r;
}

double TestFunction::support_radius() const {
    double R = 0;
    for (const auto& c : comp)
        for (const auto& t : c.terms) {
            double m = 0;
            for (double v : t.mu) m += v * v;
            double amp = 0;
            for (const auto& [a, cf] : t.poly.terms()) amp += std::abs(cf);
            // |p(x)| <= amp * (1+|x|)^deg; solve amp (1+r)^deg exp(-r^2/2s^2) < 1e-300.
            double r = t.sigma * std::sqrt(2 * (700.0 + std::log(1 + amp)));
            R = std::max(R, std::sqrt(m) + r + 2.0);
        }
    return R;
}

double TestFunction::amplitude() const {
    double a = 0;
    for (const auto& c : comp)
        for (const auto& t : c.terms)
            for (const auto& [k, cf] : t.poly.terms()) a += std::abs(cf);
    return a;
}

namespace {
// M_k(m, s) = int x^k exp(-(x-m)^2/(2 s^2)) dx.
double moment(int k, double m, double s) {
    double m0 = s * std::sqrt(2 * M_PI);
    if (k == 0) return m0;
    double prev = m0, cur = m * m0;
    for (int j = 2; j <= k; ++j) {
        double next = m * cur + (j - 1) * s * s * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}
} // namespace

double gauss_integral(const GaussTerm& t) {
    double s = 0;
    for (const auto& [a, c] : t.poly.terms()) {
        double m = c;
        for (int i = 0; i < t.dim(); ++i) m *= moment(a[i], t.mu[i], t.sigma);
        s += m;
    }
    return s;
}

double pair_components(const TFComponent& a, const TFComponent& b) {
    double s = 0;
    for (const auto& ta : a.terms)
        for (const auto& tb : b.terms) {
            const int d = ta.dim();
            const double ia = 1.0 / (ta.sigma * ta.sigma), ib = 1.0 / (tb.sigma * tb.sigma);
            const double istar = ia + ib;
            const double sstar = 1.0 / std::sqrt(istar);
            GaussTerm prod;
            prod.sigma = sstar;
            prod.mu.resize(d);
            double c2 = 0;
            for (int i = 0; i < d; ++i) {
                prod.mu[i] = (ta.mu[i] * ia + tb.mu[i] * ib) / istar;
                c2 += (ta.mu[i] - tb.mu[i]) * (ta.mu[i] - tb.mu[i]);
            }
            const double pref = std::exp(-c2 / (2 * (ta.sigma * ta.sigma + tb.sigma * tb.sigma)));
            prod.poly = ta.poly * tb.poly;
            s += pref * gauss_integral(prod);
        }
    return s;
}

double pair_functions(const TestFunction& a, const TestFunction& b, const std::vector<double>& w) {
    double s = 0;
    for (size_t k = 0; k < a.comp.size(); ++k)
        s += (w.empty() ? 1.0 : w[k]) * pair_components(a.comp[k], b.comp[k]);
    return s;
}

TFComponent random_component(std::mt19937_64& rng, int d, int pdeg, double c, double smin, double smax) {
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    GaussTerm t;
    t.mu.resize(d);
    for (int i = 0; i < d; ++i) t.mu[i] = c * U(rng);
    t.sigma = smin + (smax - smin) * 0.5 * (U(rng) + 1.0);
    t.poly = PolyD(d);
    for (const auto& a : monomials_up_to(d, pdeg)) t.poly.add(a, U(rng));
    TFComponent r;
    r.terms.push_back(t);
    return r;
}

TestFunction random_function(std::mt19937_64& rng, int d, int ncomp, int pdeg, double c, double smin,
                             double smax) {
    TestFunction f(d, ncomp);
    for (int k = 0; k < ncomp; ++k) f.comp[k] = random_component(rng, d, pdeg, c, smin, smax);
    return f;
}

} // namespace curvegreen
