#pragma once

#include <map>
#include <string>
#include <vector>

#include "curvegreen/multiindex.hpp"
#include "curvegreen/rational.hpp"

namespace curvegreen {

/// Multivariate polynomial over Q(i), dense in the monomial map sense.
/// Exact arithmetic and differentiation.
class PolyQ {
public:
    PolyQ() = default;
    explicit PolyQ(int dim) : d_(dim) {}

    static PolyQ constant(int dim, const GR& c) {
        PolyQ p(dim);
        p.add(MultiIndex(dim), c);
        return p;
    }
    static PolyQ variable(int dim, int axis) {
        PolyQ p(dim);
        p.add(MultiIndex::unit(dim, axis), GR(1));
        return p;
    }

    int dim() const { return d_; }
    const std::map<MultiIndex, GR>& terms() const { return t_; }
    bool is_zero() const { return t_.empty(); }
    int degree() const {
        int m = 0;
        for (const auto& [a, c] : t_) m = std::max(m, a.order());
        return m;
    }

    void add(const MultiIndex& a, const GR& c) {
        if (c.is_zero()) return;
        auto it = t_.find(a);
        if (it == t_.end()) {
            t_[a] = c;
        } else {
            it->second += c;
            if (it->second.is_zero()) t_.erase(it);
        }
    }

    PolyQ operator+(const PolyQ& o) const {
        PolyQ r = *this;
        for (const auto& [a, c] : o.t_) r.add(a, c);
        return r;
    }
    PolyQ operator-(const PolyQ& o) const {
        PolyQ r = *this;
        for (const auto& [a, c] : o.t_) r.add(a, -c);
        return r;
    }
    PolyQ operator*(const PolyQ& o) const {
        PolyQ r(d_);
        for (const auto& [a, c] : t_)
            for (const auto& [b, e] : o.t_) r.add(a + b, c * e);
        return r;
    }
    PolyQ operator*(const GR& s) const {
        PolyQ r(d_);
        for (const auto& [a, c] : t_) r.add(a, c * s);
        return r;
    }

    PolyQ derivative(int axis) const {
        PolyQ r(d_);
        for (const auto& [a, c] : t_)
            if (a[axis] > 0) r.add(a.minus(axis), c * GR(a[axis]));
        return r;
    }
    PolyQ derivative(const MultiIndex& alpha) const {
        PolyQ r = *this;
        for (int i = 0; i < d_; ++i)
            for (int k = 0; k < alpha[i]; ++k) r = r.derivative(i);
        return r;
    }

    std::complex<double> eval(const std::vector<double>& x) const;
    GR eval_exact(const std::vector<mpq_class>& x) const;

    std::string str() const;

    friend bool operator==(const PolyQ& a, const PolyQ& b) { return a.t_ == b.t_; }

private:
    int d_ = 0;
    std::map<MultiIndex, GR> t_;
};

/// Vector-valued polynomial field (one PolyQ per component).
struct PolyField {
    std::vector<PolyQ> comp;
    int dim() const { return comp.empty() ? 0 : comp[0].dim(); }
    bool is_zero() const {
        for (const auto& p : comp)
            if (!p.is_zero()) return false;
        return true;
    }
};

/// Multivariate polynomial with double coefficients; the floating work-horse
/// for transport polynomials Z^A(y, x) in x - y.
class PolyD {
public:
    PolyD() = default;
    explicit PolyD(int dim) : d_(dim) {}

    static PolyD constant(int dim, double c) {
        PolyD p(dim);
        p.add(MultiIndex(dim), c);
        return p;
    }
    static PolyD variable(int dim, int axis) {
        PolyD p(dim);
        p.add(MultiIndex::unit(dim, axis), 1.0);
        return p;
    }

    int dim() const { return d_; }
    const std::map<MultiIndex, double>& terms() const { return t_; }
    bool is_zero() const { return t_.empty(); }

    void add(const MultiIndex& a, double c) {
        if (c == 0.0) return;
        t_[a] += c;
        if (t_[a] == 0.0) t_.erase(a);
    }

    PolyD operator+(const PolyD& o) const {
        PolyD r = *this;
        for (const auto& [a, c] : o.t_) r.add(a, c);
        return r;
    }
    PolyD operator*(const PolyD& o) const {
        PolyD r(d_);
        for (const auto& [a, c] : t_)
            for (const auto& [b, e] : o.t_) r.add(a + b, c * e);
        return r;
    }
    PolyD operator*(double s) const {
        PolyD r(d_);
        for (const auto& [a, c] : t_) r.add(a, c * s);
        return r;
    }

    PolyD derivative(int axis) const {
        PolyD r(d_);
        for (const auto& [a, c] : t_)
            if (a[axis] > 0) r.add(a.minus(axis), c * a[axis]);
        return r;
    }

    double eval(const std::vector<double>& x) const;

private:
    int d_ = 0;
    std::map<MultiIndex, double> t_;
};

} // namespace curvegreen
