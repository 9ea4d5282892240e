#include "curvegreen/polynomial.hpp"

#include <cmath>

namespace curvegreen {

std::complex<double> PolyQ::eval(const std::vector<double>& x) const {
    std::complex<double> s = 0;
    for (const auto& [a, c] : t_) {
        double m = 1;
        for (int i = 0; i < d_; ++i)
            for (int k = 0; k < a[i]; ++k) m *= x[i];
        s += c.to_complex() * m;
    }
    return s;
}

GR PolyQ::eval_exact(const std::vector<mpq_class>& x) const {
    GR s;
    for (const auto& [a, c] : t_) {
        mpq_class m(1);
        for (int i = 0; i < d_; ++i)
            for (int k = 0; k < a[i]; ++k) m *= x[i];
        s += c * GR(m);
    }
    return s;
}

std::string PolyQ::str() const {
    if (t_.empty()) return "0";
    std::string s;
    for (const auto& [a, c] : t_) {
        if (!s.empty()) s += " + ";
        s += "(" + c.str() + ")";
        for (int i = 0; i < d_; ++i)
            if (a[i] > 0) s += "*x" + std::to_string(i + 1) + (a[i] > 1 ? "^" + std::to_string(a[i]) : "");
    }
    return s;
}

double PolyD::eval(const std::vector<double>& x) const {
    double s = 0;
    for (const auto& [a, c] : t_) {
        double m = c;
        for (int i = 0; i < d_; ++i)
            for (int k = 0; k < a[i]; ++k) m *= x[i];
        s += m;
    }
    return s;
}

} // namespace curvegreen
