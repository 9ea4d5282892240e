#include "curvegreen/polymatrix.hpp"

#include <istream>
#include <ostream>
#include <sstream>

namespace curvegreen {

void HomPolyMatrix::set(int r, int c, const MultiIndex& a, const GR& v) {
    if (a.order() != degree(r, c))
        throw GradingError(r, c, "monomial degree " + std::to_string(a.order()) + " != declared degree " +
                                     std::to_string(degree(r, c)) + " at (" + std::to_string(r) + "," +
                                     std::to_string(c) + ")");
    if (v.is_zero())
        e_.erase({r, c, a});
    else
        e_[{r, c, a}] = v;
}

void HomPolyMatrix::add(int r, int c, const MultiIndex& a, const GR& v) {
    GR cur = coeff(r, c, a);
    set(r, c, a, cur + v);
}

GR HomPolyMatrix::coeff(int r, int c, const MultiIndex& a) const {
    auto it = e_.find({r, c, a});
    return it == e_.end() ? GR() : it->second;
}

HomPolyMatrix mat_mul(const HomPolyMatrix& A, const HomPolyMatrix& B) {
    if (A.cols_ != B.rows_) throw GradingError(-1, -1, "shape mismatch in mat_mul");
    // Inner grading: A.col_deg[k] + B.row_deg[k] must not depend on k, else
    // some product entry would be inhomogeneous.
    int inner = A.col_deg_.empty() ? 0 : A.col_deg_[0] + B.row_deg_[0];
    for (int k = 0; k < A.cols_; ++k)
        if (A.col_deg_[k] + B.row_deg_[k] != inner)
            throw GradingError(k, k, "incompatible inner grading at index " + std::to_string(k));

    std::vector<int> rd = A.row_deg_;
    for (int& v : rd) v += inner;
    HomPolyMatrix R(A.d_, A.rows_, B.cols_, rd, B.col_deg_);
    for (const auto& [ka, va] : A.e_) {
        auto [ra, ca, ma] = ka;
        for (const auto& [kb, vb] : B.e_) {
            auto [rb, cb, mb] = kb;
            if (rb != ca) continue;
            R.add(ra, cb, ma + mb, va * vb);
        }
    }
    return R;
}

HomPolyMatrix HomPolyMatrix::operator-(const HomPolyMatrix& o) const {
    HomPolyMatrix R = *this;
    for (const auto& [k, v] : o.e_) {
        auto [r, c, m] = k;
        R.add(r, c, m, -v);
    }
    return R;
}

Eigen::MatrixXcd HomPolyMatrix::eval(const std::vector<std::complex<double>>& xi) const {
    int maxdeg = 0;
    for (int r = 0; r < rows_; ++r)
        for (int c = 0; c < cols_; ++c) maxdeg = std::max(maxdeg, degree(r, c));
    // Power table per variable.
    std::vector<std::vector<std::complex<double>>> pw(d_, std::vector<std::complex<double>>(maxdeg + 1, 1.0));
    for (int i = 0; i < d_; ++i)
        for (int k = 1; k <= maxdeg; ++k) pw[i][k] = pw[i][k - 1] * xi[i];

    Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(rows_, cols_);
    for (const auto& [k, v] : e_) {
        const auto& [r, c, m] = k;
        std::complex<double> t = v.to_complex();
        for (int i = 0; i < d_; ++i) t *= pw[i][m[i]];
        M(r, c) += t;
    }
    return M;
}

void HomPolyMatrix::dump(std::ostream& os) const {
    for (const auto& [k, v] : e_) {
        const auto& [r, c, m] = k;
        os << r << ' ' << c;
        for (int i = 0; i < d_; ++i) os << ' ' << m[i];
        os << ' ' << v.re.get_num().get_str() << '/' << v.re.get_den().get_str() << ' '
           << v.im.get_num().get_str() << '/' << v.im.get_den().get_str() << '\n';
    }
}

HomPolyMatrix HomPolyMatrix::load(std::istream& is, int dim, int rows, int cols, std::vector<int> row_degree,
                                  std::vector<int> col_degree) {
    HomPolyMatrix M(dim, rows, cols, std::move(row_degree), std::move(col_degree));
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ss(line);
        int r, c;
        ss >> r >> c;
        MultiIndex m(dim);
        for (int i = 0; i < dim; ++i) ss >> m[i];
        std::string res, ims;
        ss >> res >> ims;
        if (!ss) throw std::runtime_error("bad polynomial matrix line: " + line);
        GR v{mpq_class(res), mpq_class(ims)};
        v.re.canonicalize();
        v.im.canonicalize();
        M.set(r, c, m, v);
    }
    return M;
}

HomPolyMatrix poly_identity(int dim, int n) {
    HomPolyMatrix I(dim, n, n, std::vector<int>(n, 0), std::vector<int>(n, 0));
    for (int i = 0; i < n; ++i) I.set(i, i, MultiIndex(dim), GR(1));
    return I;
}

HomPolyMatrix monomial_times_identity(const MultiIndex& alpha, int n) {
    int k = alpha.order();
    HomPolyMatrix M(alpha.dim(), n, n, std::vector<int>(n, k), std::vector<int>(n, 0));
    for (int i = 0; i < n; ++i) M.set(i, i, alpha, GR(1));
    return M;
}

} // namespace curvegreen
