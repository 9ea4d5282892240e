#pragma once

#include <Eigen/Dense>
#include <complex>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "curvegreen/multiindex.hpp"
#include "curvegreen/rational.hpp"

namespace curvegreen {

struct GradingError : std::runtime_error {
    int row, col;
    GradingError(int r, int c, const std::string& what) : std::runtime_error(what), row(r), col(c) {}
};

/// Matrix of multivariate polynomials over Q(i) with per-entry homogeneity:
/// the entry at (r, c) is homogeneous of degree row_degree[r] + col_degree[c].
/// Sparse storage keyed by (row, col, MultiIndex); absent key means zero.
/// Immutable by convention after construction.
class HomPolyMatrix {
public:
    using Key = std::tuple<int, int, MultiIndex>;

    HomPolyMatrix() = default;
    HomPolyMatrix(int dim, int rows, int cols, std::vector<int> row_degree, std::vector<int> col_degree)
        : d_(dim), rows_(rows), cols_(cols), row_deg_(std::move(row_degree)), col_deg_(std::move(col_degree)) {}

    /// Uniform column degree 0 (row-graded matrix, e.g. a principal symbol).
    static HomPolyMatrix row_graded(int dim, int rows, int cols, std::vector<int> row_degree) {
        return HomPolyMatrix(dim, rows, cols, std::move(row_degree), std::vector<int>(cols, 0));
    }

    int dim() const { return d_; }
    int rows() const { return rows_; }
    int cols() const { return cols_; }
    int degree(int r, int c) const { return row_deg_[r] + col_deg_[c]; }
    const std::vector<int>& row_degrees() const { return row_deg_; }
    const std::vector<int>& col_degrees() const { return col_deg_; }
    const std::map<Key, GR>& entries() const { return e_; }

    void set(int r, int c, const MultiIndex& a, const GR& v);
    void add(int r, int c, const MultiIndex& a, const GR& v);
    GR coeff(int r, int c, const MultiIndex& a) const;

    bool is_zero() const { return e_.empty(); }

    /// Entrywise polynomial product-sum; exact coefficients. Requires
    /// A.cols == B.rows and a consistent inner grading; on violation throws
    /// GradingError naming the offending inner (row, col) pair.
    friend HomPolyMatrix mat_mul(const HomPolyMatrix& A, const HomPolyMatrix& B);

    HomPolyMatrix operator-(const HomPolyMatrix& o) const;

    /// Evaluate at a complex point; exact coefficients converted to floating.
    Eigen::MatrixXcd eval(const std::vector<std::complex<double>>& xi) const;

    /// Line-oriented text form: `row col exponents... re_num/re_den im_num/im_den`.
    void dump(std::ostream& os) const;
    static HomPolyMatrix load(std::istream& is, int dim, int rows, int cols, std::vector<int> row_degree,
                              std::vector<int> col_degree);

    friend bool operator==(const HomPolyMatrix& a, const HomPolyMatrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.e_ == b.e_;
    }

private:
    int d_ = 0, rows_ = 0, cols_ = 0;
    std::vector<int> row_deg_, col_deg_;
    std::map<Key, GR> e_;
};

/// Identity polynomial matrix of degree 0.
HomPolyMatrix poly_identity(int dim, int n);

/// xi^alpha * I_n as a HomPolyMatrix with row degrees |alpha|.
HomPolyMatrix monomial_times_identity(const MultiIndex& alpha, int n);

} // namespace curvegreen
