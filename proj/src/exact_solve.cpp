#include "curvegreen/exact_solve.hpp"

namespace curvegreen {

namespace {

// Scale each row of [A|b] so that all entries are Gaussian integers.
void clear_denominators(ExactMatrix& A, std::vector<GR>& b) {
    for (int r = 0; r < A.rows; ++r) {
        mpz_class l(1);
        auto fold = [&l](const GR& v) {
            l = lcm(l, v.re.get_den());
            l = lcm(l, v.im.get_den());
        };
        for (int c = 0; c < A.cols; ++c) fold(A.at(r, c));
        if (!b.empty()) fold(b[r]);
        if (l == 1) continue;
        GR s{mpq_class(l), mpq_class(0)};
        for (int c = 0; c < A.cols; ++c) A.at(r, c) *= s;
        if (!b.empty()) b[r] *= s;
    }
}

struct Echelon {
    ExactMatrix M;          // reduced [A|b], Bareiss form
    std::vector<int> pivot_col; // per pivot row
    int rank = 0;
};

// Fraction-free forward elimination on the augmented matrix [A|b]
// (b may be empty for nullspace computations). Deterministic: columns are
// processed left to right and the first row with a nonzero entry pivots.
Echelon bareiss(ExactMatrix A, std::vector<GR> b) {
    const bool aug = !b.empty();
    clear_denominators(A, b);
    Echelon E;
    E.M = ExactMatrix(A.rows, A.cols + (aug ? 1 : 0));
    for (int r = 0; r < A.rows; ++r) {
        for (int c = 0; c < A.cols; ++c) E.M.at(r, c) = A.at(r, c);
        if (aug) E.M.at(r, A.cols) = b[r];
    }
    ExactMatrix& M = E.M;
    GR prev(1);
    int prow = 0;
    for (int col = 0; col < A.cols && prow < M.rows; ++col) {
        int sel = -1;
        for (int r = prow; r < M.rows; ++r)
            if (!M.at(r, col).is_zero()) {
                sel = r;
                break;
            }
        if (sel < 0) continue;
        if (sel != prow)
            for (int c = 0; c < M.cols; ++c) std::swap(M.at(sel, c), M.at(prow, c));
        const GR piv = M.at(prow, col);
        for (int r = prow + 1; r < M.rows; ++r) {
            const GR f = M.at(r, col);
            for (int c = col; c < M.cols; ++c)
                M.at(r, c) = (M.at(r, c) * piv - f * M.at(prow, c)) / prev;
            M.at(r, col) = GR();
        }
        prev = piv;
        E.pivot_col.push_back(col);
        ++prow;
    }
    E.rank = prow;
    return E;
}

} // namespace

std::optional<std::vector<GR>> solve_exact(ExactMatrix A, std::vector<GR> b) {
    const int n = A.cols;
    Echelon E = bareiss(std::move(A), std::move(b));
    ExactMatrix& M = E.M;
    // Inconsistency: a zero row of A with nonzero rhs.
    for (int r = E.rank; r < M.rows; ++r)
        if (!M.at(r, n).is_zero()) return std::nullopt;

    std::vector<GR> x(n);
    for (int p = E.rank - 1; p >= 0; --p) {
        int col = E.pivot_col[p];
        GR s = M.at(p, n);
        for (int c = col + 1; c < n; ++c)
            if (!x[c].is_zero()) s -= M.at(p, c) * x[c];
        x[col] = s / M.at(p, col);
    }
    return x;
}

std::vector<std::vector<GR>> nullspace_exact(ExactMatrix A) {
    const int n = A.cols;
    Echelon E = bareiss(std::move(A), {});
    ExactMatrix& M = E.M;
    std::vector<bool> is_pivot(n, false);
    for (int c : E.pivot_col) is_pivot[c] = true;

    std::vector<std::vector<GR>> basis;
    for (int fc = 0; fc < n; ++fc) {
        if (is_pivot[fc]) continue;
        std::vector<GR> v(n);
        v[fc] = GR(1);
        for (int p = E.rank - 1; p >= 0; --p) {
            int col = E.pivot_col[p];
            GR s;
            for (int c = col + 1; c < n; ++c)
                if (!v[c].is_zero()) s -= M.at(p, c) * v[c];
            v[col] = s / M.at(p, col);
        }
        basis.push_back(std::move(v));
    }
    return basis;
}

} // namespace curvegreen
