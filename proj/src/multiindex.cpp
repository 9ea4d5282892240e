#include "curvegreen/multiindex.hpp"

#include <algorithm>

namespace curvegreen {

namespace {
void gen(int d, int k, int pos, MultiIndex& cur, std::vector<MultiIndex>& out) {
    if (pos == d - 1) {
        cur.e[pos] = k;
        out.push_back(cur);
        return;
    }
    // Descending first entry gives lexicographic descending; we sort at the end.
    for (int v = 0; v <= k; ++v) {
        cur.e[pos] = v;
        gen(d, k - v, pos + 1, cur, out);
    }
    cur.e[pos] = 0;
}
} // namespace

// Monomial lex order: x^a precedes x^b when the first nonzero entry of a-b is
// positive, so e.g. (2,0), (1,1), (0,2) for d = k = 2.
static bool lex_before(const MultiIndex& a, const MultiIndex& b) { return b.e < a.e; }

std::vector<MultiIndex> monomial_basis(int d, int k) {
    std::vector<MultiIndex> out;
    MultiIndex cur(d);
    gen(d, k, 0, cur, out);
    std::sort(out.begin(), out.end(), lex_before);
    return out;
}

// Graded: |alpha| ascending, lex within a grade.
std::vector<MultiIndex> monomials_up_to(int d, int k) {
    std::vector<MultiIndex> out;
    for (int j = 0; j <= k; ++j) {
        auto b = monomial_basis(d, j);
        out.insert(out.end(), b.begin(), b.end());
    }
    return out;
}

std::uint64_t binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    std::uint64_t r = 1;
    for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / i;
    return r;
}

double multi_factorial(const MultiIndex& a) {
    double r = 1;
    for (int v : a.e)
        for (int i = 2; i <= v; ++i) r *= i;
    return r;
}

} // namespace curvegreen
