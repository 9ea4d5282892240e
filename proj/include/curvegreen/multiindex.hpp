#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace curvegreen {

/// Multi-index alpha in Z_{>=0}^d. Ordered lexicographically (strict total
/// order on distinct values); used as a map key throughout.
struct MultiIndex {
    std::vector<int> e;

    MultiIndex() = default;
    explicit MultiIndex(int d) : e(d, 0) {}
    MultiIndex(std::initializer_list<int> l) : e(l) {}

    int dim() const { return static_cast<int>(e.size()); }
    int order() const {
        int s = 0;
        for (int v : e) s += v;
        return s;
    }
    int operator[](int i) const { return e[i]; }
    int& operator[](int i) { return e[i]; }

    MultiIndex plus(int axis) const {
        MultiIndex r = *this;
        r.e[axis] += 1;
        return r;
    }
    MultiIndex minus(int axis) const {
        MultiIndex r = *this;
        r.e[axis] -= 1;
        return r;
    }
    MultiIndex operator+(const MultiIndex& o) const {
        MultiIndex r = *this;
        for (size_t i = 0; i < e.size(); ++i) r.e[i] += o.e[i];
        return r;
    }
    /// Componentwise a <= b (divisibility of monomials).
    bool leq(const MultiIndex& o) const {
        for (size_t i = 0; i < e.size(); ++i)
            if (e[i] > o.e[i]) return false;
        return true;
    }
    MultiIndex operator-(const MultiIndex& o) const {
        MultiIndex r = *this;
        for (size_t i = 0; i < e.size(); ++i) r.e[i] -= o.e[i];
        return r;
    }

    friend bool operator==(const MultiIndex& a, const MultiIndex& b) { return a.e == b.e; }
    friend bool operator!=(const MultiIndex& a, const MultiIndex& b) { return !(a.e == b.e); }
    friend bool operator<(const MultiIndex& a, const MultiIndex& b) { return a.e < b.e; }

    static MultiIndex unit(int d, int axis) {
        MultiIndex r(d);
        r.e[axis] = 1;
        return r;
    }

    std::string str() const {
        std::string s = "(";
        for (size_t i = 0; i < e.size(); ++i) s += (i ? "," : "") + std::to_string(e[i]);
        return s + ")";
    }
};

/// All multi-indices in dimension d with |alpha| = k, lexicographically sorted.
/// Count is C(d+k-1, k).
std::vector<MultiIndex> monomial_basis(int d, int k);

/// All multi-indices with |alpha| <= k, lexicographically sorted.
std::vector<MultiIndex> monomials_up_to(int d, int k);

/// Binomial coefficient as unsigned 64-bit (small arguments only).
std::uint64_t binomial(int n, int k);

/// alpha! (product of factorials of the entries).
double multi_factorial(const MultiIndex& a);

} // namespace curvegreen
