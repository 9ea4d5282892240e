#pragma once

#include <iosfwd>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "curvegreen/polymatrix.hpp"
#include "curvegreen/polynomial.hpp"
#include "curvegreen/testfunction.hpp"

namespace curvegreen {

/// Component layout of one side of an operator. Symmetric 2-tensors are
/// stored in reduced slot form (index pairs j <= k); a slot holds the
/// full-index tensor value and carries multiplicity weight 2 off the
/// diagonal, so full-index contractions are weighted slot sums.
struct SlotSpace {
    struct Block {
        enum Kind { Scalar, Vector, SymPairs } kind = Scalar;
        bool tracefree = false;
        int offset = 0;
        int count = 1;
        std::string name;
    };
    int d = 0;
    std::vector<Block> blocks;

    int total() const { return blocks.empty() ? 0 : blocks.back().offset + blocks.back().count; }
    std::vector<int> weights() const;
    std::vector<std::string> labels() const;
    bool has_tracefree() const {
        for (const auto& b : blocks)
            if (b.tracefree) return true;
        return false;
    }

    static SlotSpace scalar(int d, const std::string& name = "u");
    static SlotSpace vector(int d, const std::string& name = "u");
    static SlotSpace sym_pairs(int d, bool tracefree, const std::string& name = "h");

    /// Slot index of the (a, b) pair inside a SymPairs block (a, b zero-based).
    static int pair_slot(int d, int a, int b);
    /// Inverse of pair_slot for a SymPairs block of dimension d.
    static std::pair<int, int> slot_pair(int d, int slot);
};

/// Constant-coefficient matrix differential operator
///   (P u)^J = sum_{alpha,K} c^{(alpha,J)}_K d^alpha u^K,
/// with exact Q(i) coefficients. The adjoint is again a DiffOperator; the
/// grading data m_K always refers to the u-side component K.
class DiffOperator {
public:
    using Key = std::tuple<MultiIndex, int, int>; // (alpha, out j, in k)

    DiffOperator() = default;
    DiffOperator(int dim, SlotSpace out, SlotSpace in) : d_(dim), out_(std::move(out)), in_(std::move(in)) {}

    int dim() const { return d_; }
    int out_components() const { return out_.total(); }
    int in_components() const { return in_.total(); }
    const SlotSpace& out_space() const { return out_; }
    const SlotSpace& in_space() const { return in_; }
    const std::map<Key, GR>& coeffs() const { return c_; }
    const std::map<Key, GR>& lower_coeffs() const { return lower_; }
    const std::string& name() const { return name_; }

    void set_coeff(const MultiIndex& a, int j, int k, const GR& v);
    void add_coeff(const MultiIndex& a, int j, int k, const GR& v);

    /// True when this object is an adjoint (u-side components are the rows).
    bool is_adjoint_side() const { return u_side_out_; }

    /// Per u-side component K: max |alpha| over nonzero coefficients.
    std::vector<int> orders() const;
    int max_order() const;

    /// Formal adjoint w.r.t. the weighted L2 pairings (weights from the
    /// symmetric slot multiplicities). An involution. Trace-free operators
    /// carry an explicitly chosen adjoint representative.
    DiffOperator adjoint() const;

    /// Principal symbol: entry (j, k) keeps terms with |alpha| = m_{u-side K},
    /// times i^{|alpha|}. Rows are graded for adjoint-side operators, columns
    /// for data-side ones.
    HomPolyMatrix principal_symbol() const;

    /// Exact application to a Gaussian-polynomial test function (real
    /// coefficients only).
    TestFunction apply(const TestFunction& f) const;

    /// Exact application to a polynomial field.
    PolyField apply(const PolyField& f) const;

    /// Attach constant lower-order terms (each |alpha| < m_K for its K).
    DiffOperator with_lower_order(const std::map<Key, GR>& extra) const;

    /// Config-file round trip: `dim`, `rows`, `cols`, `term J K alpha... re im`.
    void dump(std::ostream& os) const;
    static DiffOperator load(std::istream& is);

    static DiffOperator with_explicit_adjoint(DiffOperator fwd, DiffOperator adj);

private:
    DiffOperator generic_adjoint() const;

    int d_ = 0;
    SlotSpace out_, in_;
    std::map<Key, GR> c_;
    bool u_side_out_ = false;
    std::string name_;
    std::shared_ptr<const DiffOperator> explicit_adj_; // principal-part override
    std::map<Key, GR> lower_; // lower-order part (also present in c_)

    friend DiffOperator builtin(const std::string&, int);
};

/// Names of the built-in operators.
std::vector<std::string> zoo_names();

/// Built-in operator zoo; throws std::invalid_argument with the dimension
/// threshold in the message when d is below the operator's threshold.
DiffOperator builtin(const std::string& name, int d);

/// Project the slot components of f onto the operator's input constraint
/// (removes traces of trace-free symmetric blocks); no-op otherwise.
TestFunction project_input(const DiffOperator& op, const TestFunction& f);

/// Random input respecting the operator's input constraint.
TestFunction random_input(const DiffOperator& op, std::mt19937_64& rng, int pdeg = 2, double c = 1.0,
                          double smin = 0.4, double smax = 0.9);

} // namespace curvegreen
