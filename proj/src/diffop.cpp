#include "curvegreen/diffop.hpp"

#include <istream>
#include <memory>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace curvegreen {

std::vector<int> SlotSpace::weights() const {
    std::vector<int> w(total(), 1);
    for (const auto& b : blocks)
        if (b.kind == Block::SymPairs)
            for (int s = 0; s < b.count; ++s) {
                auto [a, c] = slot_pair(d, s);
                w[b.offset + s] = (a == c) ? 1 : 2;
            }
    return w;
}

std::vector<std::string> SlotSpace::labels() const {
    std::vector<std::string> L(total());
    for (const auto& b : blocks) {
        if (b.kind == Block::Scalar) {
            L[b.offset] = b.name;
        } else if (b.kind == Block::Vector) {
            for (int i = 0; i < b.count; ++i) L[b.offset + i] = b.name + std::to_string(i + 1);
        } else {
            for (int s = 0; s < b.count; ++s) {
                auto [a, c] = slot_pair(d, s);
                L[b.offset + s] = b.name + std::to_string(a + 1) + std::to_string(c + 1);
            }
        }
    }
    return L;
}

SlotSpace SlotSpace::scalar(int d, const std::string& name) {
    SlotSpace s;
    s.d = d;
    s.blocks.push_back({Block::Scalar, false, 0, 1, name});
    return s;
}
SlotSpace SlotSpace::vector(int d, const std::string& name) {
    SlotSpace s;
    s.d = d;
    s.blocks.push_back({Block::Vector, false, 0, d, name});
    return s;
}
SlotSpace SlotSpace::sym_pairs(int d, bool tracefree, const std::string& name) {
    SlotSpace s;
    s.d = d;
    s.blocks.push_back({Block::SymPairs, tracefree, 0, d * (d + 1) / 2, name});
    return s;
}

int SlotSpace::pair_slot(int d, int a, int b) {
    if (a > b) std::swap(a, b);
    return a * d - a * (a - 1) / 2 + (b - a);
}

std::pair<int, int> SlotSpace::slot_pair(int d, int slot) {
    for (int a = 0; a < d; ++a) {
        int row = d - a;
        if (slot < row) return {a, a + slot};
        slot -= row;
    }
    throw std::out_of_range("slot_pair");
}

namespace {
SlotSpace concat(const SlotSpace& a, const SlotSpace& b) {
    SlotSpace s = a;
    int off = a.total();
    for (auto blk : b.blocks) {
        blk.offset += off;
        s.blocks.push_back(blk);
    }
    return s;
}
} // namespace

void DiffOperator::set_coeff(const MultiIndex& a, int j, int k, const GR& v) {
    if (v.is_zero())
        c_.erase({a, j, k});
    else
        c_[{a, j, k}] = v;
}

void DiffOperator::add_coeff(const MultiIndex& a, int j, int k, const GR& v) {
    auto it = c_.find({a, j, k});
    GR nv = (it == c_.end() ? GR() : it->second) + v;
    set_coeff(a, j, k, nv);
}

std::vector<int> DiffOperator::orders() const {
    std::vector<int> m(u_side_out_ ? out_components() : in_components(), 0);
    for (const auto& [key, v] : c_) {
        const auto& [a, j, k] = key;
        int idx = u_side_out_ ? j : k;
        m[idx] = std::max(m[idx], a.order());
    }
    return m;
}

int DiffOperator::max_order() const {
    int mm = 0;
    for (int v : orders()) mm = std::max(mm, v);
    return mm;
}

DiffOperator DiffOperator::generic_adjoint() const {
    DiffOperator A(d_, in_, out_);
    A.u_side_out_ = !u_side_out_;
    A.name_ = name_ + "_adj";
    auto wout = out_.weights();
    auto win = in_.weights();
    for (const auto& [key, v] : c_) {
        const auto& [a, j, k] = key;
        GR f = GR::frac(wout[j], win[k]);
        GR t = f * GR::i_pow(2 * a.order()) * v.conj(); // (-1)^{|a|} conj(v)
        A.add_coeff(a, k, j, t);
    }
    return A;
}

DiffOperator DiffOperator::adjoint() const {
    DiffOperator A;
    if (explicit_adj_) {
        A = *explicit_adj_; // complete adjoint table, lower-order included
    } else {
        A = generic_adjoint();
        DiffOperator low(d_, out_, in_);
        low.c_ = lower_;
        A.lower_ = low.generic_adjoint().c_;
    }
    A.u_side_out_ = !u_side_out_;
    // Back table so the adjoint is an exact involution.
    A.explicit_adj_ = std::make_shared<DiffOperator>(*this);
    return A;
}

HomPolyMatrix DiffOperator::principal_symbol() const {
    auto m = orders();
    std::vector<int> rd(out_components(), 0), cd(in_components(), 0);
    if (u_side_out_)
        rd = m;
    else
        cd = m;
    HomPolyMatrix S(d_, out_components(), in_components(), rd, cd);
    for (const auto& [key, v] : c_) {
        const auto& [a, j, k] = key;
        int mk = u_side_out_ ? m[j] : m[k];
        if (a.order() != mk) continue;
        S.add(j, k, a, GR::i_pow(a.order()) * v);
    }
    return S;
}

TestFunction DiffOperator::apply(const TestFunction& f) const {
    if (f.components() != in_components())
        throw std::invalid_argument("apply: expected " + std::to_string(in_components()) + " components, got " +
                                    std::to_string(f.components()));
    TestFunction g(d_, out_components());
    for (const auto& [key, v] : c_) {
        const auto& [a, j, k] = key;
        if (!v.is_real()) throw std::invalid_argument("apply: complex coefficient on a real test function");
        g.comp[j] += f.comp[k].derivative(a).scaled(v.re.get_d());
    }
    return g;
}

PolyField DiffOperator::apply(const PolyField& f) const {
    if (static_cast<int>(f.comp.size()) != in_components())
        throw std::invalid_argument("apply(PolyField): component mismatch");
    PolyField g;
    g.comp.assign(out_components(), PolyQ(d_));
    for (const auto& [key, v] : c_) {
        const auto& [a, j, k] = key;
        g.comp[j] = g.comp[j] + f.comp[k].derivative(a) * v;
    }
    return g;
}

DiffOperator DiffOperator::with_lower_order(const std::map<Key, GR>& extra) const {
    auto m = orders();
    DiffOperator R = *this;
    for (const auto& [key, v] : extra) {
        const auto& [a, j, k] = key;
        int mk = u_side_out_ ? m[j] : m[k];
        if (a.order() >= mk)
            throw std::invalid_argument("lower-order term of order " + std::to_string(a.order()) +
                                        " >= m_K = " + std::to_string(mk));
        R.add_coeff(a, j, k, v);
        R.lower_[key] = v;
    }
    if (explicit_adj_) {
        // Extend the explicit adjoint with the generic adjoint of the new terms.
        DiffOperator low(d_, out_, in_);
        for (const auto& [key, v] : extra) low.c_[key] = v;
        DiffOperator lowadj = low.generic_adjoint();
        auto A = std::make_shared<DiffOperator>(*explicit_adj_);
        for (const auto& [key, v] : lowadj.c_) {
            const auto& [a, k, j] = key;
            A->add_coeff(a, k, j, v);
            A->lower_[key] = v;
        }
        R.explicit_adj_ = A;
    }
    return R;
}

void DiffOperator::dump(std::ostream& os) const {
    os << "dim " << d_ << "\n";
    os << "rows " << out_components() << "\n";
    os << "cols " << in_components() << "\n";
    for (const auto& [key, v] : c_) {
        const auto& [a, j, k] = key;
        os << "term " << j << ' ' << k;
        for (int i = 0; i < d_; ++i) os << ' ' << a[i];
        os << ' ' << v.re.get_num().get_str() << '/' << v.re.get_den().get_str() << ' '
           << v.im.get_num().get_str() << '/' << v.im.get_den().get_str() << "\n";
    }
}

DiffOperator DiffOperator::load(std::istream& is) {
    int dim = -1, rows = -1, cols = -1;
    std::vector<std::tuple<int, int, MultiIndex, GR>> terms;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ss(line);
        std::string tag;
        ss >> tag;
        if (tag == "dim")
            ss >> dim;
        else if (tag == "rows")
            ss >> rows;
        else if (tag == "cols")
            ss >> cols;
        else if (tag == "term") {
            if (dim <= 0) throw std::runtime_error("operator file: dim must precede terms (line " +
                                                   std::to_string(lineno) + ")");
            int j, k;
            ss >> j >> k;
            MultiIndex a(dim);
            for (int i = 0; i < dim; ++i) ss >> a[i];
            std::string res, ims;
            ss >> res >> ims;
            if (!ss) throw std::runtime_error("operator file: bad term at line " + std::to_string(lineno));
            GR v{mpq_class(res), mpq_class(ims)};
            v.re.canonicalize();
            v.im.canonicalize();
            terms.emplace_back(j, k, a, v);
        } else {
            throw std::runtime_error("operator file: unknown tag '" + tag + "' at line " +
                                     std::to_string(lineno));
        }
    }
    if (dim <= 0 || rows <= 0 || cols <= 0) throw std::runtime_error("operator file: missing dim/rows/cols");
    DiffOperator P(dim, SlotSpace::vector(dim, "f"), SlotSpace::vector(dim, "u"));
    P.out_.blocks[0].count = rows;
    P.in_.blocks[0].count = cols;
    for (const auto& [j, k, a, v] : terms) P.set_coeff(a, j, k, v);
    P.name_ = "custom";
    return P;
}

DiffOperator DiffOperator::with_explicit_adjoint(DiffOperator fwd, DiffOperator adj) {
    adj.u_side_out_ = true;
    fwd.explicit_adj_ = std::make_shared<DiffOperator>(std::move(adj));
    return fwd;
}

namespace {

void require_dim(const std::string& name, int d, int dmin) {
    if (d < dmin)
        throw std::invalid_argument(name + " requires d >= " + std::to_string(dmin));
}

void add_double_divergence(DiffOperator& P, int d, int out_row, int in_off) {
    for (int a = 0; a < d; ++a)
        for (int b = a; b < d; ++b) {
            MultiIndex al = MultiIndex::unit(d, a) + MultiIndex::unit(d, b);
            P.add_coeff(al, out_row, in_off + SlotSpace::pair_slot(d, a, b), GR(a == b ? 1 : 2));
        }
}

void add_symmetric_divergence(DiffOperator& P, int d, int out_off, int in_off) {
    // (P h)^j = sum_k d_k h^{jk}; each full index pair touches its slot once.
    for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k)
            P.add_coeff(MultiIndex::unit(d, k), out_off + j, in_off + SlotSpace::pair_slot(d, j, k), GR(1));
}

// Trace-free Hessian representative d_a d_b phi - delta_ab (1/d) Lap phi.
void add_tf_hessian_adjoint(DiffOperator& A, int d, int slot_off, int phi_col) {
    for (int a = 0; a < d; ++a)
        for (int b = a; b < d; ++b) {
            int s = slot_off + SlotSpace::pair_slot(d, a, b);
            A.add_coeff(MultiIndex::unit(d, a) + MultiIndex::unit(d, b), s, phi_col, GR(1));
            if (a == b)
                for (int l = 0; l < d; ++l) {
                    MultiIndex ll = MultiIndex::unit(d, l) + MultiIndex::unit(d, l);
                    A.add_coeff(ll, s, phi_col, GR(mpq_class(-1, d)));
                }
        }
}

// Conformal Killing representative -1/2 (d_a w_b + d_b w_a) + delta_ab (1/d) div w.
void add_conf_killing_adjoint(DiffOperator& A, int d, int slot_off, int om_off) {
    for (int a = 0; a < d; ++a)
        for (int b = a; b < d; ++b) {
            int s = slot_off + SlotSpace::pair_slot(d, a, b);
            A.add_coeff(MultiIndex::unit(d, a), s, om_off + b, GR(mpq_class(-1, 2)));
            A.add_coeff(MultiIndex::unit(d, b), s, om_off + a, GR(mpq_class(-1, 2)));
            if (a == b)
                for (int l = 0; l < d; ++l)
                    A.add_coeff(MultiIndex::unit(d, l), s, om_off + l, GR(mpq_class(1, d)));
        }
}

} // namespace

std::vector<std::string> zoo_names() {
    return {"divergence",           "double_divergence",           "tracefree_double_divergence",
            "symmetric_divergence", "tracefree_symmetric_divergence", "einstein_constraint",
            "einstein_constraint_cmc"};
}

DiffOperator builtin(const std::string& name, int d) {
    if (d < 1) throw std::invalid_argument("dimension must be >= 1");
    DiffOperator P;
    if (name == "divergence") {
        P = DiffOperator(d, SlotSpace::scalar(d, "f"), SlotSpace::vector(d, "u"));
        for (int j = 0; j < d; ++j) P.add_coeff(MultiIndex::unit(d, j), 0, j, GR(1));
    } else if (name == "double_divergence") {
        P = DiffOperator(d, SlotSpace::scalar(d, "f"), SlotSpace::sym_pairs(d, false, "h"));
        add_double_divergence(P, d, 0, 0);
    } else if (name == "tracefree_double_divergence") {
        require_dim(name, d, 2);
        P = DiffOperator(d, SlotSpace::scalar(d, "f"), SlotSpace::sym_pairs(d, true, "h"));
        add_double_divergence(P, d, 0, 0);
        DiffOperator A(d, SlotSpace::sym_pairs(d, true, "h"), SlotSpace::scalar(d, "phi"));
        add_tf_hessian_adjoint(A, d, 0, 0);
        P = DiffOperator::with_explicit_adjoint(std::move(P), std::move(A));
    } else if (name == "symmetric_divergence") {
        P = DiffOperator(d, SlotSpace::vector(d, "f"), SlotSpace::sym_pairs(d, false, "h"));
        add_symmetric_divergence(P, d, 0, 0);
    } else if (name == "tracefree_symmetric_divergence") {
        require_dim(name, d, 3);
        P = DiffOperator(d, SlotSpace::vector(d, "f"), SlotSpace::sym_pairs(d, true, "h"));
        add_symmetric_divergence(P, d, 0, 0);
        DiffOperator A(d, SlotSpace::sym_pairs(d, true, "h"), SlotSpace::vector(d, "omega"));
        add_conf_killing_adjoint(A, d, 0, 0);
        P = DiffOperator::with_explicit_adjoint(std::move(P), std::move(A));
    } else if (name == "einstein_constraint") {
        SlotSpace out = concat(SlotSpace::scalar(d, "H"), SlotSpace::vector(d, "M"));
        SlotSpace in = concat(SlotSpace::sym_pairs(d, false, "h"), SlotSpace::sym_pairs(d, false, "pi"));
        P = DiffOperator(d, out, in);
        int np = d * (d + 1) / 2;
        add_double_divergence(P, d, 0, 0);
        add_symmetric_divergence(P, d, 1, np);
    } else if (name == "einstein_constraint_cmc") {
        require_dim(name, d, 3);
        SlotSpace out = concat(SlotSpace::scalar(d, "H"), SlotSpace::vector(d, "M"));
        SlotSpace in = concat(SlotSpace::sym_pairs(d, false, "h"), SlotSpace::sym_pairs(d, true, "pi"));
        P = DiffOperator(d, out, in);
        int np = d * (d + 1) / 2;
        add_double_divergence(P, d, 0, 0);
        add_symmetric_divergence(P, d, 1, np);
        SlotSpace ain = concat(SlotSpace::scalar(d, "phi"), SlotSpace::vector(d, "omega"));
        DiffOperator A(d, in, ain);
        for (int a = 0; a < d; ++a)
            for (int b = a; b < d; ++b)
                A.add_coeff(MultiIndex::unit(d, a) + MultiIndex::unit(d, b),
                            SlotSpace::pair_slot(d, a, b), 0, GR(1));
        add_conf_killing_adjoint(A, d, np, 1);
        P = DiffOperator::with_explicit_adjoint(std::move(P), std::move(A));
    } else {
        throw std::invalid_argument("unknown operator '" + name + "'");
    }
    P.name_ = name;
    return P;
}

TestFunction project_input(const DiffOperator& op, const TestFunction& f) {
    TestFunction g = f;
    const int d = op.dim();
    for (const auto& blk : op.in_space().blocks) {
        if (blk.kind != SlotSpace::Block::SymPairs || !blk.tracefree) continue;
        TFComponent tr;
        for (int a = 0; a < d; ++a) tr += g.comp[blk.offset + SlotSpace::pair_slot(d, a, a)];
        for (int a = 0; a < d; ++a) {
            int s = blk.offset + SlotSpace::pair_slot(d, a, a);
            g.comp[s] += tr.scaled(-1.0 / d);
        }
    }
    return g;
}

TestFunction random_input(const DiffOperator& op, std::mt19937_64& rng, int pdeg, double c, double smin,
                          double smax) {
    TestFunction f = random_function(rng, op.dim(), op.in_components(), pdeg, c, smin, smax);
    return project_input(op, f);
}

} // namespace curvegreen
