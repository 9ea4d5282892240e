#include "curvegreen/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace curvegreen {

namespace {

Vec parse_vec(const std::string& s) {
    Vec v;
    std::istringstream ss(s);
    double x;
    while (ss >> x) v.push_back(x);
    return v;
}

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

} // namespace

void RunConfig::apply_line(const std::string& raw, int lineno) {
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#') return;
    size_t eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(lineno, "expected key = value: '" + line + "'");
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (key == "op") op_name = val;
    else if (key == "op_file") op_file = val;
    else if (key == "dim") dim = std::stoi(val);
    else if (key == "weight") weight_kind = val;
    else if (key == "weight_center") weight_center = parse_vec(val);
    else if (key == "weight_radius") weight_radius = std::stod(val);
    else if (key == "cone_axis") cone_axis = parse_vec(val);
    else if (key == "cone_aperture") cone_aperture = std::stod(val);
    else if (key == "profile_p") profile_p = std::stoi(val);
    else if (key == "curve") curve = val;
    else if (key == "domain_lo") domain_lo = parse_vec(val);
    else if (key == "domain_hi") domain_hi = parse_vec(val);
    else if (key == "outer_n") quad.outer_n = std::stoi(val);
    else if (key == "polar_radius") quad.polar_radius = std::stod(val);
    else if (key == "polar_radial") quad.polar_radial = std::stoi(val);
    else if (key == "polar_angular") quad.polar_angular = std::stoi(val);
    else if (key == "tol") tol = std::stod(val);
    else if (key == "seed") seed = std::stoull(val);
    else if (key == "threads") threads = std::stoi(val);
    else if (key == "out") out_dir = val;
    else if (key == "n0_max") n0_max = std::stoi(val);
    else if (key == "trials") trials = std::stoi(val);
    else if (key == "lower_order") lower_order = val;
    else throw ConfigError(lineno, "unknown key '" + key + "'");
}

RunConfig RunConfig::from_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError(0, "cannot open config file " + path);
    RunConfig cfg;
    std::string line;
    int lineno = 0;
    bool in_bump = false;
    BumpSpec bump;
    while (std::getline(is, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t == "[bump]") {
            if (in_bump) throw ConfigError(lineno, "nested [bump]");
            in_bump = true;
            bump = BumpSpec{};
            continue;
        }
        if (t == "[/bump]") {
            if (!in_bump) throw ConfigError(lineno, "[/bump] without [bump]");
            in_bump = false;
            cfg.bumps.push_back(bump);
            continue;
        }
        if (t.empty() || t[0] == '#') continue;
        if (in_bump) {
            size_t eq = t.find('=');
            if (eq == std::string::npos) throw ConfigError(lineno, "expected key = value in [bump]");
            std::string key = trim(t.substr(0, eq)), val = trim(t.substr(eq + 1));
            if (key == "component") bump.component = std::stoi(val);
            else if (key == "amplitude") bump.amplitude = std::stod(val);
            else if (key == "center") bump.center = parse_vec(val);
            else if (key == "sigma") bump.sigma = std::stod(val);
            else throw ConfigError(lineno, "unknown bump key '" + key + "'");
        } else {
            cfg.apply_line(t, lineno);
        }
    }
    return cfg;
}

DiffOperator RunConfig::load_operator() const {
    if (!op_file.empty()) {
        std::ifstream is(op_file);
        if (!is) throw ConfigError(0, "cannot open operator file " + op_file);
        return DiffOperator::load(is);
    }
    return builtin(op_name, dim);
}

Weight RunConfig::make_weight() const {
    if (weight_kind == "bogovskii") {
        Vec c = weight_center.empty() ? Vec(dim, 1.5) : weight_center;
        return Weight::bogovskii(dim, c, weight_radius, profile_p);
    }
    if (weight_kind == "conic") {
        Vec a = cone_axis.empty() ? ([&] {
            Vec v(dim, 0.0);
            v[0] = 1.0;
            return v;
        }()) : cone_axis;
        return Weight::conic_cap(dim, a, cone_aperture, profile_p);
    }
    if (weight_kind == "conic_uniform") return Weight::conic_uniform(dim);
    throw ConfigError(0, "unknown weight kind '" + weight_kind + "'");
}

TestFunction RunConfig::make_f(int ncomp) const {
    TestFunction f(dim, ncomp);
    for (const auto& b : bumps) {
        if (b.component < 0 || b.component >= ncomp)
            throw ConfigError(0, "bump component out of range");
        GaussTerm t;
        t.mu = b.center.empty() ? Vec(dim, 0.0) : b.center;
        t.sigma = b.sigma;
        t.poly = PolyD::constant(dim, b.amplitude);
        f.comp[b.component].terms.push_back(t);
    }
    return f;
}

std::string RunConfig::canonical() const {
    std::ostringstream os;
    os << "op = " << op_name << "\n";
    if (!op_file.empty()) os << "op_file = " << op_file << "\n";
    os << "dim = " << dim << "\n";
    os << "weight = " << weight_kind << "\n";
    os << "seed = " << seed << "\n";
    os << "tol = " << fmt_g17(tol) << "\n";
    for (const auto& b : bumps) {
        os << "[bump]\ncomponent = " << b.component << "\namplitude = " << fmt_g17(b.amplitude)
           << "\nsigma = " << fmt_g17(b.sigma) << "\n[/bump]\n";
    }
    return os.str();
}

std::vector<PolyD> parse_lower_order(const std::string& spec, int d) {
    std::string s = trim(spec);
    if (s.rfind("B=", 0) == 0) s = s.substr(2);
    s = trim(s);
    if (s.size() < 2 || s.front() != '(' || s.back() != ')')
        throw std::invalid_argument("lower-order spec must look like B=(expr,...)");
    s = s.substr(1, s.size() - 2);
    std::vector<std::string> parts;
    std::string cur;
    for (char c : s) {
        if (c == ',') {
            parts.push_back(cur);
            cur.clear();
        } else
            cur += c;
    }
    parts.push_back(cur);
    if (static_cast<int>(parts.size()) != d)
        throw std::invalid_argument("lower-order spec needs " + std::to_string(d) + " entries");

    auto parse_term = [&](const std::string& term) {
        PolyD p = PolyD::constant(d, 1.0);
        std::string tok;
        std::istringstream ss(term);
        double coef = 1.0;
        MultiIndex a(d);
        std::string piece;
        for (char c : term + "*") {
            if (c == '*') {
                piece = trim(piece);
                if (piece.empty()) continue;
                if (piece[0] == 'x') {
                    int idx = std::stoi(piece.substr(1));
                    if (idx < 1 || idx > d) throw std::invalid_argument("bad variable " + piece);
                    a[idx - 1] += 1;
                } else {
                    coef *= std::stod(piece);
                }
                piece.clear();
            } else
                piece += c;
        }
        PolyD r(d);
        r.add(a, coef);
        return r;
    };

    std::vector<PolyD> out;
    for (auto& e : parts) {
        std::string expr = trim(e);
        PolyD p(d);
        if (expr.empty() || expr == "0") {
            out.push_back(p);
            continue;
        }
        // Split on top-level + and - (keep sign with the term).
        std::vector<std::string> terms;
        std::string cur2;
        for (size_t i = 0; i < expr.size(); ++i) {
            char c = expr[i];
            if ((c == '+' || c == '-') && i > 0) {
                terms.push_back(cur2);
                cur2 = (c == '-') ? "-" : "";
            } else
                cur2 += c;
        }
        terms.push_back(cur2);
        for (auto& t : terms) {
            std::string tt = trim(t);
            double sgn = 1.0;
            if (!tt.empty() && tt[0] == '-') {
                sgn = -1.0;
                tt = tt.substr(1);
            }
            if (!tt.empty() && tt[0] == '+') tt = tt.substr(1);
            if (tt.empty()) continue;
            p = p + parse_term(tt) * sgn;
        }
        out.push_back(p);
    }
    return out;
}

std::string fmt_g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void dump_system(const AugmentedSystem& sys, std::ostream& os) {
    os << "system " << sys.name << "\n";
    os << "dim " << sys.d << "\n";
    os << "r0 " << sys.r0 << "\n";
    os << "vars " << sys.size() << "\n";
    for (const auto& v : sys.vars) os << "var " << v.name << ' ' << v.degree << "\n";
    for (int i = 0; i < sys.d; ++i) {
        for (const auto& [key, v] : sys.B[i])
            os << "B " << i + 1 << ' ' << sys.vars[key.first].name << ' ' << sys.vars[key.second].name << ' '
               << v.re.get_num().get_str() << '/' << v.re.get_den().get_str() << "\n";
        for (const auto& [key, fn] : sys.B_fn[i])
            os << "B " << i + 1 << ' ' << sys.vars[std::get<0>(key)].name << ' '
               << sys.vars[std::get<1>(key)].name << " <callable>\n";
    }
    for (int i = 0; i < sys.d; ++i)
        for (const auto& [key, v] : sys.C[i]) {
            const auto& [A, gamma, K] = key;
            os << "C " << i + 1 << ' ' << sys.vars[A].name << ' ';
            for (int j = 0; j < sys.d; ++j) os << gamma[j] << ' ';
            os << K << ' ' << v.re.get_num().get_str() << '/' << v.re.get_den().get_str() << "\n";
        }
}

} // namespace curvegreen
