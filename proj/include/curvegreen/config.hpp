#pragma once

#include <cstdint>
#include <iosfwd>

#include "curvegreen/solve_verify.hpp"

namespace curvegreen {

struct BumpSpec {
    int component = 0;
    double amplitude = 1.0;
    Vec center;
    double sigma = 0.3;
};

struct ConfigError : std::runtime_error {
    int line;
    ConfigError(int l, const std::string& what) : std::runtime_error(what), line(l) {}
};

/// Flat key-value run configuration with repeated [bump] sections. Identical
/// config + seed produce bit-identical outputs.
struct RunConfig {
    std::string op_name = "divergence";
    std::string op_file;
    int dim = 2;

    std::string weight_kind = "bogovskii"; // bogovskii | conic | conic_uniform
    Vec weight_center;
    double weight_radius = 0.5;
    Vec cone_axis;
    double cone_aperture = 0.5;
    int profile_p = 8;

    std::string curve = "segment";
    Vec domain_lo, domain_hi;
    QuadratureSpec quad;
    double tol = 1e-6;
    std::uint64_t seed = 12345;
    int threads = 0;
    std::string out_dir = ".";
    int n0_max = -1; // -1: default max m_K + 4
    int trials = 500;
    std::string lower_order; // e.g. "B=(0,x1)"
    std::vector<BumpSpec> bumps;

    static RunConfig from_file(const std::string& path);
    void apply_line(const std::string& line, int lineno); // single key = value

    DiffOperator load_operator() const;
    Weight make_weight() const;
    TestFunction make_f(int ncomp) const;
    Vec default_center() const { return Vec(dim, 0.0); }
    std::string canonical() const;
};

/// Parse "B=(expr,...)" with polynomial entries like "0", "x1", "2*x1*x2".
std::vector<PolyD> parse_lower_order(const std::string& spec, int d);

/// CSV helpers (deterministic %.17g formatting).
std::string fmt_g17(double v);

/// Text dump of an augmented system: variable list with degrees, then
/// B/C entries as `B i A A' value` / `C i A gamma... K value`.
void dump_system(const AugmentedSystem& sys, std::ostream& os);

} // namespace curvegreen
