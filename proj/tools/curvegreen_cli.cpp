#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <omp.h>

#include "curvegreen/config.hpp"
#include "curvegreen/parallel.hpp"

using namespace curvegreen;
namespace fs = std::filesystem;

namespace {

struct Global {
    RunConfig cfg;
    std::string config_path;

    void finalize() {
        if (!config_path.empty()) {
            RunConfig file_cfg = RunConfig::from_file(config_path);
            // CLI flags already merged into cfg by callbacks; file provides the base.
            std::swap(cfg, file_cfg);
            // Re-apply overriding flags below via the stored overrides.
        }
        if (cfg.threads > 0) omp_set_num_threads(cfg.threads);
    }

    std::ofstream open_out(const std::string& name) const {
        fs::create_directories(cfg.out_dir);
        std::ofstream os(fs::path(cfg.out_dir) / name);
        os.precision(17);
        return os;
    }
};

std::string verdict_json(const FcVerdict& v, const std::string& op, int dim, double elapsed) {
    std::ostringstream os;
    os.precision(17);
    os << "{\"op\":\"" << op << "\",\"dim\":" << dim << ",\"verdict\":\"";
    os << (v.kind == FcVerdict::Certified ? "certified"
                                          : (v.kind == FcVerdict::Falsified ? "falsified" : "inconclusive"));
    os << "\"";
    if (v.certificate) os << ",\"N0\":" << v.certificate->N0;
    if (v.kind != FcVerdict::Certified) os << ",\"n0_searched\":" << v.n0_searched;
    if (v.witness) {
        os << ",\"witness_xi\":[";
        for (size_t i = 0; i < v.witness->xi.size(); ++i)
            os << (i ? "," : "") << "[" << fmt_g17(v.witness->xi[i].real()) << ","
               << fmt_g17(v.witness->xi[i].imag()) << "]";
        os << "],\"witness_residual\":" << fmt_g17(v.witness->residual)
           << ",\"witness_exact\":" << (v.witness->exact ? "true" : "false");
    }
    if (v.min_singular >= 0) os << ",\"min_singular_seen\":" << fmt_g17(v.min_singular);
    os << ",\"seconds\":" << fmt_g17(elapsed) << "}";
    return os.str();
}

int cmd_fc(Global& g) {
    auto t0 = std::chrono::steady_clock::now();
    DiffOperator P;
    try {
        P = g.cfg.load_operator();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    DiffOperator adj = P.adjoint();
    HomPolyMatrix ps = adj.principal_symbol();
    int cap = g.cfg.n0_max > 0 ? g.cfg.n0_max : default_n0_max(ps);
    std::mt19937_64 rng(g.cfg.seed);
    FcVerdict v = decide_fc(ps, cap, g.cfg.trials, rng);
    double el = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    auto os = g.open_out("verdict.json");
    std::string j = verdict_json(v, P.name(), g.cfg.dim, el);
    os << j << "\n";
    std::cout << j << "\n";
    if (v.certificate) {
        auto cs = g.open_out("certificate.txt");
        v.certificate->dump(cs);
    }
    switch (v.kind) {
    case FcVerdict::Certified: return 0;
    case FcVerdict::Falsified: return 2;
    default: return 3;
    }
}

int cmd_augment(Global& g, const std::string& special, bool maximal) {
    AugmentedSystem S;
    try {
        if (!special.empty()) {
            if (!g.cfg.lower_order.empty()) {
                if (special != "divergence")
                    throw std::invalid_argument("callable lower-order terms are supported for the "
                                                "divergence system only");
                S = divergence_system_with_B(g.cfg.dim, parse_lower_order(g.cfg.lower_order, g.cfg.dim));
            } else {
                S = special_system(special, g.cfg.dim);
            }
        } else if (maximal) {
            DiffOperator P = g.cfg.load_operator();
            HomPolyMatrix ps = P.adjoint().principal_symbol();
            int cap = g.cfg.n0_max > 0 ? g.cfg.n0_max : default_n0_max(ps);
            auto cert = find_certificate(ps, cap);
            if (!cert) {
                std::cerr << "FC inconclusive up to N0 = " << cap << "; refusing to build a maximal system\n";
                return 3;
            }
            S = maximal_from_certificate(P, *cert);
        } else {
            std::cerr << "augment: need --special NAME or --maximal\n";
            return 1;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    std::mt19937_64 rng(g.cfg.seed);
    std::uniform_real_distribution<double> U(-1.5, 1.5);
    std::vector<Vec> samples;
    for (int t = 0; t < 20; ++t) {
        Vec x(g.cfg.dim);
        for (auto& v : x) v = U(rng);
        samples.push_back(x);
    }
    auto integ = is_completely_integrable(S, samples);

    auto os = g.open_out("system.txt");
    dump_system(S, os);

    std::ostringstream rep;
    rep.precision(17);
    rep << "{\"system\":\"" << S.name << "\",\"size\":" << S.size() << ",\"N0\":" << S.N0()
        << ",\"integrable\":" << (integ.integrable ? "true" : "false")
        << ",\"curvature_exact\":" << (integ.exact ? "true" : "false")
        << ",\"max_curvature\":" << fmt_g17(integ.max_curvature);
    try {
        auto cb = cokernel_basis(S.op.name(), g.cfg.dim);
        rep << ",\"cokernel_dim\":" << cb.dimension();
    } catch (const std::exception&) {
        rep << ",\"cokernel_dim\":null";
    }
    rep << "}";
    auto ros = g.open_out("augment.json");
    ros << rep.str() << "\n";
    std::cout << rep.str() << "\n";
    return 0;
}

int cmd_kernel(Global& g, int grid_n, bool oracle, bool decay) {
    try {
        Weight w = g.cfg.make_weight();
        int d = g.cfg.dim;
        AveragedKernel K = closed_form_kernel(g.cfg.op_name, w, d);
        AveragedKernel Kode;
        if (oracle) Kode = ode_kernel_average(special_system(g.cfg.op_name, d), w);

        Vec lo = g.cfg.domain_lo.empty() ? Vec(d, -3.0) : g.cfg.domain_lo;
        Vec hi = g.cfg.domain_hi.empty() ? Vec(d, 3.0) : g.cfg.domain_hi;
        Vec y(d, 0.0);

        std::vector<std::pair<Vec, Vec>> pts;
        std::vector<Vec> xs;
        if (d == 2) {
            for (int i = 0; i < grid_n; ++i)
                for (int j = 0; j < grid_n; ++j) {
                    Vec x = {lo[0] + (hi[0] - lo[0]) * (i + 0.5) / grid_n,
                             lo[1] + (hi[1] - lo[1]) * (j + 0.5) / grid_n};
                    pts.push_back({x, y});
                    xs.push_back(x);
                }
        } else {
            for (int i = 0; i < grid_n; ++i)
                for (int j = 0; j < grid_n; ++j)
                    for (int k = 0; k < grid_n; ++k) {
                        Vec x = {lo[0] + (hi[0] - lo[0]) * (i + 0.5) / grid_n,
                                 lo[1] + (hi[1] - lo[1]) * (j + 0.5) / grid_n,
                                 lo[2] + (hi[2] - lo[2]) * (k + 0.5) / grid_n};
                        pts.push_back({x, y});
                        xs.push_back(x);
                    }
        }
        auto vals = eval_kernel_batch(K, pts);
        std::vector<Eigen::MatrixXd> ovals;
        double max_disc = 0;
        if (oracle) {
            ovals = eval_kernel_batch(Kode, pts);
            for (size_t i = 0; i < vals.size(); ++i)
                if (!K.near_diagonal(pts[i].first, pts[i].second))
                    max_disc = std::max(max_disc, (vals[i] - ovals[i]).cwiseAbs().maxCoeff());
        }

        auto os = g.open_out("kernel.csv");
        os << "# op=" << g.cfg.op_name << " weight=" << g.cfg.weight_kind << "\n";
        os << "x1";
        for (int i = 1; i < d; ++i) os << ",x" << i + 1;
        os << ",y1";
        for (int i = 1; i < d; ++i) os << ",y" << i + 1;
        for (int s = 0; s < K.s0; ++s)
            for (int j = 0; j < K.r0; ++j) os << ",K_" << s << "_" << j;
        os << ",near_diagonal\n";
        for (size_t i = 0; i < pts.size(); ++i) {
            for (int k = 0; k < d; ++k) os << (k ? "," : "") << fmt_g17(pts[i].first[k]);
            for (int k = 0; k < d; ++k) os << "," << fmt_g17(pts[i].second[k]);
            bool nd = K.near_diagonal(pts[i].first, pts[i].second);
            for (int s = 0; s < K.s0; ++s)
                for (int j = 0; j < K.r0; ++j) os << "," << fmt_g17(nd ? 0.0 : vals[i](s, j));
            os << "," << (nd ? 1 : 0) << "\n";
        }

        std::ostringstream rep;
        rep.precision(17);
        rep << "{\"op\":\"" << g.cfg.op_name << "\",\"samples\":" << pts.size();
        if (oracle) rep << ",\"oracle_max_discrepancy\":" << fmt_g17(max_disc);
        if (decay) {
            Vec theta(d, 0.0);
            if (w.kind == Weight::Bogovskii)
                for (int i = 0; i < d; ++i) theta[i] = (w.center[i] - y[i]);
            else
                theta = w.kind == Weight::ConicUniform ? Vec(d, 1.0) : w.axis;
            double nn = 0;
            for (double v : theta) nn += v * v;
            for (auto& v : theta) v /= std::sqrt(nn);
            double slope = decay_slope(K, y, theta, 1e-3, 1e-1, 25);
            int m = *std::min_element(K.row_order.begin(), K.row_order.end());
            rep << ",\"decay_slope\":" << fmt_g17(slope) << ",\"expected_slope\":" << (-d + m);
        }
        rep << "}";
        auto ros = g.open_out("kernel.json");
        ros << rep.str() << "\n";
        std::cout << rep.str() << "\n";
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

int cmd_solve(Global& g, int grid_n, bool project) {
    try {
        int d = g.cfg.dim;
        Weight w = g.cfg.make_weight();
        DiffOperator P = builtin(g.cfg.op_name, d);
        AveragedKernel K = closed_form_kernel(g.cfg.op_name, w, d);
        TestFunction f = g.cfg.make_f(P.out_components());
        if (f.comp.empty() || std::all_of(f.comp.begin(), f.comp.end(),
                                          [](const TFComponent& c) { return c.terms.empty(); })) {
            // default bump
            BumpSpec b;
            b.center = Vec(d, 0.0);
            g.cfg.bumps.push_back(b);
            f = g.cfg.make_f(P.out_components());
        }

        std::ostringstream rep;
        rep.precision(17);
        rep << "{\"op\":\"" << g.cfg.op_name << "\",\"weight\":\"" << g.cfg.weight_kind << "\"";

        if (project && !w.is_conic()) {
            auto cb = cokernel_basis(g.cfg.op_name, d);
            f = project_out_cokernel(f, cb, w.center, 0.25 * w.radius);
            double worst = 0;
            for (const auto& Z : cb.Z) worst = std::max(worst, std::abs(pair_poly_tf(Z, f)));
            rep << ",\"max_cokernel_moment\":" << fmt_g17(worst);
        }

        Vec lo = g.cfg.domain_lo.empty() ? Vec(d, -3.0) : g.cfg.domain_lo;
        Vec hi = g.cfg.domain_hi.empty() ? Vec(d, 3.0) : g.cfg.domain_hi;
        std::vector<Vec> xs;
        if (d == 2) {
            for (int i = 0; i < grid_n; ++i)
                for (int j = 0; j < grid_n; ++j)
                    xs.push_back({lo[0] + (hi[0] - lo[0]) * (i + 0.5) / grid_n,
                                  lo[1] + (hi[1] - lo[1]) * (j + 0.5) / grid_n});
        } else {
            for (int i = 0; i < grid_n; ++i)
                for (int j = 0; j < grid_n; ++j)
                    for (int k = 0; k < grid_n; ++k)
                        xs.push_back({lo[0] + (hi[0] - lo[0]) * (i + 0.5) / grid_n,
                                      lo[1] + (hi[1] - lo[1]) * (j + 0.5) / grid_n,
                                      lo[2] + (hi[2] - lo[2]) * (k + 0.5) / grid_n});
        }
        auto us = apply_S_batch(K, f, xs, g.cfg.quad);

        auto os = g.open_out("solution.csv");
        os << "x1";
        for (int i = 1; i < d; ++i) os << ",x" << i + 1;
        for (int s = 0; s < K.s0; ++s) os << ",u_" << s;
        os << "\n";
        for (size_t i = 0; i < xs.size(); ++i) {
            for (int k = 0; k < d; ++k) os << (k ? "," : "") << fmt_g17(xs[i][k]);
            for (int s = 0; s < K.s0; ++s) os << "," << fmt_g17(us[i][s]);
            os << "\n";
        }

        // Green's residual at a few points inside supp f.
        std::mt19937_64 rng(g.cfg.seed);
        std::uniform_real_distribution<double> U(-1, 1);
        TestFunction phi = random_function(rng, d, P.out_components(), 2, 0.5, 0.4, 0.7);
        std::function<Eigen::MatrixXd(const Vec&, const Vec&)> beta;
        if (!w.is_conic()) beta = b_eta(special_system(g.cfg.op_name, d), w);
        double worst = 0;
        for (int t = 0; t < 3; ++t) {
            Vec y(d);
            for (auto& v : y) v = 0.5 * U(rng);
            worst = std::max(worst, greens_identity_residual(K, P, w.is_conic() ? nullptr : &beta, phi, y,
                                                             g.cfg.quad));
        }
        rep << ",\"greens_residual\":" << fmt_g17(worst) << ",\"residual_pass\":"
            << (worst <= g.cfg.tol ? "true" : "false");

        // Support report: conic cone or Bogovskii hull.
        auto [flo, fhi] = support_box(f, 9.0);
        double fr = 0;
        Vec fc(d, 0.0);
        for (int i = 0; i < d; ++i) {
            fc[i] = 0.5 * (flo[i] + fhi[i]);
            fr = std::max(fr, 0.5 * (fhi[i] - flo[i]));
        }
        std::function<bool(const Vec&)> region;
        if (w.is_conic()) {
            double margin = 0.3;
            Weight wc = w;
            region = [d, fc, fr, wc, margin](const Vec& x) {
                // inside source ball or within the cone over supp f
                double bn = 0;
                for (int i = 0; i < d; ++i) bn += (x[i] - fc[i]) * (x[i] - fc[i]);
                if (std::sqrt(bn) <= fr + margin) return true;
                if (wc.kind == Weight::ConicUniform) return true;
                Vec dir(d);
                for (int i = 0; i < d; ++i) dir[i] = x[i] - fc[i];
                double dot = 0, nn = 0;
                for (int i = 0; i < d; ++i) {
                    dot += dir[i] * wc.axis[i];
                    nn += dir[i] * dir[i];
                }
                return dot / std::sqrt(nn) > std::cos(wc.aperture + margin / std::sqrt(nn) + 0.25);
            };
        } else {
            Weight wb = w;
            region = [d, fc, fr, wb](const Vec& x) {
                // star hull of supp f and supp eta: |x - t*c| <= fr + t*R + pad
                for (double t : {0.0, 0.25, 0.5, 0.75, 1.0}) {
                    double nn = 0;
                    for (int i = 0; i < d; ++i) {
                        double ci = fc[i] * (1 - t) + wb.center[i] * t;
                        nn += (x[i] - ci) * (x[i] - ci);
                    }
                    if (std::sqrt(nn) <= (1 - t) * fr + t * wb.radius + 0.35) return true;
                }
                return false;
            };
        }
        double worst_out = 0;
        int n_out = 0;
        for (size_t i = 0; i < xs.size(); ++i) {
            if (region(xs[i])) continue;
            ++n_out;
            for (int s = 0; s < K.s0; ++s) worst_out = std::max(worst_out, std::abs(us[i][s]));
        }
        rep << ",\"support_max_outside\":" << fmt_g17(worst_out) << ",\"support_samples_outside\":" << n_out;
        rep << "}";
        auto ros = g.open_out("solve.json");
        ros << rep.str() << "\n";
        std::cout << rep.str() << "\n";
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

int cmd_verify(Global& g) {
    try {
        int d = g.cfg.dim;
        Weight w = g.cfg.make_weight();
        DiffOperator P = builtin(g.cfg.op_name, d);
        AveragedKernel K = closed_form_kernel(g.cfg.op_name, w, d);
        std::mt19937_64 rng(g.cfg.seed);
        std::uniform_real_distribution<double> U(-1, 1);

        VerificationReport R;
        R.identity = "greens_identity";
        std::function<Eigen::MatrixXd(const Vec&, const Vec&)> beta;
        if (!w.is_conic()) beta = b_eta(special_system(g.cfg.op_name, d), w);
        TestFunction phi = random_function(rng, d, P.out_components(), 2, 0.5, 0.45, 0.7);
        Vec y(d);
        for (auto& v : y) v = 0.4 * U(rng);

        // Convergence study: halving grids until the tolerance floor.
        QuadratureSpec q = g.cfg.quad;
        std::vector<QuadratureSpec> levels = {q.halved().halved(), q.halved(), q};
        std::vector<double> res;
        for (const auto& ql : levels)
            res.push_back(greens_identity_residual(K, P, w.is_conic() ? nullptr : &beta, phi, y, ql));
        for (size_t i = 0; i < res.size(); ++i)
            R.residuals["residual_level_" + std::to_string(i)] = res[i];
        R.note("residual", res.back(), g.cfg.tol);
        double floor = 2 * res.back() + 1e-12;
        bool conv = true;
        for (size_t i = 0; i + 1 < res.size(); ++i)
            if (res[i + 1] > floor && res[i] < 4 * res[i + 1]) conv = false;
        R.residuals["convergence_factor_ok"] = conv ? 1.0 : 0.0;
        if (!conv) R.pass = false;

        Vec theta = w.is_conic() ? (w.kind == Weight::ConicUniform ? Vec(d, 1.0) : w.axis)
                                 : [&] {
                                       Vec t(d);
                                       for (int i = 0; i < d; ++i) t[i] = w.center[i] - y[i];
                                       return t;
                                   }();
        double nn = 0;
        for (double v : theta) nn += v * v;
        for (auto& v : theta) v /= std::sqrt(nn);
        double slope = decay_slope(K, y, theta, 1e-3, 1e-1, 25);
        int m = *std::min_element(K.row_order.begin(), K.row_order.end());
        R.note("decay_slope_error", std::abs(slope - (-d + m)), 0.05);

        auto os = g.open_out("verify.json");
        os << R.json() << "\n";
        std::cout << R.json() << "\n";
        return R.pass ? 0 : 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

int cmd_cokernel(Global& g) {
    try {
        auto cb = cokernel_basis(g.cfg.op_name, g.cfg.dim);
        DiffOperator adj = builtin(g.cfg.op_name, g.cfg.dim).adjoint();
        bool ann = true;
        for (const auto& Z : cb.Z) ann = ann && adj.apply(Z).is_zero();
        std::ostringstream rep;
        rep << "{\"op\":\"" << g.cfg.op_name << "\",\"dim\":" << g.cfg.dim
            << ",\"cokernel_dim\":" << cb.dimension()
            << ",\"annihilated_exactly\":" << (ann ? "true" : "false") << ",\"basis\":[";
        for (size_t i = 0; i < cb.Z.size(); ++i) {
            rep << (i ? "," : "") << "\"";
            for (size_t c = 0; c < cb.Z[i].comp.size(); ++c)
                rep << (c ? "; " : "") << cb.Z[i].comp[c].str();
            rep << "\"";
        }
        rep << "]}";
        auto os = g.open_out("cokernel.json");
        os << rep.str() << "\n";
        std::cout << rep.str() << "\n";
        return ann ? 0 : 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"curvegreen: cokernel certification and curve-supported Green's kernels"};
    app.require_subcommand(1);

    Global g;
    std::string config_path;
    app.add_option("--config", config_path, "run configuration file");
    app.add_option("--seed", g.cfg.seed, "random seed recorded in reports");
    app.add_option("--tol", g.cfg.tol, "verification tolerance");
    app.add_option("--threads", g.cfg.threads, "OpenMP threads (0 = default)");
    app.add_option("--out", g.cfg.out_dir, "output directory");
    app.add_option("--op", g.cfg.op_name, "operator name");
    app.add_option("--op-file", g.cfg.op_file, "operator config file");
    app.add_option("--dim", g.cfg.dim, "spatial dimension");
    app.add_option("--weight", g.cfg.weight_kind, "bogovskii | conic | conic_uniform");
    app.add_option("--weight-center", g.cfg.weight_center, "Bogovskii bump center");
    app.add_option("--weight-radius", g.cfg.weight_radius, "Bogovskii bump radius");
    app.add_option("--cone-axis", g.cfg.cone_axis, "conic cap axis");
    app.add_option("--cone-aperture", g.cfg.cone_aperture, "conic cap aperture (radians)");
    app.add_option("--n0-max", g.cfg.n0_max, "certificate search cap (default max m_K + 4)");
    app.add_option("--trials", g.cfg.trials, "falsifier trials");
    app.add_option("--lower-order", g.cfg.lower_order, "lower-order terms, e.g. B=(0,x1)");

    auto* fc = app.add_subcommand("fc", "decide the finite-dimensional-cokernel condition");
    auto* augment = app.add_subcommand("augment", "build and analyze an augmented system");
    std::string special;
    bool maximal = false;
    augment->add_option("--special", special, "named special system");
    augment->add_flag("--maximal", maximal, "maximal jet system from a certificate");
    auto* kernel = app.add_subcommand("kernel", "sample an averaged kernel to CSV");
    int grid_n = 24;
    bool oracle = false, decay = false;
    kernel->add_option("--grid", grid_n, "grid points per axis");
    kernel->add_flag("--oracle", oracle, "add ODE-synthesized oracle comparison");
    kernel->add_flag("--decay-fit", decay, "log-log decay slope fit");
    auto* solve = app.add_subcommand("solve", "apply the solution operator to configured data");
    int sgrid = 12;
    bool project = false;
    solve->add_option("--grid", sgrid, "solution grid points per axis");
    solve->add_flag("--project-cokernel", project, "project data onto the cokernel complement");
    auto* verify = app.add_subcommand("verify", "verification battery for the configured kernel");
    auto* coker = app.add_subcommand("cokernel", "print the flat cokernel basis");

    CLI11_PARSE(app, argc, argv);

    try {
        if (!config_path.empty()) {
            RunConfig base = RunConfig::from_file(config_path);
            // Flags override file values only when explicitly given.
            RunConfig& c = g.cfg;
            if (app.count("--seed") == 0) c.seed = base.seed;
            if (app.count("--tol") == 0) c.tol = base.tol;
            if (app.count("--threads") == 0) c.threads = base.threads;
            if (app.count("--out") == 0) c.out_dir = base.out_dir;
            if (app.count("--op") == 0) c.op_name = base.op_name;
            if (app.count("--op-file") == 0) c.op_file = base.op_file;
            if (app.count("--dim") == 0) c.dim = base.dim;
            if (app.count("--weight") == 0) c.weight_kind = base.weight_kind;
            if (app.count("--weight-center") == 0) c.weight_center = base.weight_center;
            if (app.count("--weight-radius") == 0) c.weight_radius = base.weight_radius;
            if (app.count("--cone-axis") == 0) c.cone_axis = base.cone_axis;
            if (app.count("--cone-aperture") == 0) c.cone_aperture = base.cone_aperture;
            if (app.count("--n0-max") == 0) c.n0_max = base.n0_max;
            if (app.count("--trials") == 0) c.trials = base.trials;
            if (app.count("--lower-order") == 0) c.lower_order = base.lower_order;
            c.domain_lo = base.domain_lo;
            c.domain_hi = base.domain_hi;
            c.quad = base.quad;
            c.bumps = base.bumps;
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error (line " << e.line << "): " << e.what() << "\n";
        return 1;
    }
    if (g.cfg.threads > 0) omp_set_num_threads(g.cfg.threads);

    if (fc->parsed()) return cmd_fc(g);
    if (augment->parsed()) return cmd_augment(g, special, maximal);
    if (kernel->parsed()) return cmd_kernel(g, grid_n, oracle, decay);
    if (solve->parsed()) return cmd_solve(g, sgrid, project);
    if (verify->parsed()) return cmd_verify(g);
    if (coker->parsed()) return cmd_cokernel(g);
    return 1;
}
