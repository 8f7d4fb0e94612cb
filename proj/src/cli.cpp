#include "hcsck/cli.hpp"

#include "hcsck/invariant1d.hpp"
#include "hcsck/ruled.hpp"
#include "hcsck/toric.hpp"

#include <CLI11.hpp>
#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include "vendor_json.hpp"

namespace hcsck::cli {

namespace {

struct Check {
    std::string name;
    bool pass = false;
    double value = 0.0;
    double tol = 0.0;
};

struct Report {
    std::vector<std::pair<std::string, std::string>> config; // key, rendered value
    std::vector<std::pair<std::string, std::string>> results;
    std::vector<Check> checks;

    void cfg(const std::string& k, const std::string& v) {
        config.emplace_back(k, '"' + v + '"');
    }
    void cfg(const std::string& k, double v) { config.emplace_back(k, fmt_g17(v)); }
    void cfg(const std::string& k, long v) {
        config.emplace_back(k, std::to_string(v));
    }
    void res(const std::string& k, const std::string& raw) {
        results.emplace_back(k, raw);
    }
    void res(const std::string& k, double v) { results.emplace_back(k, fmt_g17(v)); }

    bool add(const std::string& name, double value, double tol) {
        // a check passes when |value| <= tol
        checks.push_back({name, std::abs(value) <= tol, value, tol});
        return checks.back().pass;
    }
    bool add_flag(const std::string& name, bool pass) {
        checks.push_back({name, pass, pass ? 1.0 : 0.0, 0.0});
        return pass;
    }

    bool all_pass() const {
        for (const Check& c : checks)
            if (!c.pass) return false;
        return true;
    }

    std::string render() const {
        std::ostringstream os;
        os << "{\n  \"config\": {";
        for (std::size_t i = 0; i < config.size(); ++i)
            os << (i ? ", " : " ") << '"' << config[i].first << "\": "
               << config[i].second;
        os << " },\n  \"results\": {";
        for (std::size_t i = 0; i < results.size(); ++i)
            os << (i ? ", " : " ") << '"' << results[i].first << "\": "
               << results[i].second;
        os << " },\n  \"checks\": [";
        for (std::size_t i = 0; i < checks.size(); ++i) {
            const Check& c = checks[i];
            os << (i ? ",\n    " : "\n    ") << "{ \"name\": \"" << c.name
               << "\", \"pass\": " << (c.pass ? "true" : "false")
               << ", \"value\": " << fmt_g17(c.value)
               << ", \"tol\": " << fmt_g17(c.tol) << " }";
        }
        os << "\n  ]\n}\n";
        return os.str();
    }
};

void emit(const Report& rep, const std::string& out_path) {
    const std::string text = rep.render();
    if (out_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream f(out_path, std::ios::binary);
        f << text;
    }
}

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw domain_error("cannot open file: " + path);
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    f << text;
}

// --- spectral-check -----------------------------------------------------------

int cmd_spectral_check(long trials, std::uint64_t seed, const std::string& out) {
    using namespace spectral;
    Report rep;
    rep.cfg("subcommand", "spectral-check");
    rep.cfg("trials", trials);
    rep.cfg("seed", static_cast<long>(seed));

    // rho' = psi by Richardson-extrapolated central differences
    double worst_fd = 0.0;
    for (int i = 1; i < 1000; ++i) {
        const double d = 0.95 * i / 1000.0;
        const double h = std::min(1e-3, 0.5 * d);
        const double d1 = (bg_density(d + h) - bg_density(d - h)) / (2 * h);
        const double d2 = (bg_density(d + h / 2) - bg_density(d - h / 2)) / h;
        worst_fd = std::max(worst_fd, std::abs((4 * d2 - d1) / 3 - psi(d)));
    }
    rep.add("bg_density_derivative_is_psi", worst_fd, 1e-10);

    double worst_alg = 0.0;
    for (int i = 0; i <= 1000; ++i) {
        const double x = -2.0 + 3.0 * i / 1000.0;
        worst_alg = std::max(
            worst_alg, std::abs(x * psi(x) - 0.5 * (1.0 - std::sqrt(1.0 - x))));
    }
    rep.add("x_psi_identity", worst_alg, 1e-14);

    Rng rng(seed);
    double worst_pf = 0.0, worst_sq = 0.0, worst_eig = 0.0, worst_idn = 0.0;
    for (long t = 0; t < trials; ++t) {
        // random admissible product matrix from (xi, G)
        CSym2 xi{rng.uniform_complex(1.0), rng.uniform_complex(1.0),
                 rng.uniform_complex(1.0)};
        RSym2 g{1.0 + rng.uniform(-0.3, 0.3), rng.uniform(-0.3, 0.3),
                1.0 + rng.uniform(-0.3, 0.3)};
        if (!(g.det() > 0.05)) g.a12 = 0.0;
        CMat2 x = mul(xi, g) * mul(xi.conj(), g);
        const double target = rng.uniform(0.05, 0.9);
        const double radius = spectrum_of(x).delta_plus;
        if (radius > 0.0) x = (target / radius) * x;

        const Spectrum2 s = spectrum_of(x);
        Eigen::Matrix2cd m;
        m << x.a11, x.a12, x.a21, x.a22;
        Eigen::ComplexEigenSolver<Eigen::Matrix2cd> es(m);
        double l0 = es.eigenvalues()(0).real(), l1 = es.eigenvalues()(1).real();
        if (l0 < l1) std::swap(l0, l1);
        worst_eig = std::max({worst_eig, std::abs(s.delta_plus - l0),
                              std::abs(s.delta_minus - l1)});

        const CMat2 root = sqrt_one_minus(x);
        worst_sq = std::max(worst_sq,
                            (root * root - (CMat2::identity() - x)).max_abs());
        const CMat2 lhs = psi_of_matrix(x) * x;
        const CMat2 rhs = 0.5 * (CMat2::identity() - root);
        worst_idn = std::max(worst_idn, (lhs - rhs).max_abs());

        const Psi12 p = psi12(s);
        const double ddp = rng.uniform(-1.0, 1.0), ddm = rng.uniform(-1.0, 1.0);
        const double lhs_pf = psi(s.delta_plus) * ddp + psi(s.delta_minus) * ddm;
        const double rhs_pf = p.psi1 * (ddp + ddm) -
                              p.psi2 * (s.delta_minus * ddp + s.delta_plus * ddm);
        worst_pf = std::max(worst_pf, std::abs(lhs_pf - rhs_pf));
    }
    rep.add("partial_fraction_identity", worst_pf, 1e-12);
    rep.add("matrix_sqrt_squares_back", worst_sq, 1e-12);
    rep.add("psi_sqrt_identity", worst_idn, 1e-12);
    rep.add("eigenpair_vs_eigensolver", worst_eig, 1e-10);

    emit(rep, out);
    return rep.all_pass() ? 0 : 1;
}

// --- torus-solve ---------------------------------------------------------------

int cmd_torus_solve(int grid, double tol, int max_iter, const std::string& xi_file,
                    std::uint64_t seed, int bandwidth, double amplitude,
                    const std::string& out, const std::string& u_out) {
    Report rep;
    rep.cfg("subcommand", "torus-solve");
    rep.cfg("grid", static_cast<long>(grid));
    rep.cfg("tol", tol);
    rep.cfg("max_iter", static_cast<long>(max_iter));
    if (!xi_file.empty()) rep.cfg("xi_file", xi_file);
    else {
        rep.cfg("seed", static_cast<long>(seed));
        rep.cfg("bandwidth", static_cast<long>(bandwidth));
        rep.cfg("amplitude", amplitude);
    }

    const TorusGrid g(grid, grid);
    HiggsField xi = xi_file.empty()
                        ? random_solution(g, seed, bandwidth, amplitude)
                        : higgs_from_json(slurp(xi_file));
    if (!(xi.grid() == g))
        throw domain_error("torus-solve: xi file grid does not match --grid");

    SolveReport sr;
    SolveOptions opts;
    opts.tol = tol;
    opts.max_iter = max_iter;
    const SymplecticPotential u = solve_real_mm(xi, SymplecticPotential(g), opts, &sr);

    rep.res("iterations", std::to_string(sr.iterations));
    rep.res("residual_sup", sr.residual_sup);
    {
        std::ostringstream os;
        os << '[';
        for (std::size_t i = 0; i < sr.energy_trace.size(); ++i)
            os << (i ? ", " : "") << fmt_g17(sr.energy_trace[i]);
        os << ']';
        rep.res("energy_trace", os.str());
    }
    rep.res("admissibility_min_margin", sr.admissibility_min_margin);

    rep.add("residual_sup", sr.residual_sup, tol);
    rep.add("mean_h", mean(u.h), 1e-12);
    const HKState state(u, xi);
    const RealField grad = hk_gradient(state);
    const RealField res = real_mm_residual(state);
    double worst = 0.0;
    for (std::size_t i = 0; i < grad.v.size(); ++i)
        worst = std::max(worst, std::abs(grad.v[i] + 0.5 * res.v[i]));
    rep.add("gradient_residual_identity", worst, 1e-11);

    if (!u_out.empty()) write_file(u_out, potential_to_json(u));
    emit(rep, out);
    return rep.all_pass() ? 0 : 1;
}

// --- inv1d ----------------------------------------------------------------------

int cmd_inv1d(double c_re, double c_im, const std::string& modes_file, int n,
              const std::string& out) {
    Report rep;
    rep.cfg("subcommand", "inv1d");
    rep.cfg("c_re", c_re);
    rep.cfg("c_im", c_im);
    rep.cfg("n", static_cast<long>(n));
    if (!modes_file.empty()) rep.cfg("F_modes", modes_file);

    Inv1DProblem prob;
    prob.c = cplx(c_re, c_im);
    prob.n = n;
    prob.F.assign(n, cplx(0.0, 0.0));
    if (!modes_file.empty()) {
        const auto j = nlohmann::json::parse(slurp(modes_file));
        for (const auto& m : j.at("modes")) {
            const int k = m.at(0).get<int>();
            const cplx a(m.at(1).get<double>(), m.at(2).get<double>());
            for (int i = 0; i < n; ++i) {
                const double ph = 2.0 * std::numbers::pi * k * i / n;
                prob.F[i] += a * cplx(std::cos(ph), std::sin(ph));
            }
        }
    }

    const Inv1DSolution sol = solve_inv1d(prob);
    rep.res("k", sol.k);
    rep.res("residual_sup", sol.residual_sup);
    rep.add("residual_sup", sol.residual_sup, 1e-10);
    rep.add("mean_phi", sol.mean_phi, 1e-12);
    rep.add_flag("bounds_hold", sol.bounds.hold);

    // lifted two-dimensional residual
    auto [u, xi] = lift_to_torus(prob, sol);
    rep.add("lifted_residual_sup", sup_norm(real_mm_residual(HKState(u, xi))), 1e-8);

    if (!out.empty()) {
        write_file(out, inv1d_to_csv(prob, sol));
        write_file(out + ".json", inv1d_report_json(prob, sol));
    }
    emit(rep, out.empty() ? "" : out + ".report.json");
    return rep.all_pass() ? 0 : 1;
}

// --- ruled-solve -----------------------------------------------------------------

int cmd_ruled_solve(double m, int nodes, double tol, const std::string& variant,
                    const std::string& out) {
    Report rep;
    rep.cfg("subcommand", "ruled-solve");
    rep.cfg("m", m);
    rep.cfg("nodes", static_cast<long>(nodes));
    rep.cfg("tol", tol);
    rep.cfg("variant", variant);

    RuledOptions opts;
    opts.nodes = nodes;
    opts.tol = tol;
    opts.variant = variant == "norm" ? RuledVariant::norm : RuledVariant::standard;

    const RuledSolution sol = solve_ruled(m, opts);
    rep.res("c", sol.c);
    rep.res("residual_sup", sol.residual_sup);
    rep.res("iterations", std::to_string(sol.iterations));

    rep.add("residual_sup", sol.residual_sup, tol);
    rep.add_flag("c_positive", sol.c > 0.0);
    rep.add_flag("g_positive", sol.profile.min_g() > 0.0);
    const double cref = c0_variant(m, opts.variant);
    const double radius = opts.variant == RuledVariant::standard
                              ? std::pow(m, 2.5)
                              : std::max(std::pow(m, 2.5), 16.0 * m * m * m);
    rep.add("c_near_approximate", sol.c - cref, radius);

    if (!out.empty()) write_file(out, ruled_to_json(sol));
    emit(rep, out.empty() ? "" : out + ".report.json");
    return rep.all_pass() ? 0 : 1;
}

// --- toric-futaki ----------------------------------------------------------------

int cmd_toric_futaki(const std::string& polytope_file, int probe_samples,
                     const std::string& f_file, const std::string& out) {
    using namespace toric;
    Report rep;
    rep.cfg("subcommand", "toric-futaki");
    rep.cfg("polytope", polytope_file);
    rep.cfg("probe_samples", static_cast<long>(probe_samples));
    if (!f_file.empty()) rep.cfg("f", f_file);

    const DelzantPolytope p = polytope_from_json(slurp(polytope_file));
    const double c = futaki_constant(p);
    const auto probe = stability_probe(p, probe_samples);
    rep.res("C", c);
    rep.res("C_lattice", futaki_constant(p, BoundaryMeasure::lattice));
    const auto fv = futaki_vector(p);
    rep.res("futaki_vector", "[" + fmt_g17(fv[0]) + ", " + fmt_g17(fv[1]) + "]");
    rep.res("probe_min", probe.min_value);
    rep.res("probe_argmin",
            "[" + fmt_g17(probe.argmin_a[0]) + ", " + fmt_g17(probe.argmin_a[1]) +
                ", " + fmt_g17(probe.argmin_b) + "]");
    rep.res("probe_destabilized", probe.probe_destabilized ? "true" : "false");

    if (!f_file.empty()) {
        // PL convex test function: { "pieces": [ [a1, a2, b], ... ] }
        const auto j = nlohmann::json::parse(slurp(f_file));
        PLConvexFn f;
        for (const auto& piece : j.at("pieces"))
            f.pieces.push_back({{piece[0].get<double>(), piece[1].get<double>()},
                                piece[2].get<double>()});
        rep.res("L_C_f", donaldson_functional(p, f, c));
    }

    // solvability of the normalization: L_C(1) = 0 by construction
    rep.add("normalization_LC_one",
            donaldson_functional(
                p, [](const toric::Vec2&) { return 1.0; }, c),
            1e-10);

    if (!out.empty()) write_file(out, futaki_report_json(p, probe));
    emit(rep, out.empty() ? "" : out + ".report.json");
    return rep.all_pass() ? 0 : 1;
}

// --- legendre-check --------------------------------------------------------------

int cmd_legendre_check(int grid, std::uint64_t seed, int bandwidth, double amplitude,
                       const std::string& out) {
    Report rep;
    rep.cfg("subcommand", "legendre-check");
    rep.cfg("grid", static_cast<long>(grid));
    rep.cfg("seed", static_cast<long>(seed));
    rep.cfg("bandwidth", static_cast<long>(bandwidth));
    rep.cfg("amplitude", amplitude);

    const TorusGrid g(grid, grid);
    ComplexPotential v(g);
    v.h = random_field(g, seed, bandwidth, amplitude);

    // involution on matching nodes
    const SymplecticPotential u = legendre(v);
    const ComplexPotential v2 = legendre(u);
    double worst_inv = 0.0;
    for (std::size_t i = 0; i < v.h.v.size(); ++i)
        worst_inv = std::max(worst_inv, std::abs(v.h.v[i] - v2.h.v[i]));
    rep.add("legendre_involution", worst_inv, 1e-8);

    // Hessian-inverse relation at dual points
    const auto duals = legendre_dual_points(v);
    const RSym2Field hu = hessian(u);
    const CplxField hv_modes = to_modes(v.h);
    double worst_hess = 0.0;
    for (std::size_t idx = 0; idx < g.size(); idx += 3) {
        const int i = static_cast<int>(idx) / g.n2, j = static_cast<int>(idx) % g.n2;
        const auto x = duals(i, j);
        const ScalarJet2 jet = eval_modes_jet(hv_modes, x[0], x[1]);
        const RSym2 want =
            RSym2{1.0 + jet.hess.a11, jet.hess.a12, 1.0 + jet.hess.a22}.inverse();
        worst_hess = std::max({worst_hess, std::abs(hu(i, j).a11 - want.a11),
                               std::abs(hu(i, j).a12 - want.a12),
                               std::abs(hu(i, j).a22 - want.a22)});
    }
    rep.add("hessian_inverse_at_duals", worst_hess, 1e-8);

    // scalar curvature through the duality
    const RealField sx = complex_side_scalar(v);
    const CplxField s_modes = to_modes(abreu_scalar(u));
    const RealField g1 = partial(v.h, 1, 1), g2 = partial(v.h, 2, 1);
    double worst_curv = 0.0;
    for (std::size_t idx = 0; idx < g.size(); idx += 3) {
        const int i = static_cast<int>(idx) / g.n2, j = static_cast<int>(idx) % g.n2;
        const auto xnode = g.node(i, j);
        const double y1 = xnode[0] + g1.v[idx], y2 = xnode[1] + g2.v[idx];
        worst_curv = std::max(
            worst_curv, std::abs(sx.v[idx] - eval_modes_at(s_modes, y1, y2).real()));
    }
    rep.add("curvature_through_duality", worst_curv, 1e-6);
    rep.add("abreu_mean", mean(abreu_scalar(u)), 1e-10);
    rep.add("flat_scalar_curvature",
            sup_norm(abreu_scalar(SymplecticPotential(g))), 1e-12);

    emit(rep, out);
    return rep.all_pass() ? 0 : 1;
}

} // namespace

int run(const std::vector<std::string>& args) {
    std::vector<const char*> argv;
    static const std::string prog = "hcsck";
    argv.push_back(prog.c_str());
    for (const auto& a : args) argv.push_back(a.c_str());
    return run(static_cast<int>(argv.size()), argv.data());
}

int run(int argc, const char* const* argv) {
    apply_thread_cap_from_env();

    CLI::App app{"Moment-map solver suite for coupled Kahler metric / Higgs "
                 "field equations on tori, ruled surfaces and toric surfaces"};
    app.require_subcommand(1);

    // spectral-check
    auto* sc = app.add_subcommand("spectral-check", "spectral kernel identity suite");
    long sc_trials = 1000;
    std::uint64_t sc_seed = 0;
    std::string sc_out;
    sc->add_option("--trials", sc_trials, "random admissible matrices");
    sc->add_option("--seed", sc_seed, "RNG seed")->required();
    sc->add_option("--out", sc_out, "report path (default: stdout)");

    // torus-solve
    auto* ts = app.add_subcommand("torus-solve", "real moment map Newton solver");
    int ts_grid = 32, ts_maxit = 200, ts_bw = 3;
    double ts_tol = 1e-8, ts_amp = 0.1;
    std::uint64_t ts_seed = 0;
    std::string ts_xi, ts_out, ts_uout;
    ts->add_option("--grid", ts_grid, "nodes per axis");
    ts->add_option("--tol", ts_tol, "sup-norm residual tolerance");
    ts->add_option("--max-iter", ts_maxit, "Newton iteration cap");
    ts->add_option("--xi-file", ts_xi, "Higgs field JSON");
    auto* ts_seed_opt = ts->add_option("--seed", ts_seed, "seed for a generated xi");
    ts->add_option("--bandwidth", ts_bw, "bandwidth of the generated xi");
    ts->add_option("--amplitude", ts_amp, "entry sup of the generated xi");
    ts->add_option("--out", ts_out, "report path");
    ts->add_option("--u-out", ts_uout, "write the solved potential JSON here");

    // inv1d
    auto* iv = app.add_subcommand("inv1d", "translation-invariant rank-one solver");
    double iv_cre = 0.2, iv_cim = 0.0;
    int iv_n = 64;
    std::string iv_modes, iv_out;
    iv->add_option("--c-re", iv_cre, "Re of the constant diagonal entry")->required();
    iv->add_option("--c-im", iv_cim, "Im of the constant diagonal entry");
    iv->add_option("--F-modes", iv_modes, "off-diagonal datum modes JSON");
    iv->add_option("--n", iv_n, "grid size");
    iv->add_option("--out", iv_out, "CSV output path (sidecars: .json, .report.json)");

    // ruled-solve
    auto* rs = app.add_subcommand("ruled-solve", "momentum-profile Newton solver");
    double rs_m = 0.1, rs_tol = 1e-10;
    int rs_nodes = 64;
    std::string rs_variant = "standard", rs_out;
    rs->add_option("--m", rs_m, "fibre parameter")->required();
    rs->add_option("--nodes", rs_nodes, "collocation nodes");
    rs->add_option("--tol", rs_tol, "residual tolerance");
    rs->add_option("--variant", rs_variant, "standard | norm")
        ->check(CLI::IsMember({"standard", "norm"}));
    rs->add_option("--out", rs_out, "solution JSON path");

    // toric-futaki
    auto* tf = app.add_subcommand("toric-futaki", "Delzant stability report");
    std::string tf_poly, tf_f, tf_out;
    int tf_samples = 8;
    tf->add_option("--polytope", tf_poly, "polytope JSON")->required();
    tf->add_option("--probe-samples", tf_samples, "crease offsets per direction");
    tf->add_option("--f", tf_f, "PL convex test function JSON");
    tf->add_option("--out", tf_out, "report path");

    // legendre-check
    auto* lc = app.add_subcommand("legendre-check", "Legendre duality cross-checks");
    int lc_grid = 32, lc_bw = 2;
    double lc_amp = 5e-4;
    std::uint64_t lc_seed = 0;
    std::string lc_out;
    lc->add_option("--grid", lc_grid, "nodes per axis");
    lc->add_option("--seed", lc_seed, "RNG seed")->required();
    lc->add_option("--bandwidth", lc_bw, "perturbation bandwidth");
    lc->add_option("--amplitude", lc_amp, "perturbation amplitude");
    lc->add_option("--out", lc_out, "report path");

    try {
        app.parse(argc, const_cast<char**>(argv));
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (sc->parsed()) return cmd_spectral_check(sc_trials, sc_seed, sc_out);
        if (ts->parsed()) {
            if (ts_xi.empty() && ts_seed_opt->count() == 0) {
                std::cerr << "torus-solve: --seed is required when no --xi-file is "
                             "given\n";
                return 2;
            }
            return cmd_torus_solve(ts_grid, ts_tol, ts_maxit, ts_xi, ts_seed, ts_bw,
                                   ts_amp, ts_out, ts_uout);
        }
        if (iv->parsed()) return cmd_inv1d(iv_cre, iv_cim, iv_modes, iv_n, iv_out);
        if (rs->parsed())
            return cmd_ruled_solve(rs_m, rs_nodes, rs_tol, rs_variant, rs_out);
        if (tf->parsed())
            return cmd_toric_futaki(tf_poly, tf_samples, tf_f, tf_out);
        if (lc->parsed())
            return cmd_legendre_check(lc_grid, lc_seed, lc_bw, lc_amp, lc_out);
    } catch (const convergence_error& e) {
        std::cerr << "solver did not converge: " << e.what() << '\n';
        return 3;
    } catch (const domain_error& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}

} // namespace hcsck::cli
