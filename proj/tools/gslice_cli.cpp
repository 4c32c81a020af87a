// Command-line surface: verification sweeps, fiber reports, system builds,
// and flow integration, all emitting deterministic JSON.
//
// Exit codes: 0 all checks pass, 1 a check failed or a computation was
// rejected, 2 usage or parse error.

#include "gslice/verify.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

using namespace gslice;

struct CliOptions {
    RunConfig cfg;
    std::string form_name = "trace";
    std::map<std::string, double> tol_overrides;
    std::map<std::string, CLI::Option*> tol_options;
};

void apply(CliOptions& opt) {
    if (opt.form_name == "trace")
        opt.cfg.form = FormKind::trace;
    else if (opt.form_name == "killing")
        opt.cfg.form = FormKind::killing;
    else
        throw CLI::ValidationError("--form", "must be 'trace' or 'killing'");
    for (const auto& [name, value] : opt.tol_overrides)
        if (opt.tol_options.at(name)->count() > 0) opt.cfg.tol.set(name, value);
    opt.cfg.validate();
}

void emit(const json& report, const std::string& out_path) {
    const std::string text = report.dump(2) + "\n";
    if (out_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream f(out_path);
        if (!f) throw std::runtime_error("cannot open output path: " + out_path);
        f << text;
    }
}

/// Matrix argument: a file path if one exists, otherwise inline JSON.
Matrix load_matrix(const std::string& arg) {
    std::ifstream f(arg);
    json j;
    if (f)
        f >> j;
    else
        j = json::parse(arg);
    return matrix_from_json(j);
}

int finish(const VerificationReport& rep, const RunConfig& cfg) {
    emit(rep.to_json_report(), cfg.out);
    return rep.pass() ? 0 : 1;
}

int cmd_verify_all(const CliOptions& opt) {
    auto rep = verify_all(opt.cfg);
    return finish(rep, opt.cfg);
}

int cmd_fiber(const CliOptions& opt, const std::string& x_arg, bool random_x) {
    LieContext ctx(opt.cfg.n, opt.cfg.form, opt.cfg.tol);
    SlodowySlice slice(ctx, principal_triple(ctx));
    Matrix x;
    if (random_x) {
        x = sample(ctx, opt.cfg.seed, SampleKind::regular_semisimple);
    } else {
        x = load_matrix(x_arg);
        if (x.rows() != opt.cfg.n)
            throw std::invalid_argument("fiber: matrix size does not match --n");
        if (!is_traceless(x)) throw std::invalid_argument("fiber: matrix is not traceless");
    }
    if (!classify(ctx, x).is_regular) {
        std::cerr << "fiber: input is not regular; the fiber structure theorem does not apply\n";
        return 1;
    }
    const auto rep = fiber_report(ctx, slice, x);
    json out = to_json(rep);
    out["environment"] = environment_json(opt.cfg);
    emit(out, opt.cfg.out);
    return 0;
}

int sweep_and_emit(const CliOptions& opt, const LieContext& ctx, const SlodowySlice& slice,
                   const IntegrableSystem& sys) {
    std::vector<PhasePoint> points;
    for (int s = 0; s < opt.cfg.samples; ++s)
        points.push_back(sample_phase_point(ctx, slice, opt.cfg.seed + 1000 + s, 0.35));
    const auto comm = verify_commutativity(ctx, slice, sys, points);
    const auto indep = verify_independence(ctx, slice, sys, points);
    const double bracket_tol = opt.cfg.tol.bracket_tol;
    const int want_rank = sys.kind == SystemKind::mishchenko_fomenko &&
                                  opt.cfg.mf_include_constants
                              ? static_cast<int>(sys.observables.size()) - ctx.rank()
                              : static_cast<int>(sys.observables.size());
    int full = 0;
    for (int r : indep.ranks)
        if (r == want_rank) ++full;
    const bool pass = comm.max_upstairs <= bracket_tol && comm.max_downstairs <= bracket_tol &&
                      full >= (99 * indep.point_count) / 100;
    json out = {{"environment", environment_json(opt.cfg)},
                {"system", system_manifest(sys)},
                {"commutativity",
                 {{"max_upstairs", comm.max_upstairs},
                  {"max_downstairs", comm.max_downstairs},
                  {"threshold", bracket_tol}}},
                {"independence", to_json(indep)},
                {"expected_rank", want_rank},
                {"verdict", pass ? "pass" : "fail"}};
    emit(out, opt.cfg.out);
    return pass ? 0 : 1;
}

int cmd_mf(const CliOptions& opt, const std::string& beta_arg) {
    LieContext ctx(opt.cfg.n, opt.cfg.form, opt.cfg.tol);
    SlodowySlice slice(ctx, principal_triple(ctx));
    Matrix beta;
    if (beta_arg.empty() || beta_arg == "--random" || beta_arg == "random")
        beta = sample(ctx, opt.cfg.seed + 6, SampleKind::regular_semisimple);
    else
        beta = load_matrix(beta_arg);
    beta /= frob(beta);
    const auto sys = build_mf(ctx, slice, beta, opt.cfg.mf_include_constants);
    return sweep_and_emit(opt, ctx, slice, sys);
}

int cmd_rank_system(const CliOptions& opt) {
    LieContext ctx(opt.cfg.n, opt.cfg.form, opt.cfg.tol);
    SlodowySlice slice(ctx, principal_triple(ctx));
    const Matrix probe = sample(ctx, opt.cfg.seed + 5, SampleKind::regular_semisimple);
    const auto sys = build_invariant_pullback(ctx, slice, probe);
    return sweep_and_emit(opt, ctx, slice, sys);
}

int cmd_flow(const CliOptions& opt, const std::string& kind, int index, double step,
             double horizon, const std::string& csv_path) {
    LieContext ctx(opt.cfg.n, opt.cfg.form, opt.cfg.tol);
    SlodowySlice slice(ctx, principal_triple(ctx));
    IntegrableSystem sys;
    if (kind == "mf") {
        Matrix beta = sample(ctx, opt.cfg.seed + 6, SampleKind::regular_semisimple);
        beta /= frob(beta);
        sys = build_mf(ctx, slice, beta, opt.cfg.mf_include_constants);
    } else if (kind == "rank") {
        sys = build_invariant_pullback(ctx, slice,
                                       sample(ctx, opt.cfg.seed + 5,
                                              SampleKind::regular_semisimple));
    } else {
        throw CLI::ValidationError("--system", "must be 'mf' or 'rank'");
    }
    const PhasePoint p0 = sample_phase_point(ctx, slice, opt.cfg.seed + 8, 0.4);
    FlowOptions fopt;
    fopt.step = step;
    fopt.horizon = horizon;

    json drift_table = json::array();
    double worst = 0.0;
    const int count = static_cast<int>(sys.observables.size());
    const std::vector<int> indices = index >= 0 ? std::vector<int>{index} : [&] {
        std::vector<int> all(count);
        for (int i = 0; i < count; ++i) all[i] = i;
        return all;
    }();
    Trajectory last;
    for (int idx : indices) {
        const auto traj = integrate(ctx, slice, sys, idx, p0, fopt);
        const auto drifts = conservation_report(traj, sys);
        json row = {{"hamiltonian", sys.observables[idx].name},
                    {"max_local_error", traj.max_local_error},
                    {"drift", drifts}};
        for (double d : drifts) worst = std::max(worst, d);
        drift_table.push_back(row);
        last = traj;
    }
    const bool pass = worst <= 1e-6;
    json out = {{"environment", environment_json(opt.cfg)},
                {"system", system_manifest(sys)},
                {"step", step},
                {"horizon", horizon},
                {"drift_table", drift_table},
                {"max_drift", worst},
                {"threshold", 1e-6},
                {"verdict", pass ? "pass" : "fail"}};
    emit(out, opt.cfg.out);
    if (!csv_path.empty()) {
        std::ofstream f(csv_path);
        if (!f) throw std::runtime_error("cannot open csv path: " + csv_path);
        f << trajectory_csv(last, sys.observables);
    }
    return pass ? 0 : 1;
}

int cmd_info(const CliOptions& opt) {
    LieContext ctx(opt.cfg.n, opt.cfg.form, opt.cfg.tol);
    json out = {{"environment", environment_json(opt.cfg)},
                {"dim", ctx.dim()},
                {"rank", ctx.rank()},
                {"phase_dim", ctx.dim() + ctx.rank()},
                {"invariant_degrees", ctx.degrees()},
                {"mf_count", (ctx.dim() + ctx.rank()) / 2}};
    emit(out, opt.cfg.out);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"integrable systems on SL_n(C) x S_reg: verification and flows"};
    app.require_subcommand(1);
    app.fallthrough();

    CliOptions opt;
    app.set_config("--config")->description("key=value config file (same keys as flags)");
    app.add_option("--n", opt.cfg.n, "matrix size n of SL_n(C)")->capture_default_str();
    app.add_option("--seed", opt.cfg.seed, "RNG seed")->capture_default_str();
    app.add_option("--samples", opt.cfg.samples, "sweep sample count")->capture_default_str();
    app.add_option("--form", opt.form_name, "invariant form: trace or killing")
        ->capture_default_str();
    app.add_flag("--mf-include-constants", opt.cfg.mf_include_constants,
                 "keep the constant top shift derivatives in the MF family");
    app.add_option("--out", opt.cfg.out, "write the JSON report here instead of stdout");
    for (const char* name : {"trace", "det", "rank", "gap", "cluster", "newton", "gap_floor",
                             "cond_max", "bracket"})
        opt.tol_options[name] =
            app.add_option(std::string("--tol.") + name, opt.tol_overrides[name],
                           std::string("override the '") + name + "' tolerance");

    auto* sc_verify = app.add_subcommand("verify-all", "run every verification suite");
    auto* sc_fiber = app.add_subcommand("fiber", "report the fiber geometry over a point");
    std::string x_arg;
    bool random_x = false;
    sc_fiber->add_option("--x", x_arg, "matrix: JSON file path or inline JSON");
    sc_fiber->add_flag("--random", random_x, "use a random regular semisimple point");
    auto* sc_mf = app.add_subcommand("mf", "build and sweep the argument-shift system");
    std::string beta_arg;
    sc_mf->add_option("--beta", beta_arg, "shift element: JSON file, inline JSON, or 'random'");
    auto* sc_rank =
        app.add_subcommand("rank-system", "build and sweep the invariant-pullback system");
    auto* sc_flow = app.add_subcommand("flow", "integrate a Hamiltonian flow");
    std::string flow_kind = "mf", csv_path;
    int flow_index = -1;
    double flow_step = 1e-3, flow_horizon = 1.0;
    sc_flow->add_option("--system", flow_kind, "mf or rank")->capture_default_str();
    sc_flow->add_option("--index", flow_index, "Hamiltonian index (-1 = all)")
        ->capture_default_str();
    sc_flow->add_option("--step", flow_step, "integration step")->capture_default_str();
    sc_flow->add_option("--horizon", flow_horizon, "integration horizon")
        ->capture_default_str();
    sc_flow->add_option("--csv", csv_path, "write observable-vs-time CSV here");
    auto* sc_info = app.add_subcommand("info", "print dimensions and counts for this n");

    // CLI11 stores unknown errors itself; anything thrown past parse is ours
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        apply(opt);
        if (sc_verify->parsed()) return cmd_verify_all(opt);
        if (sc_fiber->parsed()) {
            if (x_arg.empty() && !random_x)
                throw CLI::ValidationError("fiber", "need --x or --random");
            return cmd_fiber(opt, x_arg, random_x);
        }
        if (sc_mf->parsed()) return cmd_mf(opt, beta_arg);
        if (sc_rank->parsed()) return cmd_rank_system(opt);
        if (sc_flow->parsed())
            return cmd_flow(opt, flow_kind, flow_index, flow_step, flow_horizon, csv_path);
        if (sc_info->parsed()) return cmd_info(opt);
        return 2;
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const json::exception& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "failure: " << e.what() << "\n";
        return 1;
    }
}
