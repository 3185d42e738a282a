#include "rstrade/cli.hpp"

#include <chrono>
#include <ctime>
#include <fstream>

#include "rstrade/boundaries.hpp"
#include "rstrade/errors.hpp"
#include "rstrade/penalty_solver.hpp"
#include "rstrade/simulator.hpp"
#include "rstrade/surface_io.hpp"
#include "rstrade/vi_solver.hpp"

namespace rstrade {

namespace fs = std::filesystem;

namespace {

std::string iso_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t tt = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&tt, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void record_output(RunManifest& m, const fs::path& path) {
    m.outputs.push_back({path.string(), fs::file_size(path)});
}

void write_json(const fs::path& path, const nlohmann::json& doc) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("out", "cannot write " + path.string());
    out << doc.dump(2) << '\n';
}

void write_manifest(const fs::path& out_dir, RunManifest& m) {
    m.finished_at = iso_now();
    write_json(out_dir / "run_manifest.json", manifest_json(m));
}

/// Contact tolerance appropriate for the surface provenance: exact contact
/// for the projected solver, the barrier activation width for penalized ones.
double contact_tol_for(const Surfaces& s) {
    return s.provenance == Provenance::penalty ? std::max(kContactTol, 2.0 * s.penalty_eps)
                                               : kContactTol;
}

nlohmann::json stats_json(const RewardStats& stats) {
    return {{"mean", stats.mean},
            {"std_error", stats.std_error},
            {"trade_count_mean", stats.trade_count_mean},
            {"n_paths", stats.n_paths}};
}

}  // namespace

SolveMethod method_from(const std::string& name) {
    if (name == "penalty") return SolveMethod::penalty;
    if (name == "vi") return SolveMethod::vi;
    if (name == "both") return SolveMethod::both;
    throw ConfigError("method", "unknown method \"" + name + "\" (penalty|vi|both)");
}

nlohmann::json manifest_json(const RunManifest& m) {
    nlohmann::json outputs = nlohmann::json::array();
    for (const auto& o : m.outputs) outputs.push_back({{"path", o.path}, {"bytes", o.bytes}});
    return nlohmann::json{{"command", m.command},
                          {"config_digest", m.config_digest},
                          {"versions", {{"rstrade", kVersion}}},
                          {"started_at", m.started_at},
                          {"finished_at", m.finished_at},
                          {"outputs", outputs},
                          {"pass", m.pass}};
}

RunManifest cmd_solve(const fs::path& config_path, SolveMethod method, const fs::path& out_dir) {
    RunManifest manifest;
    manifest.command = "solve";
    manifest.started_at = iso_now();

    const RunConfig cfg = load_config(config_path);
    manifest.config_digest = config_digest(cfg);
    const Grid grid = grid_from(cfg);
    fs::create_directories(out_dir);

    Surfaces penalty_s, vi_s;
    const bool want_penalty = method != SolveMethod::vi;
    const bool want_vi = method != SolveMethod::penalty;

    if (want_penalty) {
        PenaltyDiagnostics diag;
        penalty_s = solve_penalized(cfg.params, grid, cfg.penalty_eps, {}, &diag);
        const fs::path csv = out_dir / "surfaces_penalty.csv";
        write_surfaces_csv(csv, penalty_s);
        write_surface_metadata(csv, penalty_s, cfg,
                               {{"worst_newton_residual", diag.worst_residual},
                                {"worst_newton_iterations", diag.worst_iterations},
                                {"total_newton_iterations", diag.total_iterations}});
        record_output(manifest, csv);
        record_output(manifest, metadata_path_for(csv));
    }
    if (want_vi) {
        ViDiagnostics diag;
        vi_s = solve_vi(cfg.params, grid, {}, &diag);
        const fs::path csv = out_dir / "surfaces_vi.csv";
        write_surfaces_csv(csv, vi_s);
        write_surface_metadata(csv, vi_s, cfg,
                               {{"worst_sweeps", diag.worst_sweeps},
                                {"total_sweeps", diag.total_sweeps},
                                {"worst_complementarity", diag.worst_complementarity}});
        record_output(manifest, csv);
        record_output(manifest, metadata_path_for(csv));
    }
    if (method == SolveMethod::both) {
        const fs::path gap_path = out_dir / "gap_report.json";
        write_json(gap_path,
                   {{"sup_gap_v0", (penalty_s.v0 - vi_s.v0).abs().maxCoeff()},
                    {"sup_gap_v1", (penalty_s.v1 - vi_s.v1).abs().maxCoeff()},
                    {"sup_gap_v_neg1", (penalty_s.v_neg1 - vi_s.v_neg1).abs().maxCoeff()},
                    {"sup_gap", surface_gap(penalty_s, vi_s)}});
        record_output(manifest, gap_path);
    }

    write_manifest(out_dir, manifest);
    return manifest;
}

RunManifest cmd_verify(const fs::path& surfaces_path, const fs::path& out_dir,
                       const VerifyOptions& opts) {
    RunManifest manifest;
    manifest.command = "verify";
    manifest.started_at = iso_now();

    LoadedSurfaces loaded = read_surfaces(surfaces_path);
    const Surfaces& s = loaded.surfaces;
    const ModelParams& params = loaded.config.params;
    manifest.config_digest = loaded.config_digest;
    fs::create_directories(out_dir);

    PropertyReport report;
    report.checks.push_back({"initial_rows", initial_rows_error(s, params) <= 1e-14,
                             1e-14 - initial_rows_error(s, params), 0.0});
    const double band = difference_bounds_violation(s, params);
    report.checks.push_back({"difference_bounds", band <= opts.bounds_tol,
                             opts.bounds_tol - band, opts.bounds_tol});
    const double tmono = time_monotonicity_violation(s);
    report.checks.push_back({"time_monotonicity", tmono <= opts.bounds_tol,
                             opts.bounds_tol - tmono, opts.bounds_tol});

    const double contact_tol = contact_tol_for(s);
    try {
        const FreeBoundaries fb = extract_boundaries(s, contact_tol);
        const PropertyReport curve_report = verify_theorem(fb, params, s.grid, contact_tol);
        for (const auto& c : curve_report.checks) report.checks.push_back(c);

        const fs::path bcsv = out_dir / "boundaries.csv";
        write_boundaries_csv(bcsv, fb, p_star(params));
        record_output(manifest, bcsv);
    } catch (const NonMonotoneContact&) {
        report.checks.push_back({"extraction", false, -1.0, 0.0});
    }

    const double comp_tol = s.provenance == Provenance::vi_oracle ? 1e-5 : 1e-3;
    const ComplementarityReport comp = complementarity_check(s, params, s.grid, comp_tol);
    report.checks.push_back({"complementarity", comp.pass(), comp.tol - comp.worst(), comp.tol});

    const fs::path prop_path = out_dir / "property_report.json";
    write_json(prop_path, property_report_json(report));
    record_output(manifest, prop_path);
    const fs::path comp_path = out_dir / "complementarity_report.json";
    write_json(comp_path, complementarity_report_json(comp));
    record_output(manifest, comp_path);

    manifest.pass = report.all_pass();
    write_manifest(out_dir, manifest);
    return manifest;
}

RunManifest cmd_simulate(const fs::path& config_path, const fs::path& surfaces_path, long n_paths,
                         std::uint64_t seed, const fs::path& out_dir,
                         const SimulateOptions& opts) {
    RunManifest manifest;
    manifest.command = "simulate";
    manifest.started_at = iso_now();

    const RunConfig cfg = load_config(config_path);
    manifest.config_digest = config_digest(cfg);

    LoadedSurfaces loaded = read_surfaces(surfaces_path);
    if (loaded.config_digest != manifest.config_digest)
        throw ParamMismatch("config digest " + manifest.config_digest
                            + " does not match surface metadata digest " + loaded.config_digest);
    const Surfaces& s = loaded.surfaces;
    fs::create_directories(out_dir);

    SimConfig sim;
    sim.s0 = opts.s0;
    sim.p_init = opts.p_init;
    sim.n_paths = n_paths;
    sim.n_steps = opts.n_steps > 0 ? opts.n_steps : s.grid.n_t;
    sim.seed = seed;
    sim.initial_position = position_from(opts.initial_position);
    sim.keep_rewards = opts.per_path_csv;

    const PathSet paths = simulate_paths(cfg.params, sim);
    const FreeBoundaries fb = extract_boundaries(s, contact_tol_for(s));

    const RewardStats optimal = run_strategy(paths, StrategySpec::table(fb), cfg.params, sim);
    std::vector<BaselineResult> baselines;
    baselines.push_back(
        {"never_trade", run_strategy(paths, StrategySpec::never_trade(), cfg.params, sim)});
    baselines.push_back(
        {"immediate_buy", run_strategy(paths, StrategySpec::immediate_buy(), cfg.params, sim)});

    const VerdictReport verdict = value_check(optimal, baselines, s, sim);

    nlohmann::json baseline_json;
    for (std::size_t i = 0; i < baselines.size(); ++i) {
        baseline_json[baselines[i].name] = stats_json(baselines[i].stats);
        baseline_json[baselines[i].name]["excess_over_optimal"] =
            verdict.baselines[i].excess_over_optimal;
        baseline_json[baselines[i].name]["combined_3se"] = verdict.baselines[i].combined_3se;
        baseline_json[baselines[i].name]["pass"] = verdict.baselines[i].pass;
    }
    const nlohmann::json report{
        {"config_digest", manifest.config_digest},
        {"sim",
         {{"s0", sim.s0},
          {"p_init", sim.p_init},
          {"n_paths", sim.n_paths},
          {"n_steps", sim.n_steps},
          {"seed", sim.seed},
          {"initial_position", position_value(sim.initial_position)}}},
        {"optimal", stats_json(optimal)},
        {"baselines", baseline_json},
        {"value_check",
         {{"mc_mean", verdict.mc_mean},
          {"pde_value", verdict.pde_value},
          {"abs_diff", verdict.abs_diff},
          {"threshold", verdict.threshold},
          {"pass", verdict.value_pass}}},
        {"pass", verdict.all_pass()}};

    const fs::path report_path = out_dir / "simulation_report.json";
    write_json(report_path, report);
    record_output(manifest, report_path);

    if (opts.per_path_csv) {
        const fs::path pp = out_dir / "per_path.csv";
        std::ofstream out(pp, std::ios::binary | std::ios::trunc);
        out << "path,reward,n_trades\n";
        for (std::size_t i = 0; i < optimal.rewards.size(); ++i)
            out << i << ',' << format_double(optimal.rewards[i]) << ','
                << static_cast<long>(optimal.trade_counts[i]) << '\n';
        out.close();
        record_output(manifest, pp);
    }

    manifest.pass = verdict.all_pass();
    write_manifest(out_dir, manifest);
    return manifest;
}

RunManifest cmd_plotdata(const fs::path& surfaces_path, const fs::path& out_dir) {
    RunManifest manifest;
    manifest.command = "plotdata";
    manifest.started_at = iso_now();

    LoadedSurfaces loaded = read_surfaces(surfaces_path);
    manifest.config_digest = loaded.config_digest;
    fs::create_directories(out_dir);

    const FreeBoundaries fb = extract_boundaries(loaded.surfaces, contact_tol_for(loaded.surfaces));
    const fs::path path = out_dir / "plot_boundaries.csv";
    write_boundaries_csv(path, fb, p_star(loaded.config.params));
    record_output(manifest, path);

    write_manifest(out_dir, manifest);
    return manifest;
}

}  // namespace rstrade
