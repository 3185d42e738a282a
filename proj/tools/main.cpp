// Command-line front end: solve / verify / simulate / plotdata.
//
// Exit codes: 0 all checks pass, 1 checks ran and failed, 2 input or usage
// error, 3 solver failure.

#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "rstrade/cli.hpp"
#include "rstrade/errors.hpp"

using namespace rstrade;

int main(int argc, char** argv) {
    CLI::App app{"regime-switching trading boundary solver"};
    app.require_subcommand(1);

    std::string config_path, surfaces_path, out_dir = ".", method = "both";
    long n_paths = 100000;
    std::uint64_t seed = 1;
    VerifyOptions verify_opts;
    SimulateOptions sim_opts;

    auto* solve = app.add_subcommand("solve", "solve the value surfaces");
    solve->add_option("--config", config_path, "config JSON")->required();
    solve->add_option("--method", method, "penalty|vi|both");
    solve->add_option("--out", out_dir, "output directory");

    auto* verify = app.add_subcommand("verify", "re-check a surface file");
    verify->add_option("--surfaces", surfaces_path, "surface CSV")->required();
    verify->add_option("--out", out_dir, "output directory");
    verify->add_option("--tol", verify_opts.bounds_tol, "bound-check tolerance");

    auto* simulate = app.add_subcommand("simulate", "Monte Carlo strategy validation");
    simulate->add_option("--config", config_path, "config JSON")->required();
    simulate->add_option("--surfaces", surfaces_path, "surface CSV")->required();
    simulate->add_option("--paths", n_paths, "number of paths");
    simulate->add_option("--seed", seed, "RNG seed");
    simulate->add_option("--out", out_dir, "output directory");
    simulate->add_option("--s0", sim_opts.s0, "initial price");
    simulate->add_option("--p-init", sim_opts.p_init, "initial belief");
    simulate->add_option("--steps", sim_opts.n_steps, "simulation steps (default: grid n_t)");
    simulate->add_option("--position", sim_opts.initial_position, "initial position (-1|0|1)");
    simulate->add_flag("--per-path", sim_opts.per_path_csv, "write per-path rewards CSV");

    auto* plotdata = app.add_subcommand("plotdata", "emit boundary curves for plotting");
    plotdata->add_option("--surfaces", surfaces_path, "surface CSV")->required();
    plotdata->add_option("--out", out_dir, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        RunManifest manifest;
        if (solve->parsed()) {
            manifest = cmd_solve(config_path, method_from(method), out_dir);
        } else if (verify->parsed()) {
            manifest = cmd_verify(surfaces_path, out_dir, verify_opts);
        } else if (simulate->parsed()) {
            manifest = cmd_simulate(config_path, surfaces_path, n_paths, seed, out_dir, sim_opts);
        } else {
            manifest = cmd_plotdata(surfaces_path, out_dir);
        }
        if (!manifest.pass) {
            std::cerr << manifest.command << ": checks failed (see " << out_dir << ")\n";
            return 1;
        }
        return 0;
    } catch (const NewtonDivergence& e) {
        std::cerr << "solver failure: " << e.what() << '\n';
        return 3;
    } catch (const FixedPointStall& e) {
        std::cerr << "solver failure: " << e.what() << '\n';
        return 3;
    } catch (const NonMonotoneContact& e) {
        std::cerr << "solver failure: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
