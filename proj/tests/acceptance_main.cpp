// Acceptance checklist at desk scale: canonical parameters, 401 x 2000 mesh
// on [h, 1-h] x [0, 1], penalty scale 1e-4, 1e5 Monte Carlo paths. Prints one
// pass/fail line per criterion and exits nonzero if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "rstrade/boundaries.hpp"
#include "rstrade/cli.hpp"
#include "rstrade/penalty_solver.hpp"
#include "rstrade/simulator.hpp"
#include "rstrade/surface_io.hpp"
#include "rstrade/vi_solver.hpp"

using namespace rstrade;
namespace fs = std::filesystem;

namespace {

bool g_all_pass = true;

void report(int id, const std::string& name, bool pass, const std::string& detail) {
    std::printf("[%s] criterion %d: %s (%s)\n", pass ? "PASS" : "FAIL", id, name.c_str(),
                detail.c_str());
    std::fflush(stdout);
    g_all_pass &= pass;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

// v0 at maturity sampled at interior probes, for cross-mesh comparison
double probe_gap(const Surfaces& a, const Surfaces& b) {
    auto sample = [](const Surfaces& s, double p) {
        const Grid& g = s.grid;
        const double x = (p - g.p_lo) / g.h;
        const Index j = std::min<Index>(static_cast<Index>(x), g.n_p - 2);
        const double w = x - static_cast<double>(j);
        return (1.0 - w) * s.v0(j, g.n_t) + w * s.v0(j + 1, g.n_t);
    };
    double worst = 0.0;
    for (int k = 1; k <= 9; ++k) {
        const double p = 0.1 * k;
        worst = std::max(worst, std::abs(sample(a, p) - sample(b, p)));
    }
    return worst;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
}

}  // namespace

int main() {
    const ModelParams params = canonical_params();
    const double penalty_eps = 1e-4;
    const Grid grid = make_grid(params.T, 401, 2000);

    auto t0 = std::chrono::steady_clock::now();
    const Surfaces penalty_s = solve_penalized(params, grid, penalty_eps);
    const double penalty_time = seconds_since(t0);

    t0 = std::chrono::steady_clock::now();
    const Surfaces vi_s = solve_vi(params, grid);
    const double vi_time = seconds_since(t0);
    std::printf("solve timings: penalty %.1fs, projected sweeps %.1fs\n", penalty_time, vi_time);

    // 1. initial rows exact
    {
        const double err =
            std::max(initial_rows_error(penalty_s, params), initial_rows_error(vi_s, params));
        report(1, "initial rows exact", err <= 1e-16, "max error " + fmt(err));
    }

    // 2. difference bounds, p-monotonicity, nonnegative sum, both solvers
    {
        const double vp = difference_bounds_violation(penalty_s, params);
        const double vv = difference_bounds_violation(vi_s, params);
        report(2, "difference bounds and p-monotonicity", std::max(vp, vv) <= 1e-3,
               "violation penalty " + fmt(vp) + ", oracle " + fmt(vv) + ", tol 1e-3");
    }

    // 3. time monotonicity of both differences
    {
        const double vp = time_monotonicity_violation(penalty_s);
        const double vv = time_monotonicity_violation(vi_s);
        report(3, "time monotonicity of differences", std::max(vp, vv) <= 1e-3,
               "violation penalty " + fmt(vp) + ", oracle " + fmt(vv) + ", tol 1e-3");
    }

    // 4. cross-solver agreement, improving as the penalty scale shrinks
    {
        const double gap = surface_gap(penalty_s, vi_s);
        const Surfaces finer = solve_penalized(params, grid, penalty_eps / 2.0);
        const double gap_half = surface_gap(finer, vi_s);
        report(4, "cross-solver agreement", gap <= 5e-3 && gap_half < gap,
               "sup gap " + fmt(gap) + " (tol 5e-3), halved-scale gap " + fmt(gap_half));
    }

    // 5. complementarity of the oracle's own output
    {
        const ComplementarityReport comp = complementarity_check(vi_s, params, grid, 1e-5);
        report(5, "complementarity self-check", comp.pass(),
               "worst residual " + fmt(comp.max_pde_residual_neg()) + ", slack "
                   + fmt(comp.max_obstacle_violation()) + ", product "
                   + fmt(comp.max_complementarity_product()) + ", tol 1e-5");
    }

    // 6. free-boundary structure on the oracle solution
    {
        const FreeBoundaries fb = extract_boundaries(vi_s, kContactTol);
        const double h = grid.h;
        const double p0 = p_star(params);
        const Index m = fb.n_levels();

        Index separated = m;
        for (Index k = 0; k < m; ++k) {
            const bool gaps = fb.p10(k) - fb.p0neg1(k) > h && p0 - fb.p10(k) > h
                              && fb.pneg10(k) - p0 > h && fb.p01(k) - fb.pneg10(k) > h;
            if (gaps) {
                separated = k;
                break;
            }
        }
        double order_margin = 1.0;
        for (Index k = separated; k < m; ++k)
            order_margin = std::min({order_margin, fb.p10(k) - fb.p0neg1(k), p0 - fb.p10(k),
                                     fb.pneg10(k) - p0, fb.p01(k) - fb.pneg10(k)});
        const bool ordering_ok = separated < m && order_margin >= -h;

        double mono_margin = 1.0;
        for (Index k = 0; k + 1 < m; ++k)
            mono_margin = std::min({mono_margin, fb.p0neg1(k + 1) - fb.p0neg1(k),
                                    fb.pneg10(k + 1) - fb.pneg10(k), fb.p01(k) - fb.p01(k + 1),
                                    fb.p10(k) - fb.p10(k + 1)});
        const bool mono_ok = mono_margin >= -h;

        // 1e-12 absorbs the float rounding of p* against exact mesh nodes
        const bool initial_ok = std::abs(fb.p10(0) - p0) <= 2.0 * h + 1e-12
                                && std::abs(fb.pneg10(0) - p0) <= 2.0 * h + 1e-12;

        bool sentinel_ok = true;
        for (Index k = 0; k < m; ++k) {
            if (fb.t_values(k) <= 0.0133) {
                sentinel_ok &= fb.p01(k) == FreeBoundaries::kSentinelHi;
                sentinel_ok &= fb.p0neg1(k) == FreeBoundaries::kSentinelLo;
            }
        }

        report(6, "free boundary structure", ordering_ok && mono_ok && initial_ok && sentinel_ok,
               "ordering margin " + fmt(order_margin) + ", monotone margin " + fmt(mono_margin)
                   + ", |p10(0+)-p*| " + fmt(std::abs(fb.p10(0) - p0)) + ", sentinels "
                   + (sentinel_ok ? "held" : "broken"));
    }

    // 7. spatial refinement is Cauchy at first order or better
    {
        const Surfaces coarse = solve_penalized(params, make_grid(params.T, 201, 2000), penalty_eps);
        const Surfaces fine = solve_penalized(params, make_grid(params.T, 801, 2000), penalty_eps);
        const double change1 = probe_gap(coarse, penalty_s);
        const double change2 = probe_gap(penalty_s, fine);
        report(7, "spatial grid convergence", change2 <= 4.0 * change1,
               "change 201->401 " + fmt(change1) + ", 401->801 " + fmt(change2) + ", ratio "
                   + fmt(change2 / change1));
    }

    // 8. Monte Carlo value agreement and baseline dominance
    {
        t0 = std::chrono::steady_clock::now();
        const FreeBoundaries fb = extract_boundaries(penalty_s, 2.0 * penalty_eps);

        SimConfig cfg;
        cfg.s0 = 1.0;
        cfg.p_init = 0.5;
        cfg.n_paths = 100000;
        cfg.n_steps = grid.n_t;
        cfg.seed = 20240807;
        const PathSet paths = simulate_paths(params, cfg);

        const RewardStats optimal = run_strategy(paths, StrategySpec::table(fb), params, cfg);
        std::vector<BaselineResult> baselines;
        baselines.push_back(
            {"never_trade", run_strategy(paths, StrategySpec::never_trade(), params, cfg)});
        baselines.push_back(
            {"immediate_buy", run_strategy(paths, StrategySpec::immediate_buy(), params, cfg)});
        const VerdictReport verdict = value_check(optimal, baselines, penalty_s, cfg);

        const bool never_zero = baselines[0].stats.mean == 0.0;

        SimConfig bear = cfg;
        bear.p_init = 0.2;
        const PathSet bear_paths = simulate_paths(params, bear);
        const RewardStats bear_opt = run_strategy(bear_paths, StrategySpec::table(fb), params, bear);
        const RewardStats bear_buy =
            run_strategy(bear_paths, StrategySpec::immediate_buy(), params, bear);
        const double comb3 =
            3.0 * std::sqrt(bear_opt.std_error * bear_opt.std_error
                            + bear_buy.std_error * bear_buy.std_error);
        const bool dominated = bear_opt.mean - bear_buy.mean > comb3;

        report(8, "monte carlo value agreement",
               verdict.all_pass() && never_zero && dominated,
               "mc " + fmt(verdict.mc_mean) + " vs pde " + fmt(verdict.pde_value) + " (band "
                   + fmt(verdict.threshold) + "), bear-entry dominance gap "
                   + fmt(bear_opt.mean - bear_buy.mean) + " > " + fmt(comb3) + ", "
                   + fmt(seconds_since(t0)) + "s");
    }

    // 9. byte-identical reruns through the command layer
    {
        const fs::path dir = fs::temp_directory_path() / "rstrade_acceptance";
        fs::remove_all(dir);
        fs::create_directories(dir);
        const fs::path cfg_path = dir / "config.json";
        std::ofstream(cfg_path) << R"({
          "mu1": 0.2, "mu2": -0.1, "sigma": 0.3, "rho": 0.05,
          "lambda1": 1.0, "lambda2": 1.0, "K": 0.001, "T": 1.0,
          "n_p": 101, "n_t": 200, "penalty_eps": 0.0001
        })";

        cmd_solve(cfg_path, SolveMethod::both, dir / "a");
        cmd_solve(cfg_path, SolveMethod::both, dir / "b");
        const bool solves_identical =
            slurp(dir / "a" / "surfaces_penalty.csv") == slurp(dir / "b" / "surfaces_penalty.csv")
            && slurp(dir / "a" / "surfaces_vi.csv") == slurp(dir / "b" / "surfaces_vi.csv");

        cmd_simulate(cfg_path, dir / "a" / "surfaces_vi.csv", 20000, 99, dir / "sim_a", {});
        cmd_simulate(cfg_path, dir / "a" / "surfaces_vi.csv", 20000, 99, dir / "sim_b", {});
        const bool sims_identical = slurp(dir / "sim_a" / "simulation_report.json")
                                    == slurp(dir / "sim_b" / "simulation_report.json");

        report(9, "byte-identical determinism", solves_identical && sims_identical,
               std::string("solves ") + (solves_identical ? "identical" : "differ") + ", reports "
                   + (sims_identical ? "identical" : "differ"));
    }

    std::printf("%s\n", g_all_pass ? "acceptance: ALL CRITERIA PASS" : "acceptance: FAILURES");
    return g_all_pass ? 0 : 1;
}
