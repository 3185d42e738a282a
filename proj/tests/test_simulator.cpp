#include <doctest.h>

#include <cmath>
#include <vector>

#include "rstrade/penalty_solver.hpp"
#include "rstrade/simulator.hpp"
#include "rstrade/vi_solver.hpp"

using namespace rstrade;

namespace {

SimConfig base_config(long n_paths, long n_steps, std::uint64_t seed) {
    SimConfig cfg;
    cfg.s0 = 1.0;
    cfg.p_init = 0.5;
    cfg.n_paths = n_paths;
    cfg.n_steps = n_steps;
    cfg.seed = seed;
    return cfg;
}

// horizon planner: small canonical solve shared by the strategy tests
const Surfaces& vi_solution() {
    static const Surfaces s = solve_vi(canonical_params(), make_grid(1.0, 101, 200));
    return s;
}

const FreeBoundaries& vi_curves() {
    static const FreeBoundaries fb = extract_boundaries(vi_solution());
    return fb;
}

}  // namespace

TEST_CASE("identical inputs reproduce bit-identical statistics") {
    const ModelParams params = canonical_params();
    const SimConfig cfg = base_config(500, 50, 42);
    const PathSet paths_a = simulate_paths(params, cfg);
    const PathSet paths_b = simulate_paths(params, cfg);

    const RewardStats a = run_strategy(paths_a, StrategySpec::table(vi_curves()), params, cfg);
    const RewardStats b = run_strategy(paths_b, StrategySpec::table(vi_curves()), params, cfg);
    CHECK(a.mean == b.mean);
    CHECK(a.std_error == b.std_error);
    CHECK(a.trade_count_mean == b.trade_count_mean);

    SimConfig other = cfg;
    other.seed = 43;
    const RewardStats c =
        run_strategy(simulate_paths(params, other), StrategySpec::table(vi_curves()), params, other);
    CHECK(a.mean != c.mean);
}

TEST_CASE("paths stay inside the state space") {
    const ModelParams params = canonical_params();
    const SimConfig cfg = base_config(200, 200, 7);
    const PathSet paths = simulate_paths(params, cfg);
    for (long i = 0; i < cfg.n_paths; i += 17) {
        paths.walk(i, [&](long, double, double S, double p) {
            CHECK(S > 0.0);
            CHECK(p >= 0.0);
            CHECK(p <= 1.0);
        });
    }
}

TEST_CASE("equal drifts reduce the belief to a deterministic relaxation") {
    // validation bypass: mu1 == mu2 kills the belief diffusion
    ModelParams params = canonical_params();
    params.mu1 = params.mu2 = 0.05;
    params.rho = 0.05;
    params.lambda1 = 1.0;
    params.lambda2 = 2.0;

    SimConfig cfg = base_config(3, 2000, 11);
    cfg.p_init = 0.2;
    const PathSet paths = simulate_paths(params, cfg);

    const double lam = params.lambda1 + params.lambda2;
    const double p_bar = params.lambda2 / lam;
    double worst = 0.0;
    paths.walk(0, [&](long, double s, double, double p) {
        const double exact = p_bar + (cfg.p_init - p_bar) * std::exp(-lam * s);
        worst = std::max(worst, std::abs(p - exact));
    });
    CHECK(worst <= 2.0 * paths.dt());
}

TEST_CASE("discounted price is a martingale under equal drifts") {
    ModelParams params = canonical_params();
    params.mu1 = params.mu2 = 0.05;  // validation bypass
    const double mu = 0.05;

    SimConfig cfg = base_config(100000, 10, 2024);
    const PathSet paths = simulate_paths(params, cfg);

    std::vector<double> discounted(cfg.n_paths);
    for (long i = 0; i < cfg.n_paths; ++i) {
        paths.walk(i, [&](long m, double, double S, double) {
            if (m == cfg.n_steps) discounted[i] = std::exp(-mu * params.T) * S;
        });
    }
    double mean = 0.0;
    for (double d : discounted) mean += d;
    mean /= static_cast<double>(cfg.n_paths);
    double var = 0.0;
    for (double d : discounted) var += (d - mean) * (d - mean);
    var /= static_cast<double>(cfg.n_paths - 1);
    const double se = std::sqrt(var / static_cast<double>(cfg.n_paths));

    CHECK(std::abs(mean - cfg.s0) <= 3.0 * se);
}

TEST_CASE("never trading from flat pays exactly zero") {
    const ModelParams params = canonical_params();
    SimConfig cfg = base_config(300, 40, 5);
    cfg.keep_rewards = true;
    const RewardStats stats =
        run_strategy(simulate_paths(params, cfg), StrategySpec::never_trade(), params, cfg);
    CHECK(stats.mean == 0.0);
    CHECK(stats.std_error == 0.0);
    CHECK(stats.trade_count_mean == 0.0);
    for (double r : stats.rewards) CHECK(r == 0.0);
}

TEST_CASE("holding positions book the right cash flows") {
    const ModelParams params = canonical_params();
    SimConfig cfg = base_config(50, 30, 9);
    cfg.keep_rewards = true;

    // a held long liquidates for S_T (1-K) discounted
    SimConfig long_cfg = cfg;
    long_cfg.initial_position = Position::Long;
    const PathSet paths = simulate_paths(params, long_cfg);
    const RewardStats held =
        run_strategy(paths, StrategySpec::never_trade(), params, long_cfg);
    for (long i = 0; i < long_cfg.n_paths; ++i) {
        double terminal = 0.0;
        paths.walk(i, [&](long m, double, double S, double) {
            if (m == long_cfg.n_steps) terminal = S;
        });
        const double expected = std::exp(-params.rho * params.T) * terminal * (1.0 - params.K);
        CHECK(held.rewards[i] == doctest::Approx(expected).epsilon(1e-14));
    }

    // immediate buy from flat: pay s0 (1+K) now, liquidate at T
    const PathSet flat_paths = simulate_paths(params, cfg);
    const RewardStats bought =
        run_strategy(flat_paths, StrategySpec::immediate_buy(), params, cfg);
    for (long i = 0; i < cfg.n_paths; ++i) {
        double terminal = 0.0;
        flat_paths.walk(i, [&](long m, double, double S, double) {
            if (m == cfg.n_steps) terminal = S;
        });
        const double expected = -cfg.s0 * (1.0 + params.K)
                                + std::exp(-params.rho * params.T) * terminal * (1.0 - params.K);
        CHECK(bought.rewards[i] == doctest::Approx(expected).epsilon(1e-13));
    }
}

TEST_CASE("booked gains telescope over legal transitions") {
    const ModelParams params = canonical_params();
    SimConfig cfg = base_config(400, 200, 33);
    cfg.keep_rewards = true;
    const PathSet paths = simulate_paths(params, cfg);
    const RewardStats stats =
        run_strategy(paths, StrategySpec::table(vi_curves()), params, cfg);

    // replay the policy, asserting legal transitions and re-booking the gains
    long paths_with_trades = 0;
    for (long i = 0; i < cfg.n_paths; ++i) {
        Position pos = cfg.initial_position;
        double replayed = 0.0;
        long trades = 0;
        paths.walk(i, [&](long m, double s, double S, double p) {
            if (m == cfg.n_steps) {
                if (pos != Position::Flat) {
                    replayed += std::exp(-params.rho * s) * switch_gain(params, pos, Position::Flat, S);
                    pos = Position::Flat;
                    ++trades;
                }
                return;
            }
            const Action act = strategy_action(vi_curves(), params.T - s, p, pos);
            if (act == Action::DoNothing) return;
            const Position next = apply_action(pos, act);  // throws outside {-1,0,1}
            // a double switch books exactly the sum of its two legs
            if (action_delta(act) == 2) {
                CHECK(switch_gain(params, pos, next, S)
                      == doctest::Approx(switch_gain(params, pos, Position::Flat, S)
                                         + switch_gain(params, Position::Flat, next, S))
                             .epsilon(1e-14));
            }
            replayed += std::exp(-params.rho * s) * switch_gain(params, pos, next, S);
            pos = next;
            ++trades;
        });
        CHECK(pos == Position::Flat);  // terminal flatness
        CHECK(replayed == doctest::Approx(stats.rewards[i]).epsilon(1e-14));
        if (trades > 0) ++paths_with_trades;
    }
    CHECK(paths_with_trades > 0);
}

TEST_CASE("policy range must cover the horizon") {
    const ModelParams params = canonical_params();
    const SimConfig cfg = base_config(10, 10, 1);
    const PathSet paths = simulate_paths(params, cfg);

    // curves solved for a shorter horizon cannot drive a T=1 simulation
    const Surfaces short_s = solve_vi(params, make_grid(0.5, 51, 50));
    const FreeBoundaries short_fb = extract_boundaries(short_s);
    CHECK_THROWS_AS(run_strategy(paths, StrategySpec::table(short_fb), params, cfg),
                    PolicyRangeError);
}

TEST_CASE("raising the fee cannot raise the optimal reward") {
    ModelParams cheap = canonical_params();
    ModelParams costly = canonical_params();
    costly.K = 0.01;

    const Grid grid = make_grid(1.0, 101, 200);
    const FreeBoundaries fb_cheap = extract_boundaries(solve_vi(cheap, grid));
    const FreeBoundaries fb_costly = extract_boundaries(solve_vi(costly, grid));

    const SimConfig cfg = base_config(20000, 200, 77);
    // identical dynamics (K enters only the gains), identical seeds
    const PathSet paths = simulate_paths(cheap, cfg);
    const RewardStats lo = run_strategy(paths, StrategySpec::table(fb_cheap), cheap, cfg);
    const RewardStats hi = run_strategy(paths, StrategySpec::table(fb_costly), costly, cfg);

    const double comb = std::sqrt(lo.std_error * lo.std_error + hi.std_error * hi.std_error);
    CHECK(hi.mean <= lo.mean + 3.0 * comb);
}

TEST_CASE("value check accepts the oracle and ranks the baselines") {
    const ModelParams params = canonical_params();
    SimConfig cfg = base_config(20000, 200, 123);
    const PathSet paths = simulate_paths(params, cfg);

    const RewardStats optimal =
        run_strategy(paths, StrategySpec::table(vi_curves()), params, cfg);
    std::vector<BaselineResult> baselines;
    baselines.push_back({"never_trade",
                         run_strategy(paths, StrategySpec::never_trade(), params, cfg)});
    baselines.push_back({"immediate_buy",
                         run_strategy(paths, StrategySpec::immediate_buy(), params, cfg)});

    const VerdictReport verdict = value_check(optimal, baselines, vi_solution(), cfg);
    INFO("mc=", verdict.mc_mean, " pde=", verdict.pde_value, " thr=", verdict.threshold);
    CHECK(verdict.value_pass);
    CHECK(verdict.all_pass());
    CHECK(verdict.pde_value > 0.0);

    SimConfig outside = cfg;
    outside.p_init = 1e-4;  // below the truncated domain
    CHECK_THROWS_AS(value_check(optimal, baselines, vi_solution(), outside),
                    InterpolationOutOfRange);
}

TEST_CASE("config validation rejects bad simulation inputs") {
    const ModelParams params = canonical_params();
    SimConfig cfg = base_config(10, 10, 1);
    cfg.s0 = 0.0;
    CHECK_THROWS_AS(simulate_paths(params, cfg), DomainError);
    cfg = base_config(10, 10, 1);
    cfg.p_init = 1.0;
    CHECK_THROWS_AS(simulate_paths(params, cfg), DomainError);
    cfg = base_config(0, 10, 1);
    CHECK_THROWS_AS(simulate_paths(params, cfg), DomainError);
}
