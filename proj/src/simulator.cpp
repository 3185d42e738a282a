#include "rstrade/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <span>

#include "rstrade/errors.hpp"

namespace rstrade {

namespace {

// Order-independent pairwise reduction.
double pairwise_sum(std::span<const double> xs) {
    if (xs.size() <= 64) {
        double acc = 0.0;
        for (double x : xs) acc += x;
        return acc;
    }
    const std::size_t half = xs.size() / 2;
    return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

void validate_sim_config(const SimConfig& cfg) {
    if (!(cfg.s0 > 0.0)) throw DomainError("s0 must be positive");
    if (!(cfg.p_init > 0.0 && cfg.p_init < 1.0))
        throw DomainError("p_init must lie strictly in (0,1)");
    if (cfg.n_paths < 1) throw DomainError("n_paths must be >= 1");
    if (cfg.n_steps < 1) throw DomainError("n_steps must be >= 1");
}

}  // namespace

PathSet::PathSet(const ModelParams& params, const SimConfig& cfg)
    : params_(params), cfg_(cfg) {
    validate_sim_config(cfg);
    dt_ = params.T / static_cast<double>(cfg.n_steps);
    sqrt_dt_ = std::sqrt(dt_);
}

void PathSet::advance(double& log_s, double& p, double z) const {
    const double dmu = params_.mu1 - params_.mu2;
    const double mu_p = dmu * p + params_.mu2;
    const double dnu = sqrt_dt_ * z;

    log_s += (mu_p - 0.5 * params_.sigma * params_.sigma) * dt_ + params_.sigma * dnu;
    p += (-(params_.lambda1 + params_.lambda2) * p + params_.lambda2) * dt_
         + dmu * p * (1.0 - p) / params_.sigma * dnu;
    p = std::clamp(p, kClamp, 1.0 - kClamp);
}

PathSet simulate_paths(const ModelParams& params, const SimConfig& cfg) {
    return PathSet(params, cfg);
}

RewardStats run_strategy(const PathSet& paths, const StrategySpec& strategy,
                         const ModelParams& params, const SimConfig& cfg) {
    if (strategy.kind == StrategySpec::Kind::table) {
        if (strategy.boundaries == nullptr)
            throw PolicyRangeError("table strategy requires boundary curves");
        if (strategy.boundaries->t_max() + 0.5 * strategy.boundaries->grid.dt < params.T)
            throw PolicyRangeError("boundary curves do not cover [0, T]");
    }

    const long n_paths = paths.n_paths();
    const long n_steps = paths.n_steps();
    std::vector<double> rewards(static_cast<std::size_t>(n_paths));
    std::vector<double> trades(static_cast<std::size_t>(n_paths));

    for (long path = 0; path < n_paths; ++path) {
        Position pos = cfg.initial_position;
        double reward = 0.0;
        long n_trades = 0;

        paths.walk(path, [&](long m, double s_time, double S, double p) {
            if (m == n_steps) {
                // maturity: the net position must be flat
                if (pos != Position::Flat) {
                    reward += std::exp(-params.rho * s_time)
                              * switch_gain(params, pos, Position::Flat, S);
                    pos = Position::Flat;
                    ++n_trades;
                }
                return;
            }
            Action act = Action::DoNothing;
            switch (strategy.kind) {
                case StrategySpec::Kind::table:
                    act = strategy_action(*strategy.boundaries, params.T - s_time, p, pos);
                    break;
                case StrategySpec::Kind::never_trade:
                    break;
                case StrategySpec::Kind::immediate_buy:
                    if (m == 0 && pos == Position::Flat) act = Action::Buy1;
                    break;
            }
            if (act != Action::DoNothing) {
                const Position next = apply_action(pos, act);
                reward += std::exp(-params.rho * s_time) * switch_gain(params, pos, next, S);
                pos = next;
                ++n_trades;
            }
        });

        rewards[static_cast<std::size_t>(path)] = reward;
        trades[static_cast<std::size_t>(path)] = static_cast<double>(n_trades);
    }

    RewardStats stats;
    stats.n_paths = n_paths;
    stats.mean = pairwise_sum(rewards) / static_cast<double>(n_paths);
    stats.trade_count_mean = pairwise_sum(trades) / static_cast<double>(n_paths);

    std::vector<double> sq(static_cast<std::size_t>(n_paths));
    for (std::size_t i = 0; i < sq.size(); ++i) {
        const double d = rewards[i] - stats.mean;
        sq[i] = d * d;
    }
    const double var = n_paths > 1 ? pairwise_sum(sq) / static_cast<double>(n_paths - 1) : 0.0;
    stats.std_error = std::sqrt(var / static_cast<double>(n_paths));

    if (cfg.keep_rewards) {
        stats.rewards = std::move(rewards);
        stats.trade_counts = std::move(trades);
    }
    return stats;
}

namespace {

double interpolate_terminal(const Surfaces& surfaces, Position pos, double p) {
    const Grid& grid = surfaces.grid;
    if (!(p >= grid.p_lo && p <= grid.p_hi))
        throw InterpolationOutOfRange("p_init outside the surface domain ["
                                      + std::to_string(grid.p_lo) + ", "
                                      + std::to_string(grid.p_hi) + "]");
    const ArrayXXd& v = pos == Position::Flat ? surfaces.v0
                       : pos == Position::Long ? surfaces.v1
                                               : surfaces.v_neg1;
    const Index last = grid.n_t;
    const double x = (p - grid.p_lo) / grid.h;
    const Index j = std::min<Index>(static_cast<Index>(x), grid.n_p - 2);
    const double w = x - static_cast<double>(j);
    return (1.0 - w) * v(j, last) + w * v(j + 1, last);
}

}  // namespace

VerdictReport value_check(const RewardStats& optimal, const std::vector<BaselineResult>& baselines,
                          const Surfaces& surfaces, const SimConfig& cfg) {
    VerdictReport report;
    report.mc_mean = optimal.mean;
    report.mc_std_error = optimal.std_error;
    report.pde_value = cfg.s0 * interpolate_terminal(surfaces, cfg.initial_position, cfg.p_init);
    report.abs_diff = std::abs(optimal.mean - report.pde_value);
    const double allowance =
        kMcAllowanceCoeff * (surfaces.grid.h + surfaces.grid.dt + surfaces.penalty_eps);
    report.threshold = 3.0 * optimal.std_error + allowance;
    report.value_pass = report.abs_diff <= report.threshold;

    for (const auto& b : baselines) {
        VerdictReport::BaselineCheck check;
        check.name = b.name;
        check.mean = b.stats.mean;
        check.excess_over_optimal = b.stats.mean - optimal.mean;
        check.combined_3se = 3.0 * std::sqrt(optimal.std_error * optimal.std_error
                                             + b.stats.std_error * b.stats.std_error);
        check.pass = check.excess_over_optimal <= check.combined_3se;
        report.baselines.push_back(std::move(check));
    }
    return report;
}

}  // namespace rstrade
