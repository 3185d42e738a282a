#include "rstrade/model.hpp"

#include <cmath>
#include <string>

namespace rstrade {

Position position_from(int value) {
    switch (value) {
        case -1: return Position::Short;
        case 0: return Position::Flat;
        case 1: return Position::Long;
        default: throw DomainError("position must be -1, 0 or 1, got " + std::to_string(value));
    }
}

ModelParams validate_params(const ModelParams& raw) {
    auto range = [](bool ok, const char* field, const std::string& msg) {
        if (!ok) throw ParamRangeViolation(field, msg);
    };
    range(std::isfinite(raw.K) && raw.K > 0.0 && raw.K < 1.0, "K",
          "K must lie strictly in (0,1), got " + std::to_string(raw.K));
    range(std::isfinite(raw.sigma) && raw.sigma > 0.0, "sigma", "sigma must be positive");
    range(std::isfinite(raw.lambda1) && raw.lambda1 > 0.0, "lambda1", "lambda1 must be positive");
    range(std::isfinite(raw.lambda2) && raw.lambda2 > 0.0, "lambda2", "lambda2 must be positive");
    range(std::isfinite(raw.T) && raw.T > 0.0, "T", "T must be positive");
    range(std::isfinite(raw.mu1) && std::isfinite(raw.mu2) && std::isfinite(raw.rho), "rho",
          "mu1, mu2, rho must be finite");

    if (!(raw.mu1 > raw.rho))
        throw ParamOrderViolation("mu1", "required mu1 > rho > mu2, got mu1 <= rho");
    if (!(raw.rho > raw.mu2))
        throw ParamOrderViolation("mu2", "required mu1 > rho > mu2, got rho <= mu2");
    return raw;
}

double p_star(const ModelParams& params) {
    return (params.rho - params.mu2) / (params.mu1 - params.mu2);
}

HoldTimeBounds hold_time_bounds(const ModelParams& params) {
    const double num = std::log((1.0 + params.K) / (1.0 - params.K));
    return HoldTimeBounds{num / (params.rho - params.mu2), num / (params.mu1 - params.rho)};
}

OperatorCoeffs operator_coeffs(const ModelParams& params, double p) {
    if (!(p >= 0.0 && p <= 1.0))
        throw DomainError("p must lie in [0,1], got " + std::to_string(p));
    const double dmu = params.mu1 - params.mu2;
    const double g = dmu * p * (1.0 - p);
    const double a = 0.5 * (g / params.sigma) * (g / params.sigma);
    const double b = -(params.lambda1 + params.lambda2) * p + params.lambda2 + g;
    const double c = dmu * p + params.mu2 - params.rho;
    return OperatorCoeffs{a, b, c};
}

double switch_gain(const ModelParams& params, Position from, Position to, double S) {
    // Per-share cash flow: a unit buy costs S(1+K), a unit sell earns S(1-K);
    // two-unit switches telescope through the flat position.
    const int delta = position_value(to) - position_value(from);
    if (delta == 0) return 0.0;
    if (delta > 0) return -static_cast<double>(delta) * S * (1.0 + params.K);
    return -static_cast<double>(delta) * S * (1.0 - params.K);
}

Grid make_grid(double T, Index n_p, Index n_t, std::optional<double> eps_opt) {
    if (!(T > 0.0)) throw DomainError("grid horizon T must be positive");
    if (n_p < 3) throw DomainError("grid needs at least 3 spatial nodes");
    if (n_t < 1) throw DomainError("grid needs at least 1 time step");

    const double eps = eps_opt.value_or(1.0 / static_cast<double>(n_p + 1));
    if (!(eps >= 0.0 && eps < 0.5))
        throw DomainError("truncation margin eps must lie in [0, 0.5)");

    Grid g;
    g.p_lo = eps;
    g.p_hi = 1.0 - eps;
    g.n_p = n_p;
    g.n_t = n_t;
    g.eps = eps;
    g.h = (g.p_hi - g.p_lo) / static_cast<double>(n_p - 1);
    g.dt = T / static_cast<double>(n_t);
    g.T = T;
    return g;
}

}  // namespace rstrade
