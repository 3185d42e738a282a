#pragma once

#include <Eigen/Core>

#include <optional>

#include "rstrade/errors.hpp"

namespace rstrade {

using Eigen::ArrayXd;
using Eigen::Index;

/// Net stock position: short one share, flat, or long one share.
enum class Position : int { Short = -1, Flat = 0, Long = 1 };

inline int position_value(Position p) { return static_cast<int>(p); }

Position position_from(int value);  // throws DomainError outside {-1,0,1}

/// Market constants of the two-state hidden drift model, plus the horizon.
///
/// mu1/mu2 are the bull/bear expected returns, sigma the volatility, rho the
/// discount rate, lambda1/lambda2 the bull->bear and bear->bull transition
/// intensities, K the proportional transaction fee, T the horizon.
struct ModelParams {
    double mu1;
    double mu2;
    double sigma;
    double rho;
    double lambda1;
    double lambda2;
    double K;
    double T;
};

/// Canonical parameter set used by the test and acceptance suites.
/// The model itself does not pin numeric values; these are a repo default.
inline ModelParams canonical_params() {
    return ModelParams{0.2, -0.1, 0.3, 0.05, 1.0, 1.0, 0.001, 1.0};
}

/// Fail-fast validation of the standing assumptions:
///   0 < K < 1,  mu1 > rho > mu2,  sigma > 0,  lambda1 > 0,  lambda2 > 0,  T > 0.
/// Returns the params unchanged iff every constraint holds; throws
/// ParamOrderViolation / ParamRangeViolation naming the offending field.
/// Downstream operations assume validated params and never re-check.
ModelParams validate_params(const ModelParams& raw);

/// Belief threshold p0 = (rho - mu2) / (mu1 - mu2), strictly inside (0,1)
/// for validated params. The zeroth-order coefficient c(p) changes sign here.
double p_star(const ModelParams& params);

/// Lower bounds on the initial hold intervals (in time-to-maturity) during
/// which the flat->long (t1_lb) and flat->short (t0_lb) boundaries sit on the
/// domain edge: log((1+K)/(1-K)) divided by (mu1-rho) resp. (rho-mu2).
struct HoldTimeBounds {
    double t0_lb;
    double t1_lb;
};

HoldTimeBounds hold_time_bounds(const ModelParams& params);

/// Coefficients of the generator at a point:  L u = a u'' + b u' + c u.
/// a vanishes exactly at p = 0 and p = 1 (degenerate endpoints).
struct OperatorCoeffs {
    double a;
    double b;
    double c;
};

OperatorCoeffs operator_coeffs(const ModelParams& params, double p);

/// Trading gain when switching from position `from` to `to` at price S:
///   buys cost S(1+K) per share, sells earn S(1-K) per share, and a
///   double switch books the sum of the two single switches.
double switch_gain(const ModelParams& params, Position from, Position to, double S);

/// Uniform space-time mesh over [p_lo, p_hi] x [0, T].
///
/// When the truncation margin eps is active, p_lo = eps and p_hi = 1 - eps.
/// eps = 0 selects the untruncated domain [0, 1] with one-sided upwind rows
/// at the degenerate endpoints.
struct Grid {
    double p_lo;
    double p_hi;
    Index n_p;
    Index n_t;
    double eps;
    double h;
    double dt;
    double T;

    double node(Index i) const { return p_lo + h * static_cast<double>(i); }
    double time(Index n) const { return dt * static_cast<double>(n); }

    bool same_mesh(const Grid& other) const {
        return p_lo == other.p_lo && p_hi == other.p_hi && n_p == other.n_p
            && n_t == other.n_t && T == other.T;
    }
};

/// Build a uniform grid. Default truncation margin is one cell: eps = h,
/// which solves eps = (1 - 2 eps)/(n_p - 1), i.e. eps = 1/(n_p + 1).
/// Pass eps = 0 explicitly for the untruncated degenerate-endpoint mesh.
Grid make_grid(double T, Index n_p, Index n_t, std::optional<double> eps = std::nullopt);

}  // namespace rstrade
