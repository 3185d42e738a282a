#pragma once

#include <Eigen/Core>

#include "rstrade/model.hpp"

namespace rstrade {

/// Smooth penalty barrier beta_eps used by the penalized system.
///
/// Piecewise cubic in s = (2 eps - x)/eps, C^2 on the whole line:
///
///     x >= 2 eps          beta = 0
///     eps <= x <= 2 eps   beta = -c1 s^3
///     0   <= x <= eps     beta = -c1 (2 - 6 s + 6 s^2 - s^3)
///     x <= 0              beta = -6 c1 (s - 1)        (linear tail)
///
/// so that beta(eps) = -c1 exactly, beta(0) = -6 c1, and beta' >= 0,
/// beta'' <= 0 everywhere. The stored c0 = 2 c1 is the comparison constant
/// from the solvability analysis; interpolating beta(0) = -c0 with c0 = 2 c1
/// is incompatible with a C^2 concave barrier (chord slopes would have to
/// be equal, forcing a line), so the spline is deepened to -6 c1 <= -c0,
/// which only strengthens the barrier. Shape properties are asserted
/// numerically per parameter set in the test suite rather than assumed.
struct PenaltyFn {
    double eps;  ///< penalty scale; barrier inactive for x >= 2 eps
    double c0;   ///< comparison depth constant, c0 = 2 c1
    double c1;   ///< exact barrier value at eps: beta(eps) = -c1

    double depth_at_zero() const { return 6.0 * c1; }

    double value(double x) const {
        const double s = (2.0 * eps - x) / eps;
        if (s <= 0.0) return 0.0;
        if (s <= 1.0) return -c1 * s * s * s;
        if (s <= 2.0) return -c1 * (2.0 + s * (-6.0 + s * (6.0 - s)));
        return -6.0 * c1 * (s - 1.0);
    }

    /// d beta / d x  (nonnegative everywhere)
    double slope(double x) const {
        const double s = (2.0 * eps - x) / eps;
        if (s <= 0.0) return 0.0;
        if (s <= 1.0) return 3.0 * c1 * s * s / eps;
        if (s <= 2.0) return 3.0 * c1 * (-2.0 + s * (4.0 - s)) / eps;
        return 6.0 * c1 / eps;
    }

    /// d^2 beta / d x^2  (nonpositive everywhere)
    double curvature(double x) const {
        const double s = (2.0 * eps - x) / eps;
        if (s <= 0.0) return 0.0;
        if (s <= 1.0) return -6.0 * c1 * s / (eps * eps);
        if (s <= 2.0) return -6.0 * c1 * (2.0 - s) / (eps * eps);
        return 0.0;
    }

    ArrayXd value(const Eigen::Ref<const ArrayXd>& x) const {
        return x.unaryExpr([this](double v) { return value(v); });
    }

    ArrayXd slope(const Eigen::Ref<const ArrayXd>& x) const {
        return x.unaryExpr([this](double v) { return slope(v); });
    }
};

/// Construct the barrier with the strength constants from the solvability
/// analysis: c1 = (mu1-mu2)(1+K) + 1 and c0 = c1 + (mu1-mu2)(1+K) + 1.
/// Requires eps > 0; eps < K is required for the two barrier zones of each
/// difference bound not to overlap.
PenaltyFn build_penalty(double eps, const ModelParams& params);

}  // namespace rstrade
