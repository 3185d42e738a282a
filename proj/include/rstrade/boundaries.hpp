#pragma once

#include <string>
#include <vector>

#include "rstrade/surfaces.hpp"

namespace rstrade {

/// Shared definition of "contact": obstacle slack at or below this value.
/// Suits surfaces from the projected solver, whose contact slacks are exact
/// zeros; penalized surfaces blur contact to O(penalty_eps), so extraction
/// from them should pass contact_tol ~ 2*penalty_eps instead.
inline constexpr double kContactTol = 1e-6;

/// The four switching curves, one value per time level t = dt .. T.
/// p01 / pneg10 are the left edges of the buy-side contact sets (value 1.0
/// is the no-contact sentinel); p0neg1 / p10 are the right edges of the
/// sell-side sets (sentinel 0.0).
struct FreeBoundaries {
    Grid grid;
    ArrayXd t_values;
    ArrayXd p01;
    ArrayXd p10;
    ArrayXd pneg10;
    ArrayXd p0neg1;

    static constexpr double kSentinelHi = 1.0;
    static constexpr double kSentinelLo = 0.0;

    Index n_levels() const { return t_values.size(); }
    double t_max() const { return t_values(t_values.size() - 1); }
};

/// Scan each time level for the monotone contact sets and return the four
/// curves. Contact sets must be single intervals touching the correct side
/// of the domain; otherwise NonMonotoneContact is thrown (under-resolved
/// grid or solver failure).
FreeBoundaries extract_boundaries(const Surfaces& surfaces, double contact_tol = kContactTol);

struct PropertyCheck {
    std::string name;
    bool pass;
    double margin;     ///< signed; pass iff margin >= -tolerance
    double tolerance;
};

struct PropertyReport {
    std::vector<PropertyCheck> checks;

    bool all_pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
    const PropertyCheck& find(const std::string& name) const;
};

/// Machine-check the proved structure of the curves:
///   ordering      p0neg1 <= p10 <= p* <= pneg10 <= p01 within one cell at all t;
///   monotonicity  p0neg1, pneg10 nondecreasing and p01, p10 nonincreasing,
///                 wrong-direction steps within one cell;
///   hold_time     p01 (resp. p0neg1) still at its sentinel for all
///                 t <= t1_lb (resp. t0_lb) minus the contact-tolerance
///                 allowance log((1+K)/(1+K-tol))/rate and one time step;
///   initial_point |p10 - p*| and |pneg10 - p*| <= 2h at the first level;
///   continuity    adjacent-level jumps <= 4h plus a square-root onset
///                 envelope (regression proxy; no modulus of continuity is
///                 available for the curves).
/// Failures are reported, not thrown.
PropertyReport verify_theorem(const FreeBoundaries& fb, const ModelParams& params,
                              const Grid& grid, double contact_tol = kContactTol);

enum class Action { DoNothing, Buy1, Buy2, Sell1, Sell2 };

std::string action_name(Action a);
int action_delta(Action a);  ///< signed share count: Buy2 -> +2, Sell1 -> -1, ...
Position apply_action(Position pos, Action a);

/// Optimal action for a position at belief p and time-to-maturity t:
///
///   p <= p0neg1          short: hold   flat: sell 1   long: sell 2
///   p0neg1 < p <= p10    short: hold   flat: hold     long: sell 1
///   p10 < p < pneg10     hold everywhere
///   pneg10 <= p < p01    short: buy 1  flat: hold     long: hold
///   p >= p01             short: buy 2  flat: buy 1    long: hold
///
/// Curve values are looked up at the nearest stored time level; throws
/// TimeOutOfRange for t outside [0, t_max].
Action strategy_action(const FreeBoundaries& fb, double t, double p, Position pos);

}  // namespace rstrade
