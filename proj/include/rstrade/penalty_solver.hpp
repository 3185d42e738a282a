#pragma once

#include <utility>

#include "rstrade/assembly.hpp"
#include "rstrade/penalty.hpp"
#include "rstrade/surfaces.hpp"

namespace rstrade {

struct NewtonOptions {
    double tol = 1e-10;   ///< absolute sup-norm of the discrete-equation residual
    int max_iter = 50;
    int max_halvings = 20;
};

struct PenaltyDiagnostics {
    double worst_residual = 0.0;  ///< largest exit residual over all levels
    int worst_iterations = 0;     ///< most Newton iterations a level needed
    long total_iterations = 0;
};

/// One fully implicit step of the coupled difference system.
///
/// Solves the backward-Euler discretization of
///   d_t u1    - L u1    + b(u1+1+K) - b(-u1-(1-K))  + b(u_n1-(1-K)) = 0
///   d_t u_n1  - L u_n1  + b(u_n1-(1-K)) - b(-u_n1+(1+K)) + b(u1+1+K) = 0
/// with zero-slope closure, by damped Newton: tridiagonal linearization per
/// function, block Gauss-Seidel coupling (u1 first, then u_n1 against the
/// fresh u1), step halving when the joint residual fails to drop.
/// Returns the next row pair; throws NewtonDivergence on stall.
std::pair<ArrayXd, ArrayXd> step_u(const ModelParams& params, const Grid& grid,
                                   const PenaltyFn& pen,
                                   const Eigen::Ref<const ArrayXd>& u1_prev,
                                   const Eigen::Ref<const ArrayXd>& u_neg1_prev,
                                   const NewtonOptions& opts = {});

/// March the penalized system over the whole grid and reconstruct the three
/// value surfaces: the u-pair is stepped level by level, then v0 solves its
/// linear equation driven by the barrier terms of the marched pair, and
/// v1 = v0 - u1, v_neg1 = v0 - u_neg1.
Surfaces solve_penalized(const ModelParams& params, const Grid& grid, double penalty_eps,
                         const NewtonOptions& opts = {},
                         PenaltyDiagnostics* diagnostics = nullptr);

}  // namespace rstrade
