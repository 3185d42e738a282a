#pragma once

#include <Eigen/Core>

#include "rstrade/model.hpp"

namespace rstrade {

/// Solve a tridiagonal system  (lower_i x_{i-1} + diag_i x_i + upper_i x_{i+1} = rhs_i)
/// by the Thomas algorithm. lower(0) and upper(n-1) are ignored.
/// No pivoting: callers supply diagonally dominant systems.
template <typename Scalar>
Eigen::Array<Scalar, Eigen::Dynamic, 1> solve_tridiagonal(
    const Eigen::Ref<const Eigen::Array<Scalar, Eigen::Dynamic, 1>>& lower,
    const Eigen::Ref<const Eigen::Array<Scalar, Eigen::Dynamic, 1>>& diag,
    const Eigen::Ref<const Eigen::Array<Scalar, Eigen::Dynamic, 1>>& upper,
    const Eigen::Ref<const Eigen::Array<Scalar, Eigen::Dynamic, 1>>& rhs) {
    const Eigen::Index n = diag.size();
    Eigen::Array<Scalar, Eigen::Dynamic, 1> c_prime(n), x(n);
    Scalar denom = diag(0);
    c_prime(0) = upper(0) / denom;
    x(0) = rhs(0) / denom;
    for (Eigen::Index i = 1; i < n; ++i) {
        denom = diag(i) - lower(i) * c_prime(i - 1);
        c_prime(i) = (i + 1 < n) ? upper(i) / denom : Scalar(0);
        x(i) = (rhs(i) - lower(i) * x(i - 1)) / denom;
    }
    for (Eigen::Index i = n - 2; i >= 0; --i) x(i) -= c_prime(i) * x(i + 1);
    return x;
}

/// Tridiagonal finite-difference representation of the generator,
///   (L u)_i = lower_i u_{i-1} + diag_i u_i + upper_i u_{i+1},
/// with lower(0) = upper(n-1) = 0.
///
/// Interior rows use central differences for the drift where the cell Peclet
/// number |b| h / a <= 2 and first-order upwind otherwise, so off-diagonal
/// entries are always nonnegative. Boundary rows close the mesh:
///   - eps > 0: reflecting (zero-slope) rows — mirrored diffusion stencil,
///     drift term dropped;
///   - eps = 0: the operator degenerates (a = 0) and the rows reduce to
///     one-sided transport consistent with the inflow sign of b
///     (b(0) = lambda2 > 0, b(1) = -lambda1 < 0).
struct TridiagonalOperator {
    ArrayXd lower;
    ArrayXd diag;
    ArrayXd upper;

    /// Largest dt for which I - dt*L has a strictly dominant diagonal;
    /// rows sum to c(p), so the limit is 1 / max(c^+).
    double monotone_dt_limit;

    Index size() const { return diag.size(); }

    ArrayXd apply(const Eigen::Ref<const ArrayXd>& u) const {
        const Index n = u.size();
        ArrayXd out = diag * u;
        out.head(n - 1) += upper.head(n - 1) * u.tail(n - 1);
        out.tail(n - 1) += lower.tail(n - 1) * u.head(n - 1);
        return out;
    }
};

TridiagonalOperator assemble_generator(const ModelParams& params, const Grid& grid);

/// Backward-Euler step matrix M = I - dt*L (same tridiagonal layout).
/// Throws DomainError if dt exceeds the operator's monotonicity limit.
struct TridiagonalMatrix {
    ArrayXd lower;
    ArrayXd diag;
    ArrayXd upper;

    Index size() const { return diag.size(); }

    ArrayXd apply(const Eigen::Ref<const ArrayXd>& u) const {
        const Index n = u.size();
        ArrayXd out = diag * u;
        out.head(n - 1) += upper.head(n - 1) * u.tail(n - 1);
        out.tail(n - 1) += lower.tail(n - 1) * u.head(n - 1);
        return out;
    }

    ArrayXd solve(const Eigen::Ref<const ArrayXd>& rhs) const {
        return solve_tridiagonal<double>(lower, diag, upper, rhs);
    }
};

TridiagonalMatrix make_step_matrix(const TridiagonalOperator& op, double dt);

}  // namespace rstrade
