#include "rstrade/penalty_solver.hpp"

#include <algorithm>
#include <cmath>

namespace rstrade {

namespace {

struct StepResult {
    ArrayXd u1;
    ArrayXd u_neg1;
    double residual;
    int iterations;
};

// Barrier sums of the two equations, evaluated in PDE units.
ArrayXd barrier_u1(const PenaltyFn& pen, double K, const ArrayXd& u1, const ArrayXd& un1) {
    return pen.value(u1 + (1.0 + K)) - pen.value(-u1 - (1.0 - K)) + pen.value(un1 - (1.0 - K));
}

ArrayXd barrier_un1(const PenaltyFn& pen, double K, const ArrayXd& u1, const ArrayXd& un1) {
    return pen.value(un1 - (1.0 - K)) - pen.value(-un1 + (1.0 + K)) + pen.value(u1 + (1.0 + K));
}

// Exact Newton step for the coupled pair. The two equations interleave into
// a pentadiagonal system (tridiagonal per function plus diagonal cross
// blocks); it is strictly diagonally dominant whenever the iterate satisfies
// the sum inequality u1 + u_neg1 >= 0, because each cross slope is then
// bounded by a matching own-diagonal barrier slope. Eliminated without
// pivoting.
void solve_coupled(const TridiagonalMatrix& A, const TridiagonalMatrix& B, const ArrayXd& cross1,
                   const ArrayXd& cross2, const ArrayXd& rhs1, const ArrayXd& rhs2, ArrayXd& dx1,
                   ArrayXd& dx2) {
    const Index n = A.size();
    const Index nn = 2 * n;
    ArrayXd bm2 = ArrayXd::Zero(nn), bm1 = ArrayXd::Zero(nn), b0 = ArrayXd::Zero(nn),
            bp1 = ArrayXd::Zero(nn), bp2 = ArrayXd::Zero(nn), y(nn);
    for (Index i = 0; i < n; ++i) {
        const Index r = 2 * i;
        b0(r) = A.diag(i);
        bp1(r) = cross1(i);
        if (i > 0) bm2(r) = A.lower(i);
        if (i + 1 < n) bp2(r) = A.upper(i);
        y(r) = rhs1(i);

        b0(r + 1) = B.diag(i);
        bm1(r + 1) = cross2(i);
        if (i > 0) bm2(r + 1) = B.lower(i);
        if (i + 1 < n) bp2(r + 1) = B.upper(i);
        y(r + 1) = rhs2(i);
    }
    for (Index r = 0; r + 1 < nn; ++r) {
        const double piv = b0(r);
        if (bm1(r + 1) != 0.0) {
            const double f = bm1(r + 1) / piv;
            b0(r + 1) -= f * bp1(r);
            bp1(r + 1) -= f * bp2(r);
            y(r + 1) -= f * y(r);
        }
        if (r + 2 < nn && bm2(r + 2) != 0.0) {
            const double f = bm2(r + 2) / piv;
            bm1(r + 2) -= f * bp1(r);
            b0(r + 2) -= f * bp2(r);
            y(r + 2) -= f * y(r);
        }
    }
    ArrayXd x(nn);
    x(nn - 1) = y(nn - 1) / b0(nn - 1);
    x(nn - 2) = (y(nn - 2) - bp1(nn - 2) * x(nn - 1)) / b0(nn - 2);
    for (Index r = nn - 3; r >= 0; --r)
        x(r) = (y(r) - bp1(r) * x(r + 1) - bp2(r) * x(r + 2)) / b0(r);
    dx1.resize(n);
    dx2.resize(n);
    for (Index i = 0; i < n; ++i) {
        dx1(i) = x(2 * i);
        dx2(i) = x(2 * i + 1);
    }
}

StepResult step_u_impl(const TridiagonalMatrix& M, double dt, const PenaltyFn& pen, double K,
                       const Eigen::Ref<const ArrayXd>& u1_prev,
                       const Eigen::Ref<const ArrayXd>& un1_prev,
                       const NewtonOptions& opts, long time_index) {
    ArrayXd u1 = u1_prev;
    ArrayXd un1 = un1_prev;

    // residual in PDE units: F = (M u - u_prev)/dt + barrier(u)
    auto residual_u1 = [&](const ArrayXd& a, const ArrayXd& b) -> ArrayXd {
        return (M.apply(a) - u1_prev) / dt + barrier_u1(pen, K, a, b);
    };
    auto residual_un1 = [&](const ArrayXd& a, const ArrayXd& b) -> ArrayXd {
        return (M.apply(b) - un1_prev) / dt + barrier_un1(pen, K, a, b);
    };

    ArrayXd f1 = residual_u1(u1, un1);
    ArrayXd f2 = residual_un1(u1, un1);
    double res = std::max(f1.abs().maxCoeff(), f2.abs().maxCoeff());

    for (int iter = 0; iter < opts.max_iter; ++iter) {
        if (res < opts.tol) return {std::move(u1), std::move(un1), res, iter};

        // own-diagonal barrier slopes; both terms enter with positive sign
        const ArrayXd g1 = pen.slope(u1 + (1.0 + K)) + pen.slope(-u1 - (1.0 - K));
        const ArrayXd delta1 = solve_tridiagonal<double>(
            M.lower, M.diag + dt * g1, M.upper, (-dt * f1).eval());

        bool accepted = false;
        double alpha = 1.0;
        ArrayXd u1_c, un1_c, f1_c, f2_c;
        for (int halving = 0; halving <= opts.max_halvings; ++halving) {
            u1_c = u1 + alpha * delta1;
            const ArrayXd f2_mid = residual_un1(u1_c, un1);
            const ArrayXd g2 = pen.slope(un1 - (1.0 - K)) + pen.slope(-un1 + (1.0 + K));
            const ArrayXd delta2 = solve_tridiagonal<double>(
                M.lower, M.diag + dt * g2, M.upper, (-dt * f2_mid).eval());
            un1_c = un1 + alpha * delta2;

            f1_c = residual_u1(u1_c, un1_c);
            f2_c = residual_un1(u1_c, un1_c);
            const double res_c = std::max(f1_c.abs().maxCoeff(), f2_c.abs().maxCoeff());
            if (res_c < res || res_c < opts.tol) {
                u1 = std::move(u1_c);
                un1 = std::move(un1_c);
                f1 = std::move(f1_c);
                f2 = std::move(f2_c);
                res = res_c;
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }

        if (!accepted) {
            // The per-function sweep drops the cross barrier slopes; when both
            // barriers are stiff at once the joint residual can refuse to
            // fall along that direction. Take the exact coupled step instead.
            TridiagonalMatrix A = M, B = M;
            A.diag += dt * g1;
            B.diag += dt * (pen.slope(un1 - (1.0 - K)) + pen.slope(-un1 + (1.0 + K)));
            const ArrayXd cross1 = dt * pen.slope(un1 - (1.0 - K));
            const ArrayXd cross2 = dt * pen.slope(u1 + (1.0 + K));
            ArrayXd d1, d2;
            solve_coupled(A, B, cross1, cross2, (-dt * f1).eval(), (-dt * f2).eval(), d1, d2);

            alpha = 1.0;
            for (int halving = 0; halving <= opts.max_halvings && !accepted; ++halving) {
                u1_c = u1 + alpha * d1;
                un1_c = un1 + alpha * d2;
                f1_c = residual_u1(u1_c, un1_c);
                f2_c = residual_un1(u1_c, un1_c);
                const double res_c = std::max(f1_c.abs().maxCoeff(), f2_c.abs().maxCoeff());
                if (res_c < res || res_c < opts.tol) {
                    u1 = std::move(u1_c);
                    un1 = std::move(un1_c);
                    f1 = std::move(f1_c);
                    f2 = std::move(f2_c);
                    res = res_c;
                    accepted = true;
                }
                alpha *= 0.5;
            }
        }
        if (!accepted) throw NewtonDivergence(res, time_index);
    }
    if (res < opts.tol) return {std::move(u1), std::move(un1), res, opts.max_iter};
    throw NewtonDivergence(res, time_index);
}

}  // namespace

std::pair<ArrayXd, ArrayXd> step_u(const ModelParams& params, const Grid& grid,
                                   const PenaltyFn& pen,
                                   const Eigen::Ref<const ArrayXd>& u1_prev,
                                   const Eigen::Ref<const ArrayXd>& u_neg1_prev,
                                   const NewtonOptions& opts) {
    const TridiagonalOperator op = assemble_generator(params, grid);
    const TridiagonalMatrix M = make_step_matrix(op, grid.dt);
    StepResult r = step_u_impl(M, grid.dt, pen, params.K, u1_prev, u_neg1_prev, opts, 1);
    return {std::move(r.u1), std::move(r.u_neg1)};
}

Surfaces solve_penalized(const ModelParams& params, const Grid& grid, double penalty_eps,
                         const NewtonOptions& opts, PenaltyDiagnostics* diagnostics) {
    const PenaltyFn pen = build_penalty(penalty_eps, params);
    const TridiagonalOperator op = assemble_generator(params, grid);
    const TridiagonalMatrix M = make_step_matrix(op, grid.dt);
    const double K = params.K;
    const double dt = grid.dt;

    Surfaces s = make_surfaces(params, grid, Provenance::penalty);
    s.penalty_eps = penalty_eps;

    ArrayXXd u1(grid.n_p, grid.n_t + 1);
    ArrayXXd un1(grid.n_p, grid.n_t + 1);
    u1.col(0) = ArrayXd::Constant(grid.n_p, -(1.0 - K));
    un1.col(0) = ArrayXd::Constant(grid.n_p, 1.0 + K);

    PenaltyDiagnostics diag;
    for (Index n = 1; n <= grid.n_t; ++n) {
        StepResult r = step_u_impl(M, dt, pen, K, u1.col(n - 1), un1.col(n - 1), opts, n);
        u1.col(n) = r.u1;
        un1.col(n) = r.u_neg1;
        diag.worst_residual = std::max(diag.worst_residual, r.residual);
        diag.worst_iterations = std::max(diag.worst_iterations, r.iterations);
        diag.total_iterations += r.iterations;
    }

    // v0 solves the linear equation driven by the marched pair's barriers.
    for (Index n = 1; n <= grid.n_t; ++n) {
        const ArrayXd source = pen.value((u1.col(n) + (1.0 + K)).eval())
                             + pen.value((un1.col(n) - (1.0 - K)).eval());
        s.v0.col(n) = M.solve((s.v0.col(n - 1) - dt * source).eval());
    }
    s.v1 = s.v0 - u1;
    s.v_neg1 = s.v0 - un1;

    if (diagnostics) *diagnostics = diag;
    return s;
}

}  // namespace rstrade
