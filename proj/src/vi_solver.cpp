#include "rstrade/vi_solver.hpp"

#include <algorithm>
#include <cmath>

namespace rstrade {

namespace {

// One projected Gauss-Seidel sweep of (M w = q, w >= psi), in place.
void pgs_sweep(const TridiagonalMatrix& M, const double* q, const double* psi, double* w,
               Index n) {
    for (Index i = 0; i < n; ++i) {
        double rhs = q[i];
        if (i > 0) rhs -= M.lower(i) * w[i - 1];
        if (i + 1 < n) rhs -= M.upper(i) * w[i + 1];
        const double val = rhs / M.diag(i);
        w[i] = std::max(val, psi[i]);
    }
}

struct LevelViolation {
    double residual_neg = 0.0;
    double obstacle = 0.0;
    double product = 0.0;

    double worst() const { return std::max({residual_neg, obstacle, product}); }
};

LevelViolation level_violation(const TridiagonalMatrix& M, double dt, const ArrayXd& w,
                               const ArrayXd& q, const ArrayXd& psi) {
    const ArrayXd r = (M.apply(w) - q) / dt;
    const ArrayXd s = w - psi;
    LevelViolation v;
    v.residual_neg = std::max(0.0, (-r).maxCoeff());
    v.obstacle = std::max(0.0, (-s).maxCoeff());
    v.product = (r.max(0.0) * s.max(0.0)).maxCoeff();
    return v;
}

}  // namespace

double ComplementarityReport::max_pde_residual_neg() const {
    return *std::max_element(pde_residual_neg.begin(), pde_residual_neg.end());
}

double ComplementarityReport::max_obstacle_violation() const {
    return *std::max_element(obstacle_violation.begin(), obstacle_violation.end());
}

double ComplementarityReport::max_complementarity_product() const {
    return *std::max_element(complementarity_product.begin(), complementarity_product.end());
}

double ComplementarityReport::worst() const {
    return std::max({max_pde_residual_neg(), max_obstacle_violation(),
                     max_complementarity_product()});
}

Surfaces solve_vi(const ModelParams& params, const Grid& grid, const ViOptions& opts,
                  ViDiagnostics* diagnostics) {
    const TridiagonalOperator op = assemble_generator(params, grid);
    const TridiagonalMatrix M = make_step_matrix(op, grid.dt);
    const double K = params.K;
    const double dt = grid.dt;
    const Index n = grid.n_p;

    Surfaces s = make_surfaces(params, grid, Provenance::vi_oracle);
    ViDiagnostics diag;

    ArrayXd w0 = s.v0.col(0), w1 = s.v1.col(0), wn1 = s.v_neg1.col(0);
    ArrayXd psi0(n), psi1(n), psin1(n);

    for (Index level = 1; level <= grid.n_t; ++level) {
        const ArrayXd q0 = s.v0.col(level - 1);
        const ArrayXd q1 = s.v1.col(level - 1);
        const ArrayXd qn1 = s.v_neg1.col(level - 1);
        // warm start from the previous level
        w0 = q0;
        w1 = q1;
        wn1 = qn1;

        int sweep = 0;
        bool converged = false;
        double last_change = 0.0;
        while (sweep < opts.max_outer) {
            ++sweep;
            const ArrayXd w0_old = w0, w1_old = w1, wn1_old = wn1;

            psi0 = (w1 - (1.0 + K)).max(wn1 + (1.0 - K));
            pgs_sweep(M, q0.data(), psi0.data(), w0.data(), n);
            psi1 = w0 + (1.0 - K);
            pgs_sweep(M, q1.data(), psi1.data(), w1.data(), n);
            psin1 = w0 - (1.0 + K);
            pgs_sweep(M, qn1.data(), psin1.data(), wn1.data(), n);

            const double change = std::max({(w0 - w0_old).abs().maxCoeff(),
                                            (w1 - w1_old).abs().maxCoeff(),
                                            (wn1 - wn1_old).abs().maxCoeff()});
            last_change = change;
            if (opts.on_sweep) opts.on_sweep(level, sweep, change);

            if (change < opts.fp_tol) {
                psi0 = (w1 - (1.0 + K)).max(wn1 + (1.0 - K));
                psi1 = w0 + (1.0 - K);
                psin1 = w0 - (1.0 + K);
                const double worst = std::max({level_violation(M, dt, w0, q0, psi0).worst(),
                                               level_violation(M, dt, w1, q1, psi1).worst(),
                                               level_violation(M, dt, wn1, qn1, psin1).worst()});
                if (worst <= opts.comp_exit_tol) {
                    diag.worst_complementarity = std::max(diag.worst_complementarity, worst);
                    converged = true;
                    break;
                }
            }
        }
        if (!converged) throw FixedPointStall(last_change, level);
        diag.worst_sweeps = std::max(diag.worst_sweeps, sweep);
        diag.total_sweeps += sweep;

        s.v0.col(level) = w0;
        s.v1.col(level) = w1;
        s.v_neg1.col(level) = wn1;
    }

    if (diagnostics) *diagnostics = diag;
    return s;
}

ComplementarityReport complementarity_check(const Surfaces& surfaces, const ModelParams& params,
                                            const Grid& grid, double tol) {
    if (!surfaces.grid.same_mesh(grid))
        throw GridMismatch("surfaces were produced on a different mesh");

    const TridiagonalOperator op = assemble_generator(params, grid);
    const TridiagonalMatrix M = make_step_matrix(op, grid.dt);
    const double K = params.K;
    const double dt = grid.dt;

    ComplementarityReport report;
    report.tol = tol;

    for (Index level = 1; level <= grid.n_t; ++level) {
        const ArrayXd v0 = surfaces.v0.col(level);
        const ArrayXd v1 = surfaces.v1.col(level);
        const ArrayXd vn1 = surfaces.v_neg1.col(level);

        const ArrayXd psi0 = (v1 - (1.0 + K)).max(vn1 + (1.0 - K));
        const ArrayXd psi1 = v0 + (1.0 - K);
        const ArrayXd psin1 = v0 - (1.0 + K);

        const LevelViolation lv[3] = {
            level_violation(M, dt, v0, surfaces.v0.col(level - 1), psi0),
            level_violation(M, dt, v1, surfaces.v1.col(level - 1), psi1),
            level_violation(M, dt, vn1, surfaces.v_neg1.col(level - 1), psin1)};
        for (int f = 0; f < 3; ++f) {
            report.pde_residual_neg[f] = std::max(report.pde_residual_neg[f], lv[f].residual_neg);
            report.obstacle_violation[f] = std::max(report.obstacle_violation[f], lv[f].obstacle);
            report.complementarity_product[f] =
                std::max(report.complementarity_product[f], lv[f].product);
        }
    }
    return report;
}

}  // namespace rstrade
