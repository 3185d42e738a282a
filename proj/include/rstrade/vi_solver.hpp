#pragma once

#include <array>
#include <functional>

#include "rstrade/assembly.hpp"
#include "rstrade/surfaces.hpp"

namespace rstrade {

struct ViOptions {
    double fp_tol = 1e-9;        ///< sup-change exit threshold per time level
    int max_outer = 10000;       ///< sweep budget per time level
    double comp_exit_tol = 1e-8; ///< level-local complementarity exit threshold (PDE units)
    /// optional instrumentation: called once per sweep with (level, sweep, sup_change)
    std::function<void(long, int, double)> on_sweep;
};

struct ViDiagnostics {
    int worst_sweeps = 0;
    long total_sweeps = 0;
    double worst_complementarity = 0.0;
};

/// Worst-case complementarity violations of a surface set, per function
/// (index 0 -> v0, 1 -> v1, 2 -> v_neg1). Residuals are in PDE units:
/// (v^n - v^{n-1})/dt - L v^n, evaluated with the shared discrete generator.
struct ComplementarityReport {
    std::array<double, 3> pde_residual_neg{};       ///< worst negative residual magnitude
    std::array<double, 3> obstacle_violation{};     ///< worst negative slack magnitude
    std::array<double, 3> complementarity_product{};///< worst residual+ * slack+
    double tol = 0.0;

    double max_pde_residual_neg() const;
    double max_obstacle_violation() const;
    double max_complementarity_product() const;
    double worst() const;
    bool pass() const { return worst() <= tol; }
};

/// Direct solver for the discretized obstacle system: per time level, the
/// coupled complementarity problem is solved by projected Gauss-Seidel
/// sweeps per function (v0, then v1, then v_neg1, obstacles reading the
/// freshest iterates), iterated to a joint fixed point. A level exits when
/// the sup-change drops below fp_tol and the level-local complementarity
/// violations are below comp_exit_tol; FixedPointStall otherwise.
Surfaces solve_vi(const ModelParams& params, const Grid& grid, const ViOptions& opts = {},
                  ViDiagnostics* diagnostics = nullptr);

/// Recompute discrete PDE residuals and obstacle slacks at every node of
/// every time level and report the worst violations. Throws GridMismatch
/// when the surfaces were produced on a different mesh.
ComplementarityReport complementarity_check(const Surfaces& surfaces, const ModelParams& params,
                                            const Grid& grid, double tol);

}  // namespace rstrade
