#include "rstrade/surfaces.hpp"

#include <algorithm>

#include "rstrade/errors.hpp"

namespace rstrade {

std::string provenance_name(Provenance p) {
    return p == Provenance::penalty ? "penalty" : "vi_oracle";
}

Provenance provenance_from(const std::string& name) {
    if (name == "penalty") return Provenance::penalty;
    if (name == "vi_oracle") return Provenance::vi_oracle;
    throw DomainError("unknown solver provenance: " + name);
}

USurfaces u_surfaces(const Surfaces& s) {
    return USurfaces{s.v0 - s.v1, s.v0 - s.v_neg1};
}

Surfaces make_surfaces(const ModelParams& params, const Grid& grid, Provenance prov) {
    Surfaces s;
    s.grid = grid;
    s.provenance = prov;
    s.v0 = ArrayXXd::Zero(grid.n_p, grid.n_t + 1);
    s.v1 = ArrayXXd::Zero(grid.n_p, grid.n_t + 1);
    s.v_neg1 = ArrayXXd::Zero(grid.n_p, grid.n_t + 1);
    s.v1.col(0) = 1.0 - params.K;
    s.v_neg1.col(0) = -(1.0 + params.K);
    return s;
}

double difference_bounds_violation(const Surfaces& s, const ModelParams& params) {
    const double K = params.K;
    const ArrayXXd u1 = s.v0 - s.v1;
    const ArrayXXd un1 = s.v0 - s.v_neg1;

    double worst = 0.0;
    worst = std::max(worst, (-(1.0 + K) - u1).maxCoeff());
    worst = std::max(worst, (u1 + (1.0 - K)).maxCoeff());
    worst = std::max(worst, ((1.0 - K) - un1).maxCoeff());
    worst = std::max(worst, (un1 - (1.0 + K)).maxCoeff());
    worst = std::max(worst, (-(u1 + un1)).maxCoeff());

    const Index n = s.grid.n_p;
    // row-wise monotonicity in p: forward differences of u1 must be <= 0,
    // of u_neg1 must be >= 0
    worst = std::max(worst, (u1.bottomRows(n - 1) - u1.topRows(n - 1)).maxCoeff());
    worst = std::max(worst, (un1.topRows(n - 1) - un1.bottomRows(n - 1)).maxCoeff());
    return std::max(worst, 0.0);
}

double time_monotonicity_violation(const Surfaces& s) {
    const ArrayXXd u1 = s.v0 - s.v1;
    const ArrayXXd un1 = s.v0 - s.v_neg1;
    const Index m = s.n_levels();
    double worst = (u1.rightCols(m - 1) - u1.leftCols(m - 1)).maxCoeff();
    worst = std::max(worst, (un1.rightCols(m - 1) - un1.leftCols(m - 1)).maxCoeff());
    return std::max(worst, 0.0);
}

double initial_rows_error(const Surfaces& s, const ModelParams& params) {
    double worst = s.v0.col(0).abs().maxCoeff();
    worst = std::max(worst, (s.v1.col(0) - (1.0 - params.K)).abs().maxCoeff());
    worst = std::max(worst, (s.v_neg1.col(0) + (1.0 + params.K)).abs().maxCoeff());
    return worst;
}

double surface_gap(const Surfaces& lhs, const Surfaces& rhs) {
    if (!lhs.grid.same_mesh(rhs.grid))
        throw GridMismatch("surface gap requires identical meshes");
    double gap = (lhs.v0 - rhs.v0).abs().maxCoeff();
    gap = std::max(gap, (lhs.v1 - rhs.v1).abs().maxCoeff());
    gap = std::max(gap, (lhs.v_neg1 - rhs.v_neg1).abs().maxCoeff());
    return gap;
}

}  // namespace rstrade
