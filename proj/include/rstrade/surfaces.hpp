#pragma once

#include <Eigen/Core>

#include <string>

#include "rstrade/model.hpp"

namespace rstrade {

using Eigen::ArrayXXd;

enum class Provenance { penalty, vi_oracle };

std::string provenance_name(Provenance p);
Provenance provenance_from(const std::string& name);  // throws FormatError-free DomainError

/// Value surfaces of the three positions on a grid. Each array is
/// n_p x (n_t + 1): one column per time level, col(0) = initial data.
/// Values are per unit stock price (the full value is S * v_i(p, T - t)).
struct Surfaces {
    Grid grid;
    Provenance provenance;
    double penalty_eps = 0.0;  // 0 when produced by the vi oracle
    ArrayXXd v0;
    ArrayXXd v1;
    ArrayXXd v_neg1;

    Index n_levels() const { return grid.n_t + 1; }
};

/// Differences u1 = v0 - v1 and u_neg1 = v0 - v_neg1 (same layout).
struct USurfaces {
    ArrayXXd u1;
    ArrayXXd u_neg1;
};

USurfaces u_surfaces(const Surfaces& s);

/// Allocate surfaces holding the exact initial rows in every column of
/// column 0 and zeros elsewhere: v0 = 0, v1 = 1-K, v_neg1 = -(1+K).
Surfaces make_surfaces(const ModelParams& params, const Grid& grid, Provenance prov);

/// Worst violation of the difference-band structure across all levels:
///   -(1+K) <= v0 - v1 <= -(1-K),  1-K <= v0 - v_neg1 <= 1+K,
///   v0 - v1 nonincreasing in p,   v0 - v_neg1 nondecreasing in p,
///   (v0 - v1) + (v0 - v_neg1) >= 0.
/// Returns 0 when every bound holds exactly.
double difference_bounds_violation(const Surfaces& s, const ModelParams& params);

/// Worst violation of time monotonicity: for every grid column, v0 - v1 and
/// v0 - v_neg1 must be nonincreasing in t.
double time_monotonicity_violation(const Surfaces& s);

/// Largest absolute initial-row error vs the exact data (should be 0.0).
double initial_rows_error(const Surfaces& s, const ModelParams& params);

/// Sup-norm gap between two surface sets on the same mesh (max over the
/// three functions). Throws GridMismatch when meshes differ.
double surface_gap(const Surfaces& lhs, const Surfaces& rhs);

}  // namespace rstrade
