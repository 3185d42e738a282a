#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "rstrade/model.hpp"

namespace rstrade {

/// Resolved run configuration: validated params plus mesh and penalty scale.
struct RunConfig {
    ModelParams params;
    Index n_p = 0;
    Index n_t = 0;
    double eps = 0.0;          ///< resolved truncation margin
    double penalty_eps = 1e-4; ///< resolved penalty scale
};

/// Parse the flat JSON config document. Required keys: mu1, mu2, sigma, rho,
/// lambda1, lambda2, K, T, n_p, n_t; optional: eps, penalty_eps. Unknown
/// keys are an error. Throws ConfigError naming the offending key, or the
/// parameter-validation errors for value violations.
RunConfig parse_config(const nlohmann::json& doc);

RunConfig load_config(const std::filesystem::path& path);

Grid grid_from(const RunConfig& cfg);

/// FNV-1a hash of the canonical key=value rendering (resolved defaults
/// included), as a 16-digit hex string. Detects parameter drift between a
/// config and the surfaces solved from it.
std::string config_digest(const RunConfig& cfg);

nlohmann::json config_json(const RunConfig& cfg);

/// Shortest decimal rendering that round-trips to the same double.
std::string format_double(double v);

}  // namespace rstrade
