#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "rstrade/boundaries.hpp"
#include "rstrade/config.hpp"
#include "rstrade/surfaces.hpp"
#include "rstrade/vi_solver.hpp"

namespace rstrade {

/// Surface CSV: header `t,p,v0,v1,v_neg1,u1,u_neg1`, one row per node,
/// row-major by time level, shortest round-trip decimals.
void write_surfaces_csv(const std::filesystem::path& path, const Surfaces& s);

/// Sidecar metadata written next to the CSV (<stem>.meta.json): params,
/// grid, penalty scale, provenance, config digest, solver diagnostics.
void write_surface_metadata(const std::filesystem::path& csv_path, const Surfaces& s,
                            const RunConfig& cfg, const nlohmann::json& diagnostics);

std::filesystem::path metadata_path_for(const std::filesystem::path& csv_path);

struct LoadedSurfaces {
    Surfaces surfaces;
    RunConfig config;          ///< reconstructed from metadata, re-validated
    std::string config_digest; ///< digest recorded at solve time
    nlohmann::json metadata;
};

/// Read a surface CSV plus its metadata sidecar. Throws FormatError with the
/// offending line number on malformed or truncated CSV, ConfigError when the
/// sidecar is missing or inconsistent.
LoadedSurfaces read_surfaces(const std::filesystem::path& csv_path);

/// Boundary CSV: `t,p_0_neg1,p_1_0,p_star,p_neg1_0,p_0_1`.
void write_boundaries_csv(const std::filesystem::path& path, const FreeBoundaries& fb,
                          double p_star_value);

nlohmann::json property_report_json(const PropertyReport& report);
nlohmann::json complementarity_report_json(const ComplementarityReport& report);

}  // namespace rstrade
