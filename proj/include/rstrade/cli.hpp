#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "rstrade/config.hpp"

namespace rstrade {

inline constexpr const char* kVersion = "0.1.0";

enum class SolveMethod { penalty, vi, both };

SolveMethod method_from(const std::string& name);  // throws ConfigError

/// Run record written to <out>/run_manifest.json. Outputs are byte-identical
/// across reruns with equal inputs; only the timestamps here differ.
struct RunManifest {
    std::string command;
    std::string config_digest;
    std::string started_at;
    std::string finished_at;
    struct Output {
        std::string path;
        std::uintmax_t bytes;
    };
    std::vector<Output> outputs;
    bool pass = true;
};

nlohmann::json manifest_json(const RunManifest& m);

/// solve: run the selected solver(s), write surface CSV + metadata per
/// solver, and for "both" a sup-norm gap report.
RunManifest cmd_solve(const std::filesystem::path& config_path, SolveMethod method,
                      const std::filesystem::path& out_dir);

struct VerifyOptions {
    double bounds_tol = 1e-3;  ///< tolerance for the difference-band and time-monotonicity checks
};

/// verify: re-check a surface file. Emits boundary CSV, the property report
/// and the complementarity report; manifest.pass iff every check passes.
RunManifest cmd_verify(const std::filesystem::path& surfaces_path,
                       const std::filesystem::path& out_dir, const VerifyOptions& opts = {});

struct SimulateOptions {
    double s0 = 1.0;
    double p_init = 0.5;
    long n_steps = 0;  ///< 0: use the surface grid's n_t
    int initial_position = 0;
    bool per_path_csv = false;
};

/// simulate: run the optimal policy plus both baselines on shared paths and
/// write the simulation report; manifest.pass iff the value check passes.
/// Throws ParamMismatch when the config digest differs from the surfaces'.
RunManifest cmd_simulate(const std::filesystem::path& config_path,
                         const std::filesystem::path& surfaces_path, long n_paths,
                         std::uint64_t seed, const std::filesystem::path& out_dir,
                         const SimulateOptions& opts = {});

/// plotdata: emit the boundary-figure layout (four curves plus the vertical
/// p* line) as plain columnar data.
RunManifest cmd_plotdata(const std::filesystem::path& surfaces_path,
                         const std::filesystem::path& out_dir);

}  // namespace rstrade
