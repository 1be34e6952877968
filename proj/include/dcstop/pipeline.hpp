#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "dcstop/config.hpp"
#include "dcstop/hjb.hpp"
#include "dcstop/mc.hpp"

namespace dcstop {

inline constexpr const char* kArtifactVersion = "dcstop 0.1.0";

/// Shortest round-trip decimal for a double, for bit-exact re-ingestion.
std::string format_double(double x);

/// bounds.csv: x, payoff, mean_vol_value, support_value over the x-grid.
void run_bounds(const RunConfig& cfg, const std::filesystem::path& out_dir);

struct SolveArtifacts {
    SolveResult result;
    bool ordering_ok = true;
    double ordering_max_violation = 0.0;
    bool concavity_ok = true;
    bool gates_ok = true;
};

/// value_slice.csv, summary.json and (when stored) the policy cache.
SolveArtifacts run_solve(const RunConfig& cfg, const std::filesystem::path& out_dir);

struct SimulateArtifacts {
    McReport report;
    bool gates_ok = true;
};

/// density.csv and mc_report.json, from an in-memory solve or the cache.
SimulateArtifacts run_simulate(const RunConfig& cfg, const std::filesystem::path& out_dir,
                               const SolveResult* solve = nullptr);

/// Aggregates summary/mc_report artifacts under out_dir (one level deep),
/// emits report.json with cross-config ratios; returns true when every gated
/// invariant in the aggregated files holds.
bool run_report(const std::filesystem::path& out_dir);

/// Versioned binary cache of a solve (stage fields + policies).
void save_solve(const SolveResult& result, const std::filesystem::path& file);
SolveResult load_solve(const std::filesystem::path& file);

} // namespace dcstop
