#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "ltcam/io/scenario.hpp"

namespace ltcam {

/// Per-node CSV of a solved plan: N + 1 rows, nonlinear states and metrics.
std::string nodes_csv(const ScenarioSpec& spec, const ManeuverPlan& plan,
                      const ValidationReport& validation);

/// Machine-readable plan with controls, RTN delta-v and the iteration trace.
nlohmann::json plan_json(const ScenarioSpec& spec, const ManeuverPlan& plan,
                         const ValidationReport& validation);

/// Human-readable summary including the convergence row (n_maj, n_min, e).
/// Wall time is left out so that repeated runs produce identical files.
std::string report_text(const ScenarioSpec& spec, const ManeuverPlan& plan,
                        const ValidationReport& validation);

/// Ballistic metric history of the coast.
std::string metrics_csv(const ScenarioSpec& spec, const std::vector<EpochState>& primary,
                        const std::vector<NodeMetrics>& nodes);

/// Latitude and longitude of the station-keeping coast.
std::string sk_coast_csv(const SkTargetResult& result, const SkBox& box);

nlohmann::json sk_target_json(const SkTargetResult& result, const SkBox& box);

/// Formats a double with 12 significant digits (locale independent).
std::string fmt(double x);

void write_file(const std::filesystem::path& path, const std::string& content);

}  // namespace ltcam
