#pragma once

#include <optional>
#include <string>

#include "json.hpp"

#include "ltcam/dynamics/frames.hpp"
#include "ltcam/scp/engine.hpp"

namespace ltcam {

/// Problem in a scenario file: a bad path, malformed JSON or a schema
/// violation. `where` is "line:column" or a JSON pointer.
class ScenarioError : public Error {
 public:
  ScenarioError(const std::string& source, const std::string& where, const std::string& what);
};

struct ObjectSpec {
  OrbitalElements elements;         // at TCA, radians
  SpacecraftParams params;
  Vec6 covariance_rtn = Vec6::Zero();  // m^2 and (m/s)^2
};

enum class CovarianceEpoch { kTca, kStart };
enum class TargetMode { kNone, kReturn, kStationKeeping };

std::string to_string(CovarianceEpoch e);
std::string to_string(TargetMode m);

struct ScenarioSpec {
  std::string name;
  std::string tca_epoch_text;  // ISO 8601, TT
  double tca_epoch = 0.0;      // s past J2000
  double orbits_before = 1.0;
  double orbits_after = 1.0;
  int nodes_per_orbit = 60;
  ObjectSpec primary;
  ObjectSpec secondary;
  CovarianceEpoch covariance_epoch = CovarianceEpoch::kTca;
  ForceModelConfig forces;
  MetricKind metric = MetricKind::kIpc;
  double ipc_threshold = 1e-6;
  double max_ipc_threshold = 1e-4;
  double miss_distance = 2.0;  // km
  double u_max = 5e-9;         // km/s^2
  double trust_nu_bar = 1e-3;
  double tol_major = 1e-3;
  double tol_minor = 1e-6;  // km
  int j_max = 15;
  int k_max = 20;
  double kappa_vc = 1e4;
  double kappa_T = 1e2;
  double vc_tolerance = 1e-7;
  double solver_tol = 1e-8;
  int solver_max_iter = 200;
  std::optional<SensitivitySettings> sensitivity;
  bool sk_box = false;
  SkBox box;
  TargetMode target = TargetMode::kNone;
  double sk_horizon_days = 14.0;
  int sk_nodes_per_day = 24;

  /// Orbital period of the primary at TCA (two-body), s.
  double period() const;
  int segments() const;
  double dt() const;
  double start_epoch() const;
  /// Index of the TCA node in the window.
  int tca_node() const;
  RiskMetricSpec metric_spec() const;
};

/// Seconds past J2000 (TT) of an ISO 8601 date-time "YYYY-MM-DDTHH:MM:SS[.fff]".
double parse_epoch(const std::string& text);

ScenarioSpec parse_scenario(const std::string& text, const std::string& source = "<string>");
ScenarioSpec load_scenario(const std::string& path);

/// The scenario with every default filled in, in the file schema.
nlohmann::json resolved_json(const ScenarioSpec& spec);

ScpConfig make_config(const ScenarioSpec& spec);

/// States at the window start and covariances there, in ECI km units.
ScpScenario make_scenario(const ScenarioSpec& spec, const PropagationOptions& options = {});

}  // namespace ltcam
