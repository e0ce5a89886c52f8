#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ltcam/risk/covariance.hpp"
#include "ltcam/scp/subproblem.hpp"

namespace ltcam {

/// Both objects at the start of the window with their covariances (ECI, km).
struct ScpScenario {
  EpochState primary;
  EpochState secondary;
  SpacecraftParams primary_params;
  SpacecraftParams secondary_params;
  ForceModelConfig forces;
  StateCovariance primary_cov;
  StateCovariance secondary_cov;
  PropagationOptions propagation;
};

enum class PlanStatus { kConverged, kNotConverged, kSolverFailure };
std::string to_string(PlanStatus status);

/// Risk picture at one node.
struct NodeMetrics {
  double dm2 = 0.0;      // against the keep-out covariance
  double dbar2 = 0.0;    // keep-out limit, 0 when no constraint is needed
  bool constrained = false;
  double ipc = 0.0;
  double max_ipc = 0.0;
  double miss = 0.0;     // km
  double metric = 0.0;   // metric of record
};

struct MajorIteration {
  int major = 0;
  int minors = 0;
  double control_change = 0.0;   // normalized, infinity norm
  double minor_change = 0.0;     // km, last minor step
  double vc_sum = 0.0;
  double objective = 0.0;
  double total_dv = 0.0;         // mm/s
  int gradient_nodes = 0;
  std::string solver_status;
};

struct ManeuverPlan {
  PlanStatus status = PlanStatus::kNotConverged;
  std::string message;
  int N = 0;
  double dt = 0.0;
  double u_max = 0.0;
  std::vector<Vec3> controls;        // km/s^2, ECI, per segment
  std::vector<double> slack;         // normalized slack input per segment
  std::vector<double> dv;            // mm/s per segment
  std::vector<Vec3> dv_rtn;          // mm/s per segment, RTN at the segment start
  double total_dv = 0.0;             // mm/s
  std::vector<EpochState> linear_states;  // last linear prediction, N + 1
  std::vector<NodeMetrics> nodes;         // at the last reference, N + 1
  std::vector<double> gamma;              // gradient bound per node, 0 when inactive
  std::vector<double> gradient_norm;      // ||2 P^-1 r|| of the linear prediction
  std::optional<Vec6> target;
  std::vector<MajorIteration> trace;
  int n_maj = 0;
  int n_min = 0;
  double wall_time = 0.0;  // s
};

struct ValidationReport {
  std::vector<EpochState> states;  // nonlinear, N + 1
  std::vector<NodeMetrics> nodes;
  double max_position_error = 0.0;  // m
  bool valid = false;
  int worst_node = -1;
  double worst_ratio = 0.0;  // metric over threshold (inverted for the miss distance)
};

/// Final-state target implied by the configuration: the ballistic end state
/// for a return to orbit, the optimized coast start for station keeping.
std::optional<Vec6> resolve_target(const ScpScenario& scenario, const ScpConfig& cfg);

ManeuverPlan run(const ScpScenario& scenario, const ScpConfig& cfg);

ValidationReport validate_plan(const ScpScenario& scenario, const ScpConfig& cfg,
                               const ManeuverPlan& plan);

/// Per-node metrics of a trajectory pair with covariances.
std::vector<NodeMetrics> node_metrics(const RiskMetricSpec& metric,
                                      const std::vector<EpochState>& primary,
                                      const std::vector<StateCovariance>& primary_cov,
                                      const std::vector<EpochState>& secondary,
                                      const std::vector<StateCovariance>& secondary_cov);

}  // namespace ltcam
