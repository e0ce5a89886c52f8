#pragma once

#include <optional>
#include <vector>

#include "ltcam/conic/solver.hpp"
#include "ltcam/dynamics/propagation.hpp"
#include "ltcam/risk/metrics.hpp"
#include "ltcam/scp/keepout.hpp"
#include "ltcam/scp/sensitivity.hpp"
#include "ltcam/sk/station_keeping.hpp"

namespace ltcam {

struct ScpConfig {
  int N = 0;
  double dt = 0.0;     // s
  double u_max = 0.0;  // km/s^2
  RiskMetricSpec metric;
  std::optional<SensitivitySettings> sensitivity;
  double trust_nu_bar = 1e-3;
  double tol_major = 1e-3;  // normalized control
  double tol_minor = 1e-6;  // km
  int j_max = 15;
  int k_max = 20;
  double kappa_vc = 1e4;
  double kappa_T = 1e2;
  double vc_tolerance = 1e-7;
  bool sk_box = false;
  SkBox box;
  bool return_to_orbit = false;
  bool sk_target = false;
  double sk_horizon_days = 14.0;
  SkTargetOptions sk_options;
  conic::SolverOptions solver;

  void validate() const;
};

/// Everything the subproblem needs about one node i = 0..N. Segment data
/// (bundle, xi) describe the segment leaving the node and are unused at N.
struct NodeLinearization {
  EpochState state;                 // reference state
  Vec3 control = Vec3::Zero();      // reference control, normalized
  SensitivityBundle bundle;
  Vec3 r = Vec3::Zero();            // reference relative position, km
  Mat3 P = Mat3::Identity();        // combined position covariance, km^2
  Mat3 P_keepout = Mat3::Identity();
  SmdLimit limit;
  double dm2 = 0.0;
  double ipc = 0.0;
  Vec9 xi = Vec9::Zero();
  std::optional<GradientBound> gradient;
  bool has_geodetic = false;
  Mat26 G = Mat26::Zero();
  Vec2 phi = Vec2::Zero();
  /// CA half-space from the current minor iteration; empty when the node
  /// carries no collision-avoidance row.
  std::optional<HalfSpace> ca;
};

/// Variable indices of an assembled subproblem. States are deviations from
/// the reference in km and m/s, controls are normalized by u_max.
struct SubproblemLayout {
  int N = 0;
  int x0 = 0, u0 = 0, slack0 = 0, vdyn0 = 0, vca0 = 0, vhead0 = 0;
  int vsk0 = -1;
  int target_plus = -1, target_minus = -1;
  struct GradientVars {
    int node = 0;
    int g = 0;  // three components of grad / gamma
    int t = 0;
    int v = 0;
  };
  std::vector<GradientVars> gradients;

  int x(int node, int k) const { return x0 + 6 * node + k; }
  int u(int seg, int k) const { return u0 + 3 * seg + k; }
  int slack(int seg) const { return slack0 + seg; }
  int vdyn(int seg, int k) const { return vdyn0 + 6 * seg + k; }
  int vca(int node) const { return vca0 + node - 1; }
  int vhead(int node) const { return vhead0 + node - 1; }
  int vsk(int node) const { return vsk0 + node - 1; }

  /// Base variable count without optional blocks: 6(N+1) + 3N + N + 6N + N + N.
  static int base_count(int n) { return 6 * (n + 1) + 12 * n; }
};

/// Physical size of one variable unit of a state deviation.
Vec6 state_variable_units();

struct Subproblem {
  conic::ConicProblem problem;
  SubproblemLayout layout;
};

/// Builds the convex subproblem for one minor iteration. `target` adds the
/// soft final-state constraint.
Subproblem assemble_subproblem(const std::vector<NodeLinearization>& lin, const ScpConfig& cfg,
                               const std::optional<Vec6>& target = std::nullopt);

}  // namespace ltcam
