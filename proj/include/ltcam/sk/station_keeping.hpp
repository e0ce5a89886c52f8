#pragma once

#include <array>
#include <vector>

#include "ltcam/conic/solver.hpp"
#include "ltcam/dynamics/propagation.hpp"

namespace ltcam {

/// Latitude/longitude box (deg) centered on phi0 with half-widths delta.
struct SkBox {
  Vec2 center = Vec2::Zero();
  Vec2 half_width = Vec2::Constant(0.05);

  void validate() const;
  /// Distance outside the box per component (deg, >= 0).
  Vec2 excess(const Vec2& lat_lon) const;
};

/// One linear row g^T dx - v <= rhs on the physical state deviation dx
/// (km, km/s) and the node's shared buffer v (deg).
struct SkRow {
  Eigen::Matrix<double, 1, 6> g = Eigen::Matrix<double, 1, 6>::Zero();
  double rhs = 0.0;
};

/// Box rows linearized at a reference node with geodetic coordinates
/// phi_ref and Jacobian G: upper latitude, upper longitude, lower latitude,
/// lower longitude.
std::array<SkRow, 4> sk_box_rows(const Mat26& G, const Vec2& phi_ref, const SkBox& box);

struct SkTargetOptions {
  int nodes_per_day = 24;
  int max_iterations = 10;
  double step_tolerance = 1e-3;         // km, change of the initial state
  double position_trust = 50.0;         // km
  double velocity_trust = 5e-3;         // km/s
  conic::SolverOptions solver;
};

struct SkTargetResult {
  EpochState target;            // optimized initial coast state x_T
  double violation = 0.0;       // sum of box excess over nodes, deg
  std::vector<double> epochs;   // node epochs of the coast
  std::vector<Vec2> lat_lon;    // per node, deg
  std::vector<double> violation_history;
  int iterations = 0;
};

/// Total box excess (deg) of the nonlinear coast from `start`.
double coast_violation(const EpochState& start, double horizon_s, int segments, const SkBox& box,
                       const SpacecraftParams& params, const ForceModelConfig& forces,
                       std::vector<Vec2>* lat_lon = nullptr, std::vector<double>* epochs = nullptr);

/// Finds the initial state of an uncontrolled coast of `horizon_days` that
/// minimizes the L1 box violation, starting from x_f.
SkTargetResult solve_sk_target(const EpochState& x_f, double horizon_days, const SkBox& box,
                               const SpacecraftParams& params, const ForceModelConfig& forces,
                               const SkTargetOptions& options = {});

/// Final node of a ballistic trajectory.
EpochState return_target(const Trajectory& ballistic);

}  // namespace ltcam
