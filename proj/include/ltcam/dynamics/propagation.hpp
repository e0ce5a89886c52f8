#pragma once

#include <array>
#include <vector>

#include "ltcam/dynamics/force_model.hpp"
#include "ltcam/dynamics/integrator.hpp"
#include "ltcam/dynamics/state.hpp"

namespace ltcam {

using Mat9 = Eigen::Matrix<double, 9, 9>;

/// First- and optional second-order sensitivities of one segment's flow map
/// x_{i+1} = F(x_i, u_i) about a reference (x_ref, u_ref).
///
///   F(x_ref + dx, u_ref + du) ~ xbar + A dx + B du
///
/// tensor[k](v, w) = d^2 F_k / dz_v dz_w with z = (x, u).
struct SensitivityBundle {
  Vec6 x_ref = Vec6::Zero();
  Vec3 u_ref = Vec3::Zero();
  Mat6 A = Mat6::Identity();
  Mat63 B = Mat63::Zero();
  Vec6 xbar = Vec6::Zero();
  bool has_tensor = false;
  std::array<Mat9, 6> tensor{};

  /// The 6x9 Jacobian (A | B).
  Mat69 jacobian() const {
    Mat69 j;
    j << A, B;
    return j;
  }

  /// Residual c so that F ~ A x + B u + c in absolute coordinates.
  Vec6 residual() const { return xbar - A * x_ref - B * u_ref; }
};

struct PropagationOptions {
  IntegratorOptions integrator;
  double tensor_rel_step = 1e-6;
};

/// State after dt seconds under the configured forces plus a constant ECI
/// control acceleration (km/s^2). `segment` only labels error messages.
EpochState propagate_segment(const EpochState& state, const Vec3& control, double dt,
                             const SpacecraftParams& params, const ForceModelConfig& forces,
                             const PropagationOptions& options = {}, int segment = -1);

/// Uncontrolled state at `epoch`, forward or backward in time.
EpochState propagate_to(const EpochState& state, double epoch, const SpacecraftParams& params,
                        const ForceModelConfig& forces, const PropagationOptions& options = {});

/// Propagates the state together with its variational equations.
SensitivityBundle sensitivities(const EpochState& state, const Vec3& control, double dt,
                                const SpacecraftParams& params, const ForceModelConfig& forces,
                                bool want_second_order, const PropagationOptions& options = {},
                                int segment = -1);

/// Partial derivatives of the acceleration with respect to (r, v), 3x6.
Eigen::Matrix<double, 3, 6> acceleration_jacobian(double epoch, const Vec3& r, const Vec3& v,
                                                  const SpacecraftParams& params,
                                                  const ForceModelConfig& forces);

/// Node states and segment sensitivities along a trajectory.
struct Trajectory {
  double dt = 0.0;
  std::vector<EpochState> nodes;            // N + 1
  std::vector<Vec3> controls;               // N, km/s^2
  std::vector<SensitivityBundle> bundles;   // N, empty when not requested
};

/// Forward single-shooting propagation from x0 under piecewise-constant
/// controls (one per segment). Sensitivities are computed when
/// `with_sensitivities` is set, second order when `second_order` is also set.
Trajectory propagate_trajectory(const EpochState& x0, const std::vector<Vec3>& controls, double dt,
                                const SpacecraftParams& params, const ForceModelConfig& forces,
                                bool with_sensitivities, bool second_order,
                                const PropagationOptions& options = {});

/// Ballistic trajectory over N segments of length dt with sensitivities.
Trajectory coast_grid(const EpochState& x0, int n, double dt, const SpacecraftParams& params,
                      const ForceModelConfig& forces, bool second_order = true,
                      const PropagationOptions& options = {});

}  // namespace ltcam
