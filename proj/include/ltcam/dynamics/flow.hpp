#pragma once

#include <functional>

#include "ltcam/dynamics/propagation.hpp"

namespace ltcam {

/// A controlled vector field xdot = f(t, x, u) with its partial derivatives.
/// `state_scale` and `control_scale` are the typical magnitudes used for
/// error control and finite-difference steps.
struct VectorField {
  std::function<Vec6(double, const Vec6&, const Vec3&)> f;
  std::function<Mat6(double, const Vec6&, const Vec3&)> dfdx;
  std::function<Mat63(double, const Vec6&, const Vec3&)> dfdu;
  Vec6 state_scale = Vec6::Ones();
  double control_scale = 1.0;
};

/// Flow-map sensitivities of a generic vector field over [t0, t0 + dt].
SensitivityBundle flow_sensitivities(const VectorField& field, double t0, const Vec6& x,
                                     const Vec3& u, double dt, bool want_second_order,
                                     const PropagationOptions& options = {});

/// The orbital vector field of the configured force model.
VectorField orbital_field(const Vec6& x_typical, const SpacecraftParams& params,
                          const ForceModelConfig& forces);

}  // namespace ltcam
