#pragma once

#include "ltcam/dynamics/propagation.hpp"

namespace ltcam {

/// Reference units for the nonlinearity index: length, time and control.
struct NondimScales {
  double length = 1.0;   // km
  double time = 1.0;     // s
  double control = 1.0;  // km/s^2

  double velocity() const { return length / time; }
  /// Physical size of one nondimensional unit of each of the 9 inputs.
  Vec9 input_scale() const;
  static NondimScales from_orbit(double semi_major_axis, double mu, double max_control);
};

/// Expresses a bundle in nondimensional state and control units.
SensitivityBundle nondimensionalize(const SensitivityBundle& b, const NondimScales& s);

/// Nonlinearity index per input component: ratio of the Frobenius norm of
/// the second-order slice over the first-order Jacobian.
Vec9 nli_weights(const SensitivityBundle& b);

/// Componentwise trust region xi_w |z_w - z_ref_w| <= nu_bar. Components
/// with xi_w = 0 or a half-width above `max_half_width` (in the same units
/// as xi) are inactive.
struct TrustRegion {
  Eigen::Matrix<bool, 9, 1> active = Eigen::Matrix<bool, 9, 1>::Constant(false);
  Vec9 lower = Vec9::Zero();
  Vec9 upper = Vec9::Zero();
};

/// `scale` converts a nondimensional half-width to the units of the
/// reference (identity for nondimensional references).
TrustRegion trust_region_rows(const Vec9& xi, const Vec6& x_ref, const Vec3& u_ref, double nu_bar,
                              const Vec9& scale = Vec9::Ones(), double max_half_width = 10.0);

}  // namespace ltcam
