#pragma once

#include "ltcam/types.hpp"

namespace ltcam {

/// Cartesian ECI state at an epoch. Epoch is seconds past J2000.0 (TT);
/// position in km, velocity in km/s.
struct EpochState {
  double epoch = 0.0;
  Vec3 position = Vec3::Zero();
  Vec3 velocity = Vec3::Zero();

  Vec6 vector() const {
    Vec6 x;
    x << position, velocity;
    return x;
  }

  static EpochState from_vector(double epoch, const Vec6& x) {
    return {epoch, x.head<3>(), x.tail<3>()};
  }

  /// Throws unless the position is nonzero and every component is finite.
  void validate() const;
};

struct SpacecraftParams {
  double mass = 1.0;       // kg
  double drag_area = 0.0;  // m^2
  double drag_coefficient = 2.2;
  double srp_area = 0.0;  // m^2
  double reflectivity = 1.0;
  double hard_body_radius = 0.0;  // m

  void validate() const;
};

/// Which perturbations act on the spacecraft. The exponential atmosphere is
/// rho = density_ref * exp(-(h - density_ref_altitude) / scale_height).
struct ForceModelConfig {
  int zonal_degree = 0;  // one of 0, 2, 3, 4
  bool drag_enabled = false;
  bool srp_enabled = false;
  bool third_body_enabled = false;
  double density_ref = 3.725e-12;       // kg/m^3
  double density_ref_altitude = 400.0;  // km
  double scale_height = 58.515;         // km

  void validate() const;

  static ForceModelConfig two_body() { return {}; }
};

}  // namespace ltcam
