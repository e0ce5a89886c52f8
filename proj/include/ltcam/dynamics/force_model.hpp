#pragma once

#include <cmath>

#include "ltcam/constants.hpp"
#include "ltcam/dynamics/ephemeris.hpp"
#include "ltcam/dynamics/state.hpp"

namespace ltcam {

/// Central-body gravity with zonal harmonics up to `degree` (0, 2, 3 or 4).
/// Templated so that the same expression serves plain evaluation and
/// automatic differentiation.
template <typename Scalar>
Vector3<Scalar> zonal_gravity(const Vector3<Scalar>& r, int degree) {
  using std::sqrt;
  using namespace constants;
  const Scalar r2 = r.squaredNorm();
  const Scalar rn = sqrt(r2);
  const Scalar r3 = r2 * rn;
  Vector3<Scalar> acc = (-kMuEarth / r3) * r;
  if (degree < 2) return acc;

  const Scalar z2_r2 = r.z() * r.z() / r2;
  const Scalar r5 = r3 * r2;
  {
    const Scalar k = -1.5 * kJ2 * kMuEarth * kEarthRadius * kEarthRadius / r5;
    acc.x() += k * r.x() * (1.0 - 5.0 * z2_r2);
    acc.y() += k * r.y() * (1.0 - 5.0 * z2_r2);
    acc.z() += k * r.z() * (3.0 - 5.0 * z2_r2);
  }
  if (degree < 3) return acc;

  const Scalar r7 = r5 * r2;
  {
    const Scalar k = -2.5 * kJ3 * kMuEarth * kEarthRadius * kEarthRadius * kEarthRadius / r7;
    const Scalar z = r.z();
    const Scalar xy = 3.0 * z - 7.0 * z * z2_r2;
    acc.x() += k * r.x() * xy;
    acc.y() += k * r.y() * xy;
    acc.z() += k * (6.0 * z * z - 7.0 * z * z * z2_r2 - 0.6 * r2);
  }
  if (degree < 4) return acc;

  {
    const double re4 = kEarthRadius * kEarthRadius * kEarthRadius * kEarthRadius;
    const Scalar k = 1.875 * kJ4 * kMuEarth * re4 / r7;
    const Scalar xy = 1.0 - 14.0 * z2_r2 + 21.0 * z2_r2 * z2_r2;
    acc.x() += k * r.x() * xy;
    acc.y() += k * r.y() * xy;
    acc.z() += k * r.z() * (5.0 - 70.0 / 3.0 * z2_r2 + 21.0 * z2_r2 * z2_r2);
  }
  return acc;
}

/// Point-mass perturbation of a third body at `body` (km) with parameter mu.
template <typename Scalar>
Vector3<Scalar> third_body(const Vector3<Scalar>& r, const Vec3& body, double mu) {
  using std::sqrt;
  const Vector3<Scalar> d = body.cast<Scalar>() - r;
  const Scalar d2 = d.squaredNorm();
  const Scalar d3 = d2 * sqrt(d2);
  const double b3 = body.squaredNorm() * body.norm();
  return mu * (d / d3 - body.cast<Scalar>() / b3);
}

/// Total perturbing plus central acceleration (km/s^2), excluding control.
template <typename Scalar>
Vector3<Scalar> acceleration(double epoch, const Vector3<Scalar>& r, const Vector3<Scalar>& v,
                             const SpacecraftParams& sc, const ForceModelConfig& forces) {
  using std::exp;
  using std::sqrt;
  using namespace constants;
  Vector3<Scalar> acc = zonal_gravity(r, forces.zonal_degree);

  if (forces.drag_enabled && sc.drag_area > 0.0) {
    const Vector3<Scalar> omega_cross_r(-kEarthRotationRate * r.y(), kEarthRotationRate * r.x(),
                                        Scalar(0.0));
    const Vector3<Scalar> v_rel = v - omega_cross_r;
    const Scalar altitude = r.norm() - kEarthRadius;
    const Scalar density =
        forces.density_ref * exp(-(altitude - forces.density_ref_altitude) / forces.scale_height);
    // rho [kg/m^3] * (A/m) [m^2/kg] * v^2 [km^2/s^2] -> factor 1000 for km/s^2.
    const double ballistic = sc.drag_coefficient * sc.drag_area / sc.mass;
    acc -= (0.5e3 * ballistic) * density * v_rel.norm() * v_rel;
  }

  if (forces.srp_enabled && sc.srp_area > 0.0) {
    const Vec3 sun = ephemeris::sun_position(epoch);
    const Vector3<Scalar> from_sun = r - sun.cast<Scalar>();
    const Scalar dist2 = from_sun.squaredNorm();
    const Scalar dist = sqrt(dist2);
    const double coeff = kSolarPressure * sc.reflectivity * sc.srp_area / sc.mass * 1.0e-3;
    acc += (coeff * kAstronomicalUnit * kAstronomicalUnit / (dist2 * dist)) * from_sun;
  }

  if (forces.third_body_enabled) {
    acc += third_body(r, ephemeris::sun_position(epoch), kMuSun);
    acc += third_body(r, ephemeris::moon_position(epoch), kMuMoon);
  }
  return acc;
}

}  // namespace ltcam
