#pragma once

#include "ltcam/dynamics/state.hpp"
#include "ltcam/types.hpp"

namespace ltcam {

/// Classical orbital elements. Angles in radians, a in km.
struct OrbitalElements {
  double a = 0.0;
  double e = 0.0;
  double i = 0.0;
  double argp = 0.0;  // argument of perigee
  double raan = 0.0;
  double theta = 0.0;  // true anomaly
};

/// Cartesian ECI position/velocity (km, km/s) from elements.
Vec6 elements_to_state(const OrbitalElements& el, double mu);

/// Rotation whose columns are the radial, transverse and normal unit vectors
/// expressed in ECI. Throws for rectilinear states.
Mat3 rtn_to_eci(const EpochState& state);

/// Earth rotation angle (rad) at an epoch given in seconds past J2000,
/// with UT1 taken equal to TT.
double earth_rotation_angle(double epoch);

/// Rotation from the J2000 inertial frame to the intermediate frame of date
/// (pole of date from precession only, nutation neglected).
Mat3 celestial_to_intermediate(double epoch);

/// Earth-fixed position: precession to the pole of date, then the Earth
/// rotation angle about that pole.
Vec3 eci_to_ecef(const Vec3& r_eci, double epoch);

struct Geodetic {
  double latitude = 0.0;   // deg
  double longitude = 0.0;  // deg, (-180, 180]
  double altitude = 0.0;   // km
};

Geodetic ecef_to_geodetic(const Vec3& r_ecef);
Vec3 geodetic_to_ecef(const Geodetic& g);

/// Geodetic (latitude, longitude) in degrees of an ECI state.
Vec2 eci_to_geodetic(const EpochState& state);

/// Central-difference Jacobian of (latitude, longitude) [deg] with respect to
/// the ECI state (km, km/s). The velocity columns are identically zero.
Mat26 geodetic_jacobian(const EpochState& state);

/// Wraps an angle in degrees into (-180, 180].
double wrap_degrees(double angle);

}  // namespace ltcam
