#pragma once

#include <cmath>

#include "ltcam/constants.hpp"
#include "ltcam/types.hpp"

namespace ltcam::ephemeris {

namespace detail {

inline double centuries_since_j2000(double epoch) {
  return epoch / constants::kSecondsPerDay / 36525.0;
}

inline Vec3 ecliptic_to_equatorial(const Vec3& v) {
  constexpr double kObliquity = 23.43929111 * constants::kDeg;
  const double c = std::cos(kObliquity);
  const double s = std::sin(kObliquity);
  return {v.x(), c * v.y() - s * v.z(), s * v.y() + c * v.z()};
}

}  // namespace detail

/// Low-precision geocentric Sun position (km, mean equator of date ~ ECI).
/// Accuracy is ~0.1% in distance and ~1 arcmin in direction.
inline Vec3 sun_position(double epoch) {
  using constants::kDeg;
  const double t = detail::centuries_since_j2000(epoch);
  const double m = (357.5256 + 35999.049 * t) * kDeg;
  const double lambda =
      (282.94 + m / kDeg + (6892.0 * std::sin(m) + 72.0 * std::sin(2.0 * m)) / 3600.0) * kDeg;
  const double r = (149.619 - 2.499 * std::cos(m) - 0.021 * std::cos(2.0 * m)) * 1.0e6;
  return detail::ecliptic_to_equatorial({r * std::cos(lambda), r * std::sin(lambda), 0.0});
}

/// Low-precision geocentric Moon position (km), truncated lunar series.
inline Vec3 moon_position(double epoch) {
  using constants::kDeg;
  using std::cos;
  using std::sin;
  const double t = detail::centuries_since_j2000(epoch);
  const double l0 = 218.31617 + 481267.88088 * t - 1.3972 * t;
  const double l = (134.96292 + 477198.86753 * t) * kDeg;
  const double lp = (357.52543 + 35999.04944 * t) * kDeg;
  const double f = (93.27283 + 483202.01873 * t) * kDeg;
  const double d = (297.85027 + 445267.11135 * t) * kDeg;

  const double dlon = 22640.0 * sin(l) + 769.0 * sin(2.0 * l) - 4586.0 * sin(l - 2.0 * d) +
                      2370.0 * sin(2.0 * d) - 668.0 * sin(lp) - 412.0 * sin(2.0 * f) -
                      212.0 * sin(2.0 * l - 2.0 * d) - 206.0 * sin(l + lp - 2.0 * d) +
                      192.0 * sin(l + 2.0 * d) - 165.0 * sin(lp - 2.0 * d) +
                      148.0 * sin(l - lp) - 125.0 * sin(d) - 110.0 * sin(l + lp) -
                      55.0 * sin(2.0 * f - 2.0 * d);
  const double lon_deg = l0 + dlon / 3600.0;
  const double arg = f + (lon_deg - l0) * kDeg + (412.0 * sin(2.0 * f) + 541.0 * sin(lp)) / 3600.0 * kDeg;
  const double lat_arcsec = 18520.0 * sin(arg) - 526.0 * sin(f - 2.0 * d) +
                            44.0 * sin(l + f - 2.0 * d) - 31.0 * sin(-l + f - 2.0 * d) -
                            25.0 * sin(-2.0 * l + f) - 23.0 * sin(lp + f - 2.0 * d) +
                            21.0 * sin(-l + f) + 11.0 * sin(-lp + f - 2.0 * d);
  const double r = 385000.0 - 20905.0 * cos(l) - 3699.0 * cos(2.0 * d - l) -
                   2956.0 * cos(2.0 * d) - 570.0 * cos(2.0 * l) + 246.0 * cos(2.0 * l - 2.0 * d) -
                   205.0 * cos(lp - 2.0 * d) - 171.0 * cos(l + 2.0 * d) -
                   152.0 * cos(l + lp - 2.0 * d);
  const double lon = lon_deg * kDeg;
  const double lat = lat_arcsec / 3600.0 * kDeg;
  return detail::ecliptic_to_equatorial(
      {r * cos(lon) * cos(lat), r * sin(lon) * cos(lat), r * sin(lat)});
}

}  // namespace ltcam::ephemeris
