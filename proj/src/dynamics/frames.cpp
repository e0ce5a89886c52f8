#include "ltcam/dynamics/frames.hpp"

#include <cmath>

#include <Eigen/Geometry>

#include "ltcam/constants.hpp"

namespace ltcam {

using namespace constants;

Vec6 elements_to_state(const OrbitalElements& el, double mu) {
  if (el.a <= 0.0 || el.e < 0.0 || el.e >= 1.0) {
    throw Error("elements_to_state: only elliptic orbits with a > 0 are supported");
  }
  const double p = el.a * (1.0 - el.e * el.e);
  const double r = p / (1.0 + el.e * std::cos(el.theta));
  const Vec3 r_pqw(r * std::cos(el.theta), r * std::sin(el.theta), 0.0);
  const double k = std::sqrt(mu / p);
  const Vec3 v_pqw(-k * std::sin(el.theta), k * (el.e + std::cos(el.theta)), 0.0);

  const Mat3 rot = (Eigen::AngleAxisd(el.raan, Vec3::UnitZ()) *
                    Eigen::AngleAxisd(el.i, Vec3::UnitX()) *
                    Eigen::AngleAxisd(el.argp, Vec3::UnitZ()))
                       .toRotationMatrix();
  Vec6 x;
  x << rot * r_pqw, rot * v_pqw;
  return x;
}

Mat3 rtn_to_eci(const EpochState& state) {
  const Vec3 h = state.position.cross(state.velocity);
  const double rn = state.position.norm();
  if (rn == 0.0 || h.norm() <= 1e-12 * rn * state.velocity.norm()) {
    throw Error("rtn_to_eci: degenerate (rectilinear) state, angular momentum is zero");
  }
  Mat3 m;
  m.col(0) = state.position / rn;
  m.col(2) = h.normalized();
  m.col(1) = m.col(2).cross(m.col(0));
  return m;
}

double earth_rotation_angle(double epoch) {
  const double days = epoch / kSecondsPerDay;
  // Split the fractional day out first to keep precision over long spans.
  const double frac = std::fmod(days, 1.0);
  double turns = 0.7790572732640 + 0.00273781191135448 * days + frac;
  turns = std::fmod(turns, 1.0);
  if (turns < 0.0) turns += 1.0;
  return 2.0 * kPi * turns;
}

Mat3 celestial_to_intermediate(double epoch) {
  const double t = epoch / kSecondsPerDay / 36525.0;
  constexpr double kArcsec = kDeg / 3600.0;
  const double x =
      (-0.016617 + t * (2004.191898 + t * (-0.4297829 + t * (-0.19861834 + t * 7.578e-6)))) *
      kArcsec;
  const double y =
      (-0.006951 + t * (-0.025896 + t * (-22.4072747 + t * (0.00190059 + t * 0.001112526)))) *
      kArcsec;
  const double s = -0.5 * x * y + (0.000094 + 0.00380865 * t) * kArcsec;
  const double a = 1.0 / (1.0 + std::sqrt(1.0 - x * x - y * y));
  Mat3 q;
  q << 1.0 - a * x * x, -a * x * y, x,
       -a * x * y, 1.0 - a * y * y, y,
       -x, -y, 1.0 - a * (x * x + y * y);
  const Mat3 rs = Eigen::AngleAxisd(s, Vec3::UnitZ()).toRotationMatrix();
  return (q * rs).transpose();
}

Vec3 eci_to_ecef(const Vec3& r_eci, double epoch) {
  const Vec3 r = celestial_to_intermediate(epoch) * r_eci;
  const double theta = earth_rotation_angle(epoch);
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  return {c * r.x() + s * r.y(), -s * r.x() + c * r.y(), r.z()};
}

double wrap_degrees(double angle) {
  double w = std::fmod(angle, 360.0);
  if (w <= -180.0) w += 360.0;
  if (w > 180.0) w -= 360.0;
  return w;
}

Geodetic ecef_to_geodetic(const Vec3& r) {
  const double a = kEarthRadius;
  const double f = kWgs84Flattening;
  const double e2 = f * (2.0 - f);
  const double rho = std::hypot(r.x(), r.y());

  Geodetic g;
  g.longitude = wrap_degrees(std::atan2(r.y(), r.x()) / kDeg);

  // Fixed-point iteration on latitude; converges to machine precision in a
  // handful of steps for any point well above the Earth's center.
  double lat = std::atan2(r.z(), rho * (1.0 - e2));
  double n = a;
  for (int it = 0; it < 20; ++it) {
    const double s = std::sin(lat);
    n = a / std::sqrt(1.0 - e2 * s * s);
    const double next = std::atan2(r.z() + n * e2 * s, rho);
    if (std::abs(next - lat) < 1e-15) {
      lat = next;
      break;
    }
    lat = next;
  }
  const double s = std::sin(lat);
  n = a / std::sqrt(1.0 - e2 * s * s);
  const double c = std::cos(lat);
  g.altitude = std::abs(c) > 1e-10 ? rho / c - n : std::abs(r.z()) - n * (1.0 - e2);
  g.latitude = lat / kDeg;
  return g;
}

Vec3 geodetic_to_ecef(const Geodetic& g) {
  const double f = kWgs84Flattening;
  const double e2 = f * (2.0 - f);
  const double lat = g.latitude * kDeg;
  const double lon = g.longitude * kDeg;
  const double n = kEarthRadius / std::sqrt(1.0 - e2 * std::sin(lat) * std::sin(lat));
  return {(n + g.altitude) * std::cos(lat) * std::cos(lon),
          (n + g.altitude) * std::cos(lat) * std::sin(lon),
          (n * (1.0 - e2) + g.altitude) * std::sin(lat)};
}

Vec2 eci_to_geodetic(const EpochState& state) {
  if (!(state.position.norm() > 0.5 * kEarthRadius)) {
    throw Error("eci_to_geodetic: position must lie outside half an Earth radius");
  }
  const Geodetic g = ecef_to_geodetic(eci_to_ecef(state.position, state.epoch));
  return {g.latitude, g.longitude};
}

Mat26 geodetic_jacobian(const EpochState& state) {
  const double h = 1e-7 * state.position.norm();
  Mat26 jac = Mat26::Zero();
  for (int k = 0; k < 3; ++k) {
    EpochState plus = state;
    EpochState minus = state;
    plus.position[k] += h;
    minus.position[k] -= h;
    const Vec2 gp = eci_to_geodetic(plus);
    const Vec2 gm = eci_to_geodetic(minus);
    jac(0, k) = (gp[0] - gm[0]) / (2.0 * h);
    jac(1, k) = wrap_degrees(gp[1] - gm[1]) / (2.0 * h);
  }
  return jac;
}

}  // namespace ltcam
