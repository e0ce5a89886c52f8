#pragma once

#include "ltcam/types.hpp"

namespace ltcam {

/// Closest point to r on the surface z^T P^-1 z = dbar2, measured in the
/// whitened frame where the covariance becomes the identity.
Vec3 project_onto_ellipsoid(const Vec3& r, const Mat3& P, double dbar2);

/// Intersection of the ray through r with the keep-out surface, used for
/// points that lie inside the keep-out zone.
Vec3 seed_inside_point(const Vec3& r, const Mat3& P, double dbar2);

/// Supporting half-space normal^T (r - z) >= 0 of the keep-out ellipsoid at
/// the surface point z. `normal` is the gradient 2 P^-1 z.
struct HalfSpace {
  Vec3 normal = Vec3::Zero();
  double offset = 0.0;  // normal^T z

  double margin(const Vec3& r) const { return normal.dot(r) - offset; }
};

HalfSpace ca_halfspace(const Vec3& z, const Mat3& P);

}  // namespace ltcam
