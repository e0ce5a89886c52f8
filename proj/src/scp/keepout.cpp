#include "ltcam/scp/keepout.hpp"

#include <cmath>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

namespace ltcam {

Vec3 project_onto_ellipsoid(const Vec3& r, const Mat3& P, double dbar2) {
  if (!(dbar2 > 0.0)) throw Error("project_onto_ellipsoid: keep-out limit must be positive");
  if (r.norm() == 0.0) {
    throw Error("project_onto_ellipsoid: center of keep-out zone; no ray defined");
  }
  const Eigen::SelfAdjointEigenSolver<Mat3> es(P);
  if (es.info() != Eigen::Success || !(es.eigenvalues()[0] > 0.0)) {
    throw Error("project_onto_ellipsoid: covariance must be positive definite");
  }
  const Mat3& v = es.eigenvectors();
  const Vec3 sqrt_l = es.eigenvalues().cwiseSqrt();
  const Vec3 r_hat = (v.transpose() * r).cwiseQuotient(sqrt_l);
  const Vec3 z_hat = std::sqrt(dbar2) * r_hat / r_hat.norm();
  return v * sqrt_l.cwiseProduct(z_hat);
}

Vec3 seed_inside_point(const Vec3& r, const Mat3& P, double dbar2) {
  if (!(dbar2 > 0.0)) throw Error("seed_inside_point: keep-out limit must be positive");
  if (r.norm() == 0.0) {
    throw Error("seed_inside_point: center of keep-out zone; no ray defined");
  }
  const double q = r.dot(P.llt().solve(r));
  return r * std::sqrt(dbar2 / q);
}

HalfSpace ca_halfspace(const Vec3& z, const Mat3& P) {
  HalfSpace h;
  h.normal = 2.0 * P.llt().solve(z);
  h.offset = h.normal.dot(z);
  return h;
}

}  // namespace ltcam
