#include "ltcam/risk/covariance.hpp"

#include <Eigen/Eigenvalues>

#include "ltcam/dynamics/frames.hpp"

namespace ltcam {

void StateCovariance::validate() const {
  if (!matrix.allFinite()) throw Error("covariance has non-finite entries");
  const double tr = matrix.trace();
  if ((matrix - matrix.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(tr, 1e-300)) {
    throw Error("covariance is not symmetric");
  }
  const Eigen::SelfAdjointEigenSolver<Mat6> es(matrix, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-12 * tr) {
    throw Error("covariance is not positive semi-definite");
  }
}

StateCovariance rtn_diagonal_to_eci(const Vec6& rtn_diagonal_si, const EpochState& state) {
  Vec6 diag_km = rtn_diagonal_si * 1e-6;
  Mat6 rot = Mat6::Zero();
  const Mat3 r = rtn_to_eci(state);
  rot.topLeftCorner<3, 3>() = r;
  rot.bottomRightCorner<3, 3>() = r;
  StateCovariance c;
  c.matrix = rot * diag_km.asDiagonal() * rot.transpose();
  c.matrix = 0.5 * (c.matrix + c.matrix.transpose()).eval();
  return c;
}

std::vector<StateCovariance> propagate_covariance(const StateCovariance& c0,
                                                  const std::vector<Mat6>& stms) {
  std::vector<StateCovariance> out;
  out.reserve(stms.size() + 1);
  out.push_back(c0);
  for (const Mat6& a : stms) {
    Mat6 next = a * out.back().matrix * a.transpose();
    out.push_back({0.5 * (next + next.transpose())});
  }
  return out;
}

Mat3 position_covariance(const StateCovariance& c, const Eigen::Matrix<double, 3, 6>& h) {
  const Mat3 p = h * c.matrix * h.transpose();
  return 0.5 * (p + p.transpose());
}

Mat3 position_covariance(const StateCovariance& c) { return c.matrix.topLeftCorner<3, 3>(); }

RelPosDistribution combined_relative(const Vec3& r_primary, const StateCovariance& c_primary,
                                     const Vec3& r_secondary, const StateCovariance& c_secondary) {
  return {r_primary - r_secondary,
          position_covariance(c_primary) + position_covariance(c_secondary)};
}

}  // namespace ltcam
