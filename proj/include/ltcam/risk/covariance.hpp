#pragma once

#include <vector>

#include "ltcam/dynamics/state.hpp"
#include "ltcam/types.hpp"

namespace ltcam {

/// 6x6 ECI state covariance in km^2, km^2/s, km^2/s^2.
struct StateCovariance {
  Mat6 matrix = Mat6::Zero();

  /// Throws unless symmetric and positive semi-definite (min eigenvalue
  /// >= -1e-12 trace).
  void validate() const;
};

/// Relative position of the primary with respect to the secondary and the
/// combined position covariance, both in ECI (km, km^2).
struct RelPosDistribution {
  Vec3 mu = Vec3::Zero();
  Mat3 P = Mat3::Identity();
};

/// Rotates a diagonal RTN covariance given in m^2 and (m/s)^2 into an ECI
/// covariance in km units at the given state.
StateCovariance rtn_diagonal_to_eci(const Vec6& rtn_diagonal_si, const EpochState& state);

/// C_{i+1} = A_i C_i A_i^T, symmetrized after every step. Returns one
/// covariance per node (stms.size() + 1 entries).
std::vector<StateCovariance> propagate_covariance(const StateCovariance& c0,
                                                  const std::vector<Mat6>& stms);

/// P = H C H^T for a 3x6 position Jacobian H.
Mat3 position_covariance(const StateCovariance& c, const Eigen::Matrix<double, 3, 6>& h);

/// Cartesian case, H = [I 0].
Mat3 position_covariance(const StateCovariance& c);

RelPosDistribution combined_relative(const Vec3& r_primary, const StateCovariance& c_primary,
                                     const Vec3& r_secondary, const StateCovariance& c_secondary);

}  // namespace ltcam
