#pragma once

#include "ltcam/conic/problem.hpp"

namespace ltcam::conic {

/// x_original = column_scale .* x_scaled; objective_original =
/// objective_scaled / cost_scale.
struct ScalingMap {
  Eigen::VectorXd column_scale;
  Eigen::VectorXd equality_scale;
  Eigen::VectorXd inequality_scale;
  double cost_scale = 1.0;

  Eigen::VectorXd unscale(const Eigen::VectorXd& x_scaled) const {
    return column_scale.cwiseProduct(x_scaled);
  }
  Eigen::VectorXd scale(const Eigen::VectorXd& x) const { return x.cwiseQuotient(column_scale); }
  bool is_identity() const;
};

struct ScaledProblem {
  ConicProblem problem;
  ScalingMap map;
};

/// Ruiz row/column equilibration. Variables of a cone share one column scale
/// so cone membership is preserved. A row or column is rescaled only when its
/// infinity norm lies outside [0.1, 10].
ScaledProblem presolve_scale(const ConicProblem& p);

}  // namespace ltcam::conic
