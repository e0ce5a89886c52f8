#pragma once

#include <functional>

#include <Eigen/Core>

#include "ltcam/types.hpp"

namespace ltcam {

struct IntegratorOptions {
  double rel_tol = 1e-12;
  double min_step = 1e-9;  // s
  int max_steps = 200000;
};

struct IntegrationStats {
  int accepted = 0;
  int rejected = 0;
};

/// Right-hand side dy/dt = f(t, y).
using OdeFunction = std::function<void(double, const Eigen::VectorXd&, Eigen::VectorXd&)>;

/// Adaptive Dormand-Prince 5(4) integration of y from t0 to t1 (t1 may be
/// earlier than t0). The local error of component i is measured against
/// rel_tol * (|y_i| + scale_i), so `scale` carries the typical magnitude of
/// each component. Step control is deterministic. Throws Error on step
/// underflow or when the step budget is exhausted.
Eigen::VectorXd integrate(const OdeFunction& f, double t0, double t1, const Eigen::VectorXd& y0,
                          const Eigen::VectorXd& scale, const IntegratorOptions& options = {},
                          IntegrationStats* stats = nullptr);

}  // namespace ltcam
