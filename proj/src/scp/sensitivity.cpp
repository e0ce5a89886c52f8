#include "ltcam/scp/sensitivity.hpp"

#include <Eigen/Cholesky>

namespace ltcam {

double gradient_bound(double rho, double threshold, double ipc_value, double delta_r_km) {
  if (!(ipc_value > 0.0) || !(delta_r_km > 0.0)) {
    throw Error("gradient bound needs a positive probability and distance");
  }
  return 2.0 * rho * threshold / (ipc_value * delta_r_km);
}

std::optional<GradientBound> sensitivity_rows(const Mat3& P, double ipc_value,
                                              const RiskMetricSpec& metric,
                                              const SensitivitySettings& settings) {
  if (metric.kind != MetricKind::kIpc) {
    throw Error("the gradient constraint is defined for the IPC metric only");
  }
  if (ipc_value < (1.0 - settings.epsilon) * metric.threshold) return std::nullopt;
  const double dr_m = settings.delta_r > 0.0 ? settings.delta_r : metric.combined_hbr;
  GradientBound g;
  g.gamma = gradient_bound(settings.rho, metric.threshold, ipc_value, dr_m * 1e-3);
  g.gradient_map = 2.0 * P.llt().solve(Mat3::Identity());
  return g;
}

double worst_case_ipc_change(const RelPosDistribution& d, double hbr_m, double delta_r_m) {
  const Vec3 grad = smd_gradient(d);
  const double gn = grad.norm();
  if (gn == 0.0) return 0.0;
  RelPosDistribution moved = d;
  moved.mu -= (delta_r_m * 1e-3) * grad / gn;
  return ipc(moved, hbr_m) - ipc(d, hbr_m);
}

}  // namespace ltcam
