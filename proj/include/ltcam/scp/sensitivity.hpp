#pragma once

#include <optional>

#include "ltcam/risk/metrics.hpp"

namespace ltcam {

struct SensitivitySettings {
  double rho = 1.0;
  double epsilon = 0.01;
  double delta_r = 0.0;  // m; 0 selects the combined hard-body radius
};

/// Bound on ||grad d_m^2|| at one node: ||2 P^-1 r|| <= gamma.
struct GradientBound {
  double gamma = 0.0;  // 1/km
  Mat3 gradient_map = Mat3::Zero();  // 2 P^-1
};

/// gamma = 2 rho Pbar / (P_IC Delta r), with Delta r in km.
double gradient_bound(double rho, double threshold, double ipc_value, double delta_r_km);

/// Gradient bound for a node whose reference probability is `ipc_value`;
/// empty when the node is below (1 - epsilon) of the threshold.
std::optional<GradientBound> sensitivity_rows(const Mat3& P, double ipc_value,
                                              const RiskMetricSpec& metric,
                                              const SensitivitySettings& settings);

/// Change of the instantaneous probability when the relative position moves
/// by delta_r (m) along the steepest ascent of the probability (-grad d_m^2).
double worst_case_ipc_change(const RelPosDistribution& d, double hbr_m, double delta_r_m);

}  // namespace ltcam
