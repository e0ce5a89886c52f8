#pragma once

#include <string>

#include "ltcam/risk/covariance.hpp"

namespace ltcam {

enum class MetricKind { kIpc, kMaxIpc, kMissDistance };

std::string to_string(MetricKind kind);
MetricKind metric_from_string(const std::string& name);

struct RiskMetricSpec {
  MetricKind kind = MetricKind::kIpc;
  double threshold = 1e-6;     // probability, or km for the miss distance
  double combined_hbr = 0.0;   // m

  void validate() const;
};

/// Squared Mahalanobis distance mu^T P^-1 mu. `node` labels error messages.
double smd(const RelPosDistribution& d, int node = -1);

/// Instantaneous collision probability with the density frozen at the
/// sphere center; R in meters. Clamped to [0, 1].
double ipc(const RelPosDistribution& d, double hbr_m, int node = -1);

/// Maximum instantaneous probability over covariance scaling; R in meters.
double max_ipc(const RelPosDistribution& d, double hbr_m, int node = -1);

/// Gradient of the squared Mahalanobis distance, 2 P^-1 mu.
Vec3 smd_gradient(const RelPosDistribution& d, int node = -1);

/// Keep-out limit on the squared Mahalanobis distance.
struct SmdLimit {
  double value = 0.0;
  /// True when the metric cannot exceed its threshold anywhere (value <= 0);
  /// no keep-out constraint is needed.
  bool always_satisfied = false;
};

/// Limit d_m^2 >= value implied by the metric threshold for a combined
/// covariance P. For the miss distance the covariance is ignored.
SmdLimit smd_limit(const RiskMetricSpec& metric, const Mat3& P, int node = -1);

/// The keep-out covariance: P itself for the probabilistic metrics, the
/// identity for the miss distance.
Mat3 keepout_covariance(const RiskMetricSpec& metric, const Mat3& P);

/// Value of the metric of record (probability, or miss distance in km).
double metric_value(const RiskMetricSpec& metric, const RelPosDistribution& d, int node = -1);

/// True when `value` satisfies the threshold with a relative slack.
bool metric_satisfied(const RiskMetricSpec& metric, double value, double slack = 0.0);

}  // namespace ltcam
