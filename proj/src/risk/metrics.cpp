#include "ltcam/risk/metrics.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "ltcam/constants.hpp"

namespace ltcam {

namespace {

using constants::kPi;

std::string node_label(int node) {
  return node >= 0 ? " at node " + std::to_string(node) : std::string();
}

// Cholesky factor of P after a conditioning check.
Eigen::LLT<Mat3> factor(const Mat3& P, int node) {
  const Eigen::SelfAdjointEigenSolver<Mat3> es(P, Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues()[0];
  const double hi = es.eigenvalues()[2];
  if (!(lo > 0.0) || hi / lo >= 1e12) {
    throw Error("combined covariance is singular or ill-conditioned" + node_label(node));
  }
  Eigen::LLT<Mat3> llt(P);
  if (llt.info() != Eigen::Success) {
    throw Error("combined covariance is not positive definite" + node_label(node));
  }
  return llt;
}

double hbr_km(double hbr_m) { return hbr_m * 1e-3; }

}  // namespace

std::string to_string(MetricKind kind) {
  switch (kind) {
    case MetricKind::kIpc:
      return "ipc";
    case MetricKind::kMaxIpc:
      return "max_ipc";
    case MetricKind::kMissDistance:
      return "miss_distance";
  }
  return "unknown";
}

MetricKind metric_from_string(const std::string& name) {
  if (name == "ipc") return MetricKind::kIpc;
  if (name == "max_ipc") return MetricKind::kMaxIpc;
  if (name == "miss_distance") return MetricKind::kMissDistance;
  throw Error("unknown metric '" + name + "' (expected ipc, max_ipc or miss_distance)");
}

void RiskMetricSpec::validate() const {
  if (!(threshold > 0.0)) throw Error("metric threshold must be positive");
  if (kind != MetricKind::kMissDistance && !(threshold < 1.0)) {
    throw Error("probability threshold must be below 1");
  }
  if (!(combined_hbr >= 0.0)) throw Error("combined hard-body radius must be nonnegative");
}

double smd(const RelPosDistribution& d, int node) {
  const Eigen::LLT<Mat3> llt = factor(d.P, node);
  const Vec3 y = llt.matrixL().solve(d.mu);
  return y.squaredNorm();
}

double ipc(const RelPosDistribution& d, double hbr_m, int node) {
  const double dm2 = smd(d, node);
  const double r = hbr_km(hbr_m);
  const double p = std::sqrt(2.0 / (kPi * d.P.determinant())) * r * r * r / 3.0 * std::exp(-0.5 * dm2);
  return std::clamp(p, 0.0, 1.0);
}

double max_ipc(const RelPosDistribution& d, double hbr_m, int node) {
  const double dm2 = smd(d, node);
  if (!(dm2 > 0.0)) {
    throw Error("maximum IPC is undefined at the keep-out center" + node_label(node));
  }
  const double r = std::sqrt(2.0) * hbr_km(hbr_m);
  const double p = r * r * r / (3.0 * std::exp(1.0) * dm2 * std::sqrt(kPi * d.P.determinant()));
  return std::clamp(p, 0.0, 1.0);
}

Vec3 smd_gradient(const RelPosDistribution& d, int node) {
  return 2.0 * factor(d.P, node).solve(d.mu);
}

SmdLimit smd_limit(const RiskMetricSpec& metric, const Mat3& P, int node) {
  SmdLimit out;
  const double r = hbr_km(metric.combined_hbr);
  switch (metric.kind) {
    case MetricKind::kIpc: {
      factor(P, node);
      const double arg = 3.0 * metric.threshold / (r * r * r) * std::sqrt(kPi * P.determinant() / 2.0);
      out.value = -2.0 * std::log(arg);
      break;
    }
    case MetricKind::kMaxIpc: {
      factor(P, node);
      const double rs = std::sqrt(2.0) * r;
      out.value =
          rs * rs * rs / (3.0 * std::exp(1.0) * metric.threshold * std::sqrt(kPi * P.determinant()));
      break;
    }
    case MetricKind::kMissDistance:
      out.value = metric.threshold * metric.threshold;
      break;
  }
  out.always_satisfied = !(out.value > 0.0);
  return out;
}

Mat3 keepout_covariance(const RiskMetricSpec& metric, const Mat3& P) {
  return metric.kind == MetricKind::kMissDistance ? Mat3::Identity() : P;
}

double metric_value(const RiskMetricSpec& metric, const RelPosDistribution& d, int node) {
  switch (metric.kind) {
    case MetricKind::kIpc:
      return ipc(d, metric.combined_hbr, node);
    case MetricKind::kMaxIpc:
      return max_ipc(d, metric.combined_hbr, node);
    case MetricKind::kMissDistance:
      return d.mu.norm();
  }
  return 0.0;
}

bool metric_satisfied(const RiskMetricSpec& metric, double value, double slack) {
  if (metric.kind == MetricKind::kMissDistance) return value >= (1.0 - slack) * metric.threshold;
  return value <= (1.0 + slack) * metric.threshold;
}

}  // namespace ltcam
