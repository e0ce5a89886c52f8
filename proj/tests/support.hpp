#pragma once

#include <cmath>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/Geometry>

#include "ltcam/io/scenario.hpp"
#include "ltcam/risk/metrics.hpp"

namespace ltcam::testing {

inline std::string scenario_path(const std::string& name) {
  return std::string(LTCAM_SCENARIO_DIR) + "/" + name + ".json";
}

inline const ScenarioSpec& leo_spec() {
  static const ScenarioSpec spec = load_scenario(scenario_path("leo_base"));
  return spec;
}

inline const ScenarioSpec& geo_spec() {
  static const ScenarioSpec spec = load_scenario(scenario_path("geo_base"));
  return spec;
}

struct Ballistic {
  ScpScenario scenario;
  Trajectory primary;
  Trajectory secondary;
  std::vector<StateCovariance> primary_cov;
  std::vector<StateCovariance> secondary_cov;
  std::vector<NodeMetrics> nodes;
};

/// Coasts both objects over the window and evaluates every metric per node.
inline Ballistic ballistic(const ScenarioSpec& spec) {
  Ballistic b{make_scenario(spec), {}, {}, {}, {}, {}};
  const ScpScenario& s = b.scenario;
  b.primary = coast_grid(s.primary, spec.segments(), spec.dt(), s.primary_params, s.forces, false);
  b.secondary =
      coast_grid(s.secondary, spec.segments(), spec.dt(), s.secondary_params, s.forces, false);
  auto stms = [](const Trajectory& t) {
    std::vector<Mat6> a;
    for (const auto& bundle : t.bundles) a.push_back(bundle.A);
    return a;
  };
  b.primary_cov = propagate_covariance(s.primary_cov, stms(b.primary));
  b.secondary_cov = propagate_covariance(s.secondary_cov, stms(b.secondary));
  b.nodes = node_metrics(spec.metric_spec(), b.primary.nodes, b.primary_cov, b.secondary.nodes,
                         b.secondary_cov);
  return b;
}

inline Mat3 random_rotation(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::Quaterniond q(n(rng), n(rng), n(rng), n(rng));
  return q.normalized().toRotationMatrix();
}

/// Random SPD matrix with eigenvalues log-uniform in [lo, hi].
inline Mat3 random_spd(std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
  const Mat3 r = random_rotation(rng);
  const Vec3 lambda(std::exp(u(rng)), std::exp(u(rng)), std::exp(u(rng)));
  Mat3 p = r * lambda.asDiagonal() * r.transpose();
  return 0.5 * (p + p.transpose());
}

/// Gauss-Legendre nodes and weights on [-1, 1].
inline std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n) {
  std::vector<double> x(n), w(n);
  for (int i = 0; i < n; ++i) {
    double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    x[i] = z;
    w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
  return {x, w};
}

/// Probability mass of N(mu, P) inside the ball of radius r_km about the
/// origin, by product quadrature in spherical coordinates.
inline double ball_probability(const Vec3& mu, const Mat3& P, double r_km) {
  const auto [xr, wr] = gauss_legendre(24);
  const auto [xc, wc] = gauss_legendre(32);
  const int nphi = 64;
  const Mat3 pinv = P.inverse();
  const double norm = 1.0 / std::sqrt(std::pow(2.0 * M_PI, 3) * P.determinant());
  double sum = 0.0;
  for (std::size_t i = 0; i < xr.size(); ++i) {
    const double rho = 0.5 * r_km * (xr[i] + 1.0);
    const double wrho = 0.5 * r_km * wr[i] * rho * rho;
    for (std::size_t j = 0; j < xc.size(); ++j) {
      const double ct = xc[j];
      const double st = std::sqrt(1.0 - ct * ct);
      for (int k = 0; k < nphi; ++k) {
        const double phi = 2.0 * M_PI * k / nphi;
        const Vec3 x(rho * st * std::cos(phi), rho * st * std::sin(phi), rho * ct);
        const Vec3 d = x - mu;
        sum += wrho * wc[j] * (2.0 * M_PI / nphi) * std::exp(-0.5 * d.dot(pinv * d));
      }
    }
  }
  return norm * sum;
}

/// Largest ipc over covariance scalings k P, by a log-spaced scan refined
/// with golden-section search.
inline double scanned_max_ipc(const RelPosDistribution& d, double hbr_m) {
  auto f = [&](double logk) {
    RelPosDistribution s = d;
    s.P = std::exp(logk) * d.P;
    return ipc(s, hbr_m);
  };
  double best = -30.0;
  for (double lk = -30.0; lk <= 30.0; lk += 0.01) {
    if (f(lk) > f(best)) best = lk;
  }
  double a = best - 0.01, b = best + 0.01;
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  for (int it = 0; it < 100; ++it) {
    const double c = b - g * (b - a);
    const double e = a + g * (b - a);
    if (f(c) > f(e)) {
      b = e;
    } else {
      a = c;
    }
  }
  return f(0.5 * (a + b));
}

inline double relative_error(double value, double reference) {
  return std::abs(value - reference) / std::abs(reference);
}

template <typename A, typename B>
double max_relative_error(const A& value, const B& reference) {
  return (value - reference).cwiseAbs().maxCoeff() / reference.cwiseAbs().maxCoeff();
}

}  // namespace ltcam::testing
