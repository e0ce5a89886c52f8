#include "ltcam/dynamics/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ltcam {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                 a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                 a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                 b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
// b - b_hat
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                 e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;

}  // namespace

Eigen::VectorXd integrate(const OdeFunction& f, double t0, double t1, const Eigen::VectorXd& y0,
                          const Eigen::VectorXd& scale, const IntegratorOptions& options,
                          IntegrationStats* stats) {
  const Eigen::Index n = y0.size();
  Eigen::VectorXd y = y0;
  if (t1 == t0) return y;

  const double direction = t1 > t0 ? 1.0 : -1.0;
  const double span = std::abs(t1 - t0);

  Eigen::VectorXd k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), tmp(n), y_new(n), err(n);
  f(t0, y, k1);

  // Initial step from the first-derivative magnitude (Hairer's heuristic, simplified).
  double d0 = 0.0, d1 = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double sc = options.rel_tol * (std::abs(y[i]) + scale[i]);
    d0 = std::max(d0, std::abs(y[i]) / (std::abs(y[i]) + scale[i]));
    d1 = std::max(d1, std::abs(k1[i]) * options.rel_tol / sc);
  }
  double h = (d1 > 1e-300) ? 0.01 * std::max(d0, 1e-5) / d1 : 1e-3 * span;
  h = std::clamp(h, options.min_step, span);

  double t = t0;
  double remaining = span;
  int steps = 0;
  int accepted = 0;
  int rejected = 0;
  while (remaining > 0.0) {
    if (++steps > options.max_steps) {
      throw Error("integrator: step budget exhausted at t=" + std::to_string(t));
    }
    bool last = false;
    if (h >= remaining * (1.0 - 1e-12)) {
      h = remaining;
      last = true;
    }
    const double hs = direction * h;

    tmp = y + hs * a21 * k1;
    f(t + c2 * hs, tmp, k2);
    tmp = y + hs * (a31 * k1 + a32 * k2);
    f(t + c3 * hs, tmp, k3);
    tmp = y + hs * (a41 * k1 + a42 * k2 + a43 * k3);
    f(t + c4 * hs, tmp, k4);
    tmp = y + hs * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
    f(t + c5 * hs, tmp, k5);
    tmp = y + hs * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
    f(t + hs, tmp, k6);
    y_new = y + hs * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    f(t + hs, y_new, k7);
    err = hs * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

    double err_norm = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double tol =
          options.rel_tol * (std::max(std::abs(y[i]), std::abs(y_new[i])) + scale[i]);
      err_norm = std::max(err_norm, std::abs(err[i]) / tol);
    }

    if (!std::isfinite(err_norm)) {
      throw Error("integrator: non-finite state at t=" + std::to_string(t));
    }

    if (err_norm <= 1.0) {
      t = last ? t1 : t + hs;
      remaining = last ? 0.0 : remaining - h;
      y.swap(y_new);
      k1.swap(k7);
      ++accepted;
      const double factor =
          err_norm > 0.0 ? std::min(5.0, 0.9 * std::pow(err_norm, -0.2)) : 5.0;
      h *= factor;
    } else {
      ++rejected;
      h *= std::max(0.2, 0.9 * std::pow(err_norm, -0.2));
      if (h < options.min_step) {
        std::ostringstream msg;
        msg << "integrator: step size underflow (h=" << h << " s) at t=" << t;
        throw Error(msg.str());
      }
    }
  }
  if (stats) {
    stats->accepted += accepted;
    stats->rejected += rejected;
  }
  return y;
}

}  // namespace ltcam
