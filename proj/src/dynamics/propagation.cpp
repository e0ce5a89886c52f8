#include "ltcam/dynamics/propagation.hpp"

#include <cmath>
#include <string>

#include <unsupported/Eigen/AutoDiff>

#include "ltcam/dynamics/flow.hpp"

namespace ltcam {

namespace {

using Derivative6 = Eigen::Matrix<double, 6, 1>;
using Active = Eigen::AutoDiffScalar<Derivative6>;

constexpr int kStateSize = 6;
constexpr int kAugmentedSize = 6 + 36 + 18;

Vec6 error_scale(const Vec6& x) {
  const double r = std::max(x.head<3>().norm(), 1.0);
  const double v = std::max(x.tail<3>().norm(), 1e-3);
  Vec6 s;
  s << r, r, r, v, v, v;
  return s;
}

std::string label(int segment) {
  return segment >= 0 ? "segment " + std::to_string(segment) + ": " : std::string();
}

}  // namespace

Eigen::Matrix<double, 3, 6> acceleration_jacobian(double epoch, const Vec3& r, const Vec3& v,
                                                  const SpacecraftParams& params,
                                                  const ForceModelConfig& forces) {
  Vector3<Active> ra, va;
  for (int k = 0; k < 3; ++k) {
    ra[k] = Active(r[k], 6, k);
    va[k] = Active(v[k], 6, 3 + k);
  }
  const Vector3<Active> acc = acceleration<Active>(epoch, ra, va, params, forces);
  Eigen::Matrix<double, 3, 6> jac;
  for (int k = 0; k < 3; ++k) jac.row(k) = acc[k].derivatives().transpose();
  return jac;
}

VectorField orbital_field(const Vec6& x_typical, const SpacecraftParams& params,
                          const ForceModelConfig& forces) {
  VectorField field;
  field.f = [params, forces](double t, const Vec6& x, const Vec3& u) {
    const Vec3 r = x.head<3>();
    const Vec3 v = x.tail<3>();
    Vec6 dx;
    dx << v, acceleration<double>(t, r, v, params, forces) + u;
    return dx;
  };
  field.dfdx = [params, forces](double t, const Vec6& x, const Vec3&) {
    Mat6 m = Mat6::Zero();
    m.topRightCorner<3, 3>().setIdentity();
    m.bottomRows<3>() = acceleration_jacobian(t, x.head<3>(), x.tail<3>(), params, forces);
    return m;
  };
  field.dfdu = [](double, const Vec6&, const Vec3&) {
    Mat63 m = Mat63::Zero();
    m.bottomRows<3>().setIdentity();
    return m;
  };
  field.state_scale = error_scale(x_typical);
  const double r = field.state_scale[0];
  field.control_scale = constants::kMuEarth / (r * r);
  return field;
}

namespace {

// Integrates the state with its first-order variational equations.
SensitivityBundle first_order(const VectorField& field, double t0, const Vec6& x, const Vec3& u,
                              double dt, const IntegratorOptions& options) {
  const OdeFunction rhs = [&field, &u](double t, const Eigen::VectorXd& y, Eigen::VectorXd& dy) {
    const Vec6 state = y.head<kStateSize>();
    const Mat6 f_x = field.dfdx(t, state, u);
    const Eigen::Map<const Mat6> phi(y.data() + 6);
    const Eigen::Map<const Mat63> psi(y.data() + 42);
    dy.resize(kAugmentedSize);
    dy.head<kStateSize>() = field.f(t, state, u);
    Eigen::Map<Mat6>(dy.data() + 6) = f_x * phi;
    Eigen::Map<Mat63>(dy.data() + 42) = f_x * psi + field.dfdu(t, state, u);
  };

  Eigen::VectorXd y0 = Eigen::VectorXd::Zero(kAugmentedSize);
  y0.head<kStateSize>() = x;
  Eigen::Map<Mat6>(y0.data() + 6).setIdentity();

  const Vec6& s = field.state_scale;
  Eigen::VectorXd scale(kAugmentedSize);
  scale.head<kStateSize>() = s;
  for (int j = 0; j < 6; ++j) {
    for (int i = 0; i < 6; ++i) scale[6 + 6 * j + i] = s[i] / s[j];
  }
  for (int j = 0; j < 3; ++j) {
    for (int i = 0; i < 6; ++i) scale[42 + 6 * j + i] = s[i] / field.control_scale;
  }

  const Eigen::VectorXd y1 = integrate(rhs, t0, t0 + dt, y0, scale, options);
  SensitivityBundle b;
  b.x_ref = x;
  b.u_ref = u;
  b.xbar = y1.head<kStateSize>();
  b.A = Eigen::Map<const Mat6>(y1.data() + 6);
  b.B = Eigen::Map<const Mat63>(y1.data() + 42);
  return b;
}

}  // namespace

SensitivityBundle flow_sensitivities(const VectorField& field, double t0, const Vec6& x,
                                     const Vec3& u, double dt, bool want_second_order,
                                     const PropagationOptions& options) {
  SensitivityBundle b = first_order(field, t0, x, u, dt, options.integrator);
  if (!want_second_order) return b;

  for (auto& t : b.tensor) t.setZero();
  for (int w = 0; w < 9; ++w) {
    const double scale = w < 6 ? field.state_scale[w] : field.control_scale;
    const double h = options.tensor_rel_step * scale;
    Vec6 xp = x, xm = x;
    Vec3 up = u, um = u;
    if (w < 6) {
      xp[w] += h;
      xm[w] -= h;
    } else {
      up[w - 6] += h;
      um[w - 6] -= h;
    }
    const Mat69 jp = first_order(field, t0, xp, up, dt, options.integrator).jacobian();
    const Mat69 jm = first_order(field, t0, xm, um, dt, options.integrator).jacobian();
    const Mat69 d = (jp - jm) / (2.0 * h);
    for (int k = 0; k < 6; ++k) b.tensor[k].col(w) = d.row(k).transpose();
  }
  b.has_tensor = true;
  return b;
}

EpochState propagate_segment(const EpochState& state, const Vec3& control, double dt,
                             const SpacecraftParams& params, const ForceModelConfig& forces,
                             const PropagationOptions& options, int segment) {
  if (!(dt > 0.0)) throw Error(label(segment) + "propagate_segment requires dt > 0");
  if (!control.allFinite()) throw Error(label(segment) + "control must be finite");
  const Vec6 x0 = state.vector();
  const OdeFunction rhs = [&](double t, const Eigen::VectorXd& y, Eigen::VectorXd& dy) {
    const Vec3 r = y.head<3>();
    const Vec3 v = y.tail<3>();
    dy.resize(6);
    dy << v, acceleration<double>(t, r, v, params, forces) + control;
  };
  try {
    const Eigen::VectorXd y =
        integrate(rhs, state.epoch, state.epoch + dt, x0, error_scale(x0), options.integrator);
    return EpochState::from_vector(state.epoch + dt, y);
  } catch (const Error& e) {
    throw Error(label(segment) + e.what());
  }
}

EpochState propagate_to(const EpochState& state, double epoch, const SpacecraftParams& params,
                        const ForceModelConfig& forces, const PropagationOptions& options) {
  if (epoch == state.epoch) return state;
  const Vec6 x0 = state.vector();
  const OdeFunction rhs = [&](double t, const Eigen::VectorXd& y, Eigen::VectorXd& dy) {
    const Vec3 r = y.head<3>();
    const Vec3 v = y.tail<3>();
    dy.resize(6);
    dy << v, acceleration<double>(t, r, v, params, forces);
  };
  const Eigen::VectorXd y = integrate(rhs, state.epoch, epoch, x0, error_scale(x0), options.integrator);
  return EpochState::from_vector(epoch, y);
}

SensitivityBundle sensitivities(const EpochState& state, const Vec3& control, double dt,
                                const SpacecraftParams& params, const ForceModelConfig& forces,
                                bool want_second_order, const PropagationOptions& options,
                                int segment) {
  if (!(dt > 0.0)) throw Error(label(segment) + "sensitivities requires dt > 0");
  if (!control.allFinite()) throw Error(label(segment) + "control must be finite");
  const VectorField field = orbital_field(state.vector(), params, forces);
  try {
    return flow_sensitivities(field, state.epoch, state.vector(), control, dt, want_second_order,
                              options);
  } catch (const Error& e) {
    throw Error(label(segment) + e.what());
  }
}

Trajectory propagate_trajectory(const EpochState& x0, const std::vector<Vec3>& controls, double dt,
                                const SpacecraftParams& params, const ForceModelConfig& forces,
                                bool with_sensitivities, bool second_order,
                                const PropagationOptions& options) {
  Trajectory traj;
  traj.dt = dt;
  traj.controls = controls;
  traj.nodes.reserve(controls.size() + 1);
  traj.nodes.push_back(x0);
  for (std::size_t i = 0; i < controls.size(); ++i) {
    const EpochState& xi = traj.nodes.back();
    const int seg = static_cast<int>(i);
    if (with_sensitivities) {
      SensitivityBundle b =
          sensitivities(xi, controls[i], dt, params, forces, second_order, options, seg);
      traj.nodes.push_back(EpochState::from_vector(xi.epoch + dt, b.xbar));
      traj.bundles.push_back(std::move(b));
    } else {
      traj.nodes.push_back(propagate_segment(xi, controls[i], dt, params, forces, options, seg));
    }
  }
  return traj;
}

Trajectory coast_grid(const EpochState& x0, int n, double dt, const SpacecraftParams& params,
                      const ForceModelConfig& forces, bool second_order,
                      const PropagationOptions& options) {
  if (n < 1) throw Error("coast_grid: at least one segment is required");
  return propagate_trajectory(x0, std::vector<Vec3>(n, Vec3::Zero()), dt, params, forces, true,
                              second_order, options);
}

}  // namespace ltcam
