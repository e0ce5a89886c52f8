#include "ltcam/scp/engine.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Cholesky>

#include "ltcam/dynamics/frames.hpp"
#include "ltcam/log.hpp"
#include "ltcam/scp/trust_region.hpp"

namespace ltcam {

std::string to_string(PlanStatus status) {
  switch (status) {
    case PlanStatus::kConverged:
      return "CONVERGED";
    case PlanStatus::kNotConverged:
      return "NOT_CONVERGED";
    case PlanStatus::kSolverFailure:
      return "SOLVER_FAILURE";
  }
  return "UNKNOWN";
}

namespace {

std::vector<Mat6> stms(const Trajectory& t) {
  std::vector<Mat6> a;
  a.reserve(t.bundles.size());
  for (const auto& b : t.bundles) a.push_back(b.A);
  return a;
}

std::vector<Vec3> physical_controls(const std::vector<Vec3>& normalized, double u_max) {
  std::vector<Vec3> u;
  u.reserve(normalized.size());
  for (const Vec3& v : normalized) u.push_back(v * u_max);
  return u;
}

std::string format_trace(const std::vector<MajorIteration>& trace) {
  std::ostringstream os;
  os << "major minors du_inf vc_sum objective dv_mm_s status\n";
  for (const auto& m : trace) {
    os << m.major << ' ' << m.minors << ' ' << m.control_change << ' ' << m.vc_sum << ' '
       << m.objective << ' ' << m.total_dv << ' ' << m.solver_status << '\n';
  }
  return os.str();
}

}  // namespace

std::vector<NodeMetrics> node_metrics(const RiskMetricSpec& metric,
                                      const std::vector<EpochState>& primary,
                                      const std::vector<StateCovariance>& primary_cov,
                                      const std::vector<EpochState>& secondary,
                                      const std::vector<StateCovariance>& secondary_cov) {
  const std::size_t n = primary.size();
  if (secondary.size() != n || primary_cov.size() != n || secondary_cov.size() != n) {
    throw Error("node_metrics: trajectory and covariance lengths differ");
  }
  std::vector<NodeMetrics> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const int node = static_cast<int>(i);
    const RelPosDistribution d = combined_relative(primary[i].position, primary_cov[i],
                                                   secondary[i].position, secondary_cov[i]);
    NodeMetrics& m = out[i];
    const SmdLimit limit = smd_limit(metric, d.P, node);
    m.constrained = !limit.always_satisfied;
    m.dbar2 = m.constrained ? limit.value : 0.0;
    m.dm2 = smd({d.mu, keepout_covariance(metric, d.P)}, node);
    m.ipc = ipc(d, metric.combined_hbr, node);
    m.max_ipc = max_ipc(d, metric.combined_hbr, node);
    m.miss = d.mu.norm();
    m.metric = metric_value(metric, d, node);
  }
  return out;
}

std::optional<Vec6> resolve_target(const ScpScenario& scenario, const ScpConfig& cfg) {
  if (!cfg.return_to_orbit && !cfg.sk_target) return std::nullopt;
  const std::vector<Vec3> zero(cfg.N, Vec3::Zero());
  const Trajectory coast = propagate_trajectory(scenario.primary, zero, cfg.dt,
                                                scenario.primary_params, scenario.forces, false,
                                                false, scenario.propagation);
  const EpochState end = return_target(coast);
  if (cfg.return_to_orbit) return end.vector();
  SkTargetOptions options = cfg.sk_options;
  const SkTargetResult sk = solve_sk_target(end, cfg.sk_horizon_days, cfg.box,
                                            scenario.primary_params, scenario.forces, options);
  log_line(LogLevel::kInfo, "sk target: violation " + std::to_string(sk.violation) + " deg after " +
                                std::to_string(sk.iterations) + " iterations");
  return sk.target.vector();
}

ManeuverPlan run(const ScpScenario& scenario, const ScpConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  cfg.validate();
  scenario.primary.validate();
  scenario.secondary.validate();
  scenario.primary_params.validate();
  scenario.secondary_params.validate();
  scenario.forces.validate();
  scenario.primary_cov.validate();
  scenario.secondary_cov.validate();

  const int n = cfg.N;
  const std::vector<Vec3> zero(n, Vec3::Zero());
  const Trajectory secondary = propagate_trajectory(scenario.secondary, zero, cfg.dt,
                                                    scenario.secondary_params, scenario.forces,
                                                    true, false, scenario.propagation);
  const std::vector<StateCovariance> secondary_cov =
      propagate_covariance(scenario.secondary_cov, stms(secondary));
  const NondimScales scales =
      NondimScales::from_orbit(scenario.primary.position.norm(), constants::kMuEarth, cfg.u_max);
  const Vec6 units = state_variable_units();

  ManeuverPlan plan;
  plan.N = n;
  plan.dt = cfg.dt;
  plan.u_max = cfg.u_max;
  plan.target = resolve_target(scenario, cfg);

  std::vector<Vec3> u_hat(n, Vec3::Zero());
  struct Iterate {
    std::vector<Vec3> u;
    std::vector<double> slack;
    std::vector<EpochState> linear;
    std::vector<NodeMetrics> nodes;
    std::vector<double> gamma;
    std::vector<double> grad;
    double vc_sum = std::numeric_limits<double>::infinity();
    double objective = std::numeric_limits<double>::infinity();
  };
  std::optional<Iterate> best;
  Iterate last;

  for (int j = 1; j <= cfg.j_max; ++j) {
    const Trajectory ref = propagate_trajectory(scenario.primary, physical_controls(u_hat, cfg.u_max),
                                                cfg.dt, scenario.primary_params, scenario.forces,
                                                true, true, scenario.propagation);
    const std::vector<StateCovariance> primary_cov =
        propagate_covariance(scenario.primary_cov, stms(ref));
    const std::vector<NodeMetrics> metrics =
        node_metrics(cfg.metric, ref.nodes, primary_cov, secondary.nodes, secondary_cov);

    std::vector<NodeLinearization> lin(n + 1);
    int gradient_nodes = 0;
    for (int i = 0; i <= n; ++i) {
      NodeLinearization& node = lin[i];
      node.state = ref.nodes[i];
      const RelPosDistribution d = combined_relative(ref.nodes[i].position, primary_cov[i],
                                                     secondary.nodes[i].position, secondary_cov[i]);
      node.r = d.mu;
      node.P = d.P;
      node.P_keepout = keepout_covariance(cfg.metric, d.P);
      node.limit = smd_limit(cfg.metric, d.P, i);
      node.dm2 = metrics[i].dm2;
      node.ipc = metrics[i].ipc;
      if (i < n) {
        node.control = u_hat[i];
        node.bundle = ref.bundles[i];
        node.xi = nli_weights(nondimensionalize(ref.bundles[i], scales));
      }
      if (i >= 1 && cfg.sensitivity && j >= 2) {
        node.gradient = sensitivity_rows(d.P, node.ipc, cfg.metric, *cfg.sensitivity);
        if (node.gradient) ++gradient_nodes;
      }
      if (i >= 1 && cfg.sk_box) {
        node.has_geodetic = true;
        node.G = geodetic_jacobian(node.state);
        node.phi = eci_to_geodetic(node.state);
      }
    }
    lin[n].xi = lin[n - 1].xi;

    std::vector<Vec3> r_prev(n + 1);
    for (int i = 0; i <= n; ++i) r_prev[i] = lin[i].r;

    MajorIteration record;
    record.major = j;
    record.gradient_nodes = gradient_nodes;
    conic::ConicSolution sol;
    Subproblem sub;
    for (int k = 1; k <= cfg.k_max; ++k) {
      for (int i = 1; i <= n; ++i) {
        NodeLinearization& node = lin[i];
        if (node.limit.always_satisfied) {
          node.ca.reset();
          continue;
        }
        const double d2 = r_prev[i].dot(node.P_keepout.ldlt().solve(r_prev[i]));
        const Vec3 z = d2 < node.limit.value
                           ? seed_inside_point(r_prev[i], node.P_keepout, node.limit.value)
                           : project_onto_ellipsoid(r_prev[i], node.P_keepout, node.limit.value);
        node.ca = ca_halfspace(z, node.P_keepout);
      }
      sub = assemble_subproblem(lin, cfg, plan.target);
      sol = conic::solve(sub.problem, cfg.solver);
      record.minors = k;
      record.solver_status = conic::to_string(sol.status);
      if (sol.status != conic::SolveStatus::kOptimal) {
        break;
      }

      double change = 0.0;
      for (int i = 1; i <= n; ++i) {
        Vec3 r_new = lin[i].r;
        for (int c = 0; c < 3; ++c) r_new[c] += sol.x[sub.layout.x(i, c)];
        change = std::max(change, (r_new - r_prev[i]).cwiseAbs().maxCoeff());
        r_prev[i] = r_new;
      }
      record.minor_change = change;
      log_line(LogLevel::kDebug, "major " + std::to_string(j) + " minor " + std::to_string(k) +
                                     " dr_inf " + std::to_string(change) + " km");
      if (change <= cfg.tol_minor) break;
    }
    plan.n_min += record.minors;

    if (sol.status != conic::SolveStatus::kOptimal) {
      plan.trace.push_back(record);
      plan.n_maj = j;
      plan.status = PlanStatus::kSolverFailure;
      plan.message = "subproblem " + record.solver_status + " in major iteration " +
                     std::to_string(j) + "\n" + format_trace(plan.trace);
      break;
    }

    Iterate it;
    it.u.resize(n);
    it.slack.resize(n);
    double control_change = 0.0;
    int change_node = 0;
    for (int i = 0; i < n; ++i) {
      for (int c = 0; c < 3; ++c) it.u[i][c] = sol.x[sub.layout.u(i, c)];
      it.slack[i] = sol.x[sub.layout.slack(i)];
      const double du = (it.u[i] - u_hat[i]).cwiseAbs().maxCoeff();
      if (du > control_change) {
        control_change = du;
        change_node = i;
      }
    }
    log_line(LogLevel::kDebug, "major " + std::to_string(j) + ": largest control change at segment " +
                                   std::to_string(change_node));
    it.vc_sum = 0.0;
    for (int i = 1; i <= n; ++i) it.vc_sum += sol.x[sub.layout.vhead(i)];
    it.objective = sol.objective;
    it.linear.resize(n + 1);
    it.gamma.assign(n + 1, 0.0);
    it.grad.assign(n + 1, 0.0);
    for (int i = 0; i <= n; ++i) {
      Vec6 x = ref.nodes[i].vector();
      for (int c = 0; c < 6; ++c) x[c] += units[c] * sol.x[sub.layout.x(i, c)];
      it.linear[i] = EpochState::from_vector(ref.nodes[i].epoch, x);
      const Vec3 r = it.linear[i].position - secondary.nodes[i].position;
      it.grad[i] = (2.0 * lin[i].P.ldlt().solve(r)).norm();
      if (lin[i].gradient) it.gamma[i] = lin[i].gradient->gamma;
    }
    it.nodes = metrics;

    double total = 0.0;
    for (int i = 0; i < n; ++i) total += it.u[i].norm() * cfg.u_max * cfg.dt * 1e6;
    record.control_change = control_change;
    record.vc_sum = it.vc_sum;
    record.objective = it.objective;
    record.total_dv = total;
    plan.trace.push_back(record);
    plan.n_maj = j;
    log_line(LogLevel::kInfo, "major " + std::to_string(j) + ": minors " +
                                  std::to_string(record.minors) + ", du " +
                                  std::to_string(control_change) + ", vc " +
                                  std::to_string(it.vc_sum) + ", dv " + std::to_string(total) +
                                  " mm/s");

    u_hat = it.u;
    last = it;
    if (!best || it.vc_sum < best->vc_sum ||
        (it.vc_sum <= cfg.vc_tolerance && it.objective < best->objective)) {
      best = it;
    }
    if (control_change <= cfg.tol_major && it.vc_sum <= cfg.vc_tolerance) {
      plan.status = PlanStatus::kConverged;
      break;
    }
  }

  if (plan.status == PlanStatus::kNotConverged) {
    plan.message = "major iteration limit " + std::to_string(cfg.j_max) + " reached\n" +
                   format_trace(plan.trace);
  }
  const Iterate& chosen = plan.status == PlanStatus::kConverged || !best ? last : *best;
  if (!chosen.u.empty()) {
    plan.controls = physical_controls(chosen.u, cfg.u_max);
    plan.slack = chosen.slack;
    plan.linear_states = chosen.linear;
    plan.nodes = chosen.nodes;
    plan.gamma = chosen.gamma;
    plan.gradient_norm = chosen.grad;
    plan.dv.resize(n);
    plan.dv_rtn.resize(n);
    plan.total_dv = 0.0;
    for (int i = 0; i < n; ++i) {
      const Vec3 dv = plan.controls[i] * cfg.dt * 1e6;
      plan.dv[i] = dv.norm();
      plan.dv_rtn[i] = rtn_to_eci(chosen.linear[i]).transpose() * dv;
      plan.total_dv += plan.dv[i];
    }
  }
  plan.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return plan;
}

ValidationReport validate_plan(const ScpScenario& scenario, const ScpConfig& cfg,
                               const ManeuverPlan& plan) {
  const int n = cfg.N;
  if (static_cast<int>(plan.controls.size()) != n) {
    throw Error("validate_plan: plan has " + std::to_string(plan.controls.size()) +
                " controls, expected " + std::to_string(n));
  }
  const std::vector<Vec3> zero(n, Vec3::Zero());
  const Trajectory secondary = propagate_trajectory(scenario.secondary, zero, cfg.dt,
                                                    scenario.secondary_params, scenario.forces,
                                                    true, false, scenario.propagation);
  const Trajectory primary = propagate_trajectory(scenario.primary, plan.controls, cfg.dt,
                                                  scenario.primary_params, scenario.forces, true,
                                                  false, scenario.propagation);
  const auto primary_cov = propagate_covariance(scenario.primary_cov, stms(primary));
  const auto secondary_cov = propagate_covariance(scenario.secondary_cov, stms(secondary));

  ValidationReport report;
  report.states = primary.nodes;
  report.nodes = node_metrics(cfg.metric, primary.nodes, primary_cov, secondary.nodes, secondary_cov);
  if (static_cast<int>(plan.linear_states.size()) == n + 1) {
    for (int i = 0; i <= n; ++i) {
      const double e = (primary.nodes[i].position - plan.linear_states[i].position).norm() * 1e3;
      report.max_position_error = std::max(report.max_position_error, e);
    }
  }
  report.valid = true;
  for (int i = 1; i <= n; ++i) {
    const double value = report.nodes[i].metric;
    const double ratio = cfg.metric.kind == MetricKind::kMissDistance
                             ? cfg.metric.threshold / std::max(value, 1e-300)
                             : value / cfg.metric.threshold;
    if (ratio > report.worst_ratio) {
      report.worst_ratio = ratio;
      report.worst_node = i;
    }
    if (!metric_satisfied(cfg.metric, value, 0.05)) report.valid = false;
  }
  return report;
}

}  // namespace ltcam
