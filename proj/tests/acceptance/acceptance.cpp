#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "ltcam/conic/solver.hpp"
#include "ltcam/dynamics/flow.hpp"
#include "ltcam/dynamics/frames.hpp"
#include "ltcam/scp/trust_region.hpp"
#include "support.hpp"

using namespace ltcam;
using namespace ltcam::testing;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string format(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), f, args...);
  return buf;
}

// ---------------------------------------------------------------------------
// Fixture runs shared by several criteria.

struct Case {
  std::string label;
  std::string fixture;
  MetricKind metric = MetricKind::kIpc;
  bool sk = false;
  double rho = 0.0;
};

struct Run {
  Case c;
  ScenarioSpec spec;
  ScpScenario scenario;
  ScpConfig cfg;
  ManeuverPlan plan;
  ValidationReport validation;
};

ScenarioSpec spec_for(const Case& c) {
  ScenarioSpec spec = load_scenario(scenario_path(c.fixture));
  spec.metric = c.metric;
  if (c.sk) {
    spec.sk_box = true;
    spec.target = TargetMode::kStationKeeping;
  }
  if (c.rho > 0.0) {
    SensitivitySettings s = spec.sensitivity.value_or(SensitivitySettings{});
    s.rho = c.rho;
    spec.sensitivity = s;
  }
  return spec;
}

const Run& solve_case(const Case& c) {
  static std::map<std::string, Run> cache;
  auto it = cache.find(c.label);
  if (it != cache.end()) return it->second;
  Run r;
  r.c = c;
  r.spec = spec_for(c);
  r.scenario = make_scenario(r.spec);
  r.cfg = make_config(r.spec);
  r.plan = run(r.scenario, r.cfg);
  if (!r.plan.controls.empty()) r.validation = validate_plan(r.scenario, r.cfg, r.plan);
  std::printf("    run %-22s %-14s dv %9.3f mm/s  n_maj %2d  n_min %3d  e %.3g m  %.1f s\n",
              c.label.c_str(), to_string(r.plan.status).c_str(), r.plan.total_dv, r.plan.n_maj,
              r.plan.n_min, r.validation.max_position_error, r.plan.wall_time);
  return cache.emplace(c.label, std::move(r)).first->second;
}

std::vector<Case> fixture_matrix() {
  return {
      {"leo_base/ipc", "leo_base", MetricKind::kIpc},
      {"leo_base/max_ipc", "leo_base", MetricKind::kMaxIpc},
      {"leo_base/miss_distance", "leo_base", MetricKind::kMissDistance},
      {"leo_1orbit/ipc", "leo_1orbit", MetricKind::kIpc},
      {"geo_base/ipc", "geo_base", MetricKind::kIpc},
      {"geo_base/max_ipc", "geo_base", MetricKind::kMaxIpc},
      {"geo_base/miss_distance", "geo_base", MetricKind::kMissDistance},
      {"geo_base/ipc+sk", "geo_base", MetricKind::kIpc, true},
      {"geo_base/max_ipc+sk", "geo_base", MetricKind::kMaxIpc, true},
      {"geo_base/miss_distance+sk", "geo_base", MetricKind::kMissDistance, true},
  };
}

// ---------------------------------------------------------------------------

Outcome metric_oracle() {
  constexpr double kIpcTol = 0.01;
  constexpr double kMaxIpcTol = 0.005;
  constexpr double kRuntime = 60.0;
  const auto start = Clock::now();
  std::mt19937_64 rng(20240501);
  std::uniform_real_distribution<double> frac(0.02, 0.1);
  std::uniform_real_distribution<double> dist(0.3, 3.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  double worst_ipc = 0.0, worst_max = 0.0;
  for (int i = 0; i < 50; ++i) {
    const Mat3 P = random_spd(rng, 1e-4, 1.0);
    const double semi_axis = std::sqrt(Eigen::SelfAdjointEigenSolver<Mat3>(P).eigenvalues()[0]);
    const double r_km = frac(rng) * semi_axis;
    Vec3 w(normal(rng), normal(rng), normal(rng));
    const Vec3 mu = P.llt().matrixL() * (dist(rng) * w.normalized());
    const RelPosDistribution d{mu, P};
    worst_ipc = std::max(worst_ipc, relative_error(ipc(d, r_km * 1e3), ball_probability(mu, P, r_km)));
    worst_max = std::max(worst_max, relative_error(max_ipc(d, r_km * 1e3), scanned_max_ipc(d, r_km * 1e3)));
  }
  const double t = seconds_since(start);
  return {worst_ipc <= kIpcTol && worst_max <= kMaxIpcTol && t < kRuntime,
          format("ipc vs quadrature worst %.3g%% (tol %.3g%%); max_ipc vs covariance-scaling scan "
                 "worst %.3g%% (tol %.3g%%); %.1f s",
                 100 * worst_ipc, 100 * kIpcTol, 100 * worst_max, 100 * kMaxIpcTol, t)};
}

Outcome round_trips() {
  constexpr double kTol = 1e-12;
  std::mt19937_64 rng(77);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> dist(0.5, 6.0);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const Mat3 P = random_spd(rng, 1e-4, 1e-1);
    Vec3 w(normal(rng), normal(rng), normal(rng));
    const Vec3 mu = P.llt().matrixL() * (dist(rng) * w.normalized());
    const RelPosDistribution d{mu, P};
    const double dm2 = smd(d);
    for (MetricKind kind : {MetricKind::kIpc, MetricKind::kMaxIpc}) {
      RiskMetricSpec spec{kind, 0.0, 32.0};
      spec.threshold = metric_value(spec, d);
      const SmdLimit limit = smd_limit(spec, P);
      if (limit.always_satisfied) return {false, "limit reported as always satisfied"};
      worst = std::max(worst, relative_error(limit.value, dm2));
      const Vec3 back = mu * std::sqrt(limit.value / dm2);
      worst = std::max(worst, relative_error(metric_value(spec, {back, P}), spec.threshold));
    }
  }
  return {worst <= kTol, format("worst relative round-trip error %.3g (tol %.0e)", worst, kTol)};
}

Mat6 finite_difference_stm(const EpochState& x, double dt, const SpacecraftParams& params,
                           const ForceModelConfig& forces) {
  Mat6 stm;
  for (int k = 0; k < 6; ++k) {
    const double h = k < 3 ? 1e-4 : 1e-7;
    Vec6 plus = x.vector(), minus = x.vector();
    plus[k] += h;
    minus[k] -= h;
    const Vec6 fp =
        propagate_segment(EpochState::from_vector(x.epoch, plus), Vec3::Zero(), dt, params, forces).vector();
    const Vec6 fm =
        propagate_segment(EpochState::from_vector(x.epoch, minus), Vec3::Zero(), dt, params, forces).vector();
    stm.col(k) = (fp - fm) / (2.0 * h);
  }
  return stm;
}

Mat6 scaled(const Mat6& a, double length, double dt) {
  Vec6 s;
  s << length, length, length, length / dt, length / dt, length / dt;
  return s.asDiagonal().inverse() * a * s.asDiagonal();
}

Outcome sensitivity_machinery() {
  constexpr double kStmTol = 1e-5;
  constexpr double kGradTol = 1e-8;
  constexpr double kNliTol = 1e-9;
  double worst_stm = 0.0;
  for (const ScenarioSpec* spec : {&leo_spec(), &geo_spec()}) {
    const ScpScenario s = make_scenario(*spec);
    const double length = s.primary.position.norm();
    const SensitivityBundle b =
        sensitivities(s.primary, Vec3::Zero(), spec->dt(), s.primary_params, s.forces, false);
    const Mat6 fd = finite_difference_stm(s.primary, spec->dt(), s.primary_params, s.forces);
    worst_stm = std::max(worst_stm, max_relative_error(scaled(b.A, length, spec->dt()),
                                                       scaled(fd, length, spec->dt())));
  }

  std::mt19937_64 rng(17);
  double worst_grad = 0.0;
  for (int i = 0; i < 50; ++i) {
    const RelPosDistribution d{Vec3::Random(), random_spd(rng, 1e-2, 1.0)};
    const Vec3 g = smd_gradient(d);
    Vec3 fd;
    for (int k = 0; k < 3; ++k) {
      const double h = 1e-4;
      RelPosDistribution p = d, m = d;
      p.mu[k] += h;
      m.mu[k] -= h;
      fd[k] = (smd(p) - smd(m)) / (2.0 * h);
    }
    worst_grad = std::max(worst_grad, (fd - g).norm() / g.norm());
  }

  Mat6 m = Mat6::Zero();
  m.topRightCorner<3, 3>().setIdentity();
  m.bottomLeftCorner<3, 3>() = -1e-6 * Mat3::Identity();
  Mat63 n = Mat63::Zero();
  n.bottomRows<3>().setIdentity();
  VectorField field;
  field.f = [m, n](double, const Vec6& x, const Vec3& u) -> Vec6 { return m * x + n * u; };
  field.dfdx = [m](double, const Vec6&, const Vec3&) { return m; };
  field.dfdu = [n](double, const Vec6&, const Vec3&) { return n; };
  Vec6 x;
  x << 7000.0, 10.0, -3.0, 0.1, 7.5, 0.2;
  const Vec9 xi = nli_weights(flow_sensitivities(field, 0.0, x, Vec3(1e-6, 0, 0), 60.0, true));
  const double nli = xi.cwiseAbs().maxCoeff();

  return {worst_stm < kStmTol && worst_grad < kGradTol && nli < kNliTol,
          format("STM vs finite differences %.3g (tol %.0e); smd gradient %.3g (tol %.0e); "
                 "linear-system NLI %.3g (tol %.0e)",
                 worst_stm, kStmTol, worst_grad, kGradTol, nli, kNliTol)};
}

Outcome projection() {
  constexpr double kTol = 1e-6;
  std::mt19937_64 rng(404);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> radius(0.5, 5.0);
  std::uniform_real_distribution<double> far(1.05, 4.0);
  std::uniform_real_distribution<double> near_exp(-6.0, -2.0);
  double worst = 0.0;
  int failures = 0;
  for (int i = 0; i < 100; ++i) {
    const Mat3 P = random_spd(rng, 1e-4, 1.0);
    const double dbar2 = radius(rng);
    const Eigen::SelfAdjointEigenSolver<Mat3> es(P);
    const Vec3 sqrt_l = es.eigenvalues().cwiseSqrt();
    Vec3 dir(normal(rng), normal(rng), normal(rng));
    dir.normalize();
    const double scale = i % 2 == 0 ? 1.0 + std::pow(10.0, near_exp(rng)) : far(rng);
    const Vec3 r_hat = std::sqrt(dbar2) * scale * dir;
    const Vec3 r = es.eigenvectors() * sqrt_l.cwiseProduct(r_hat);

    conic::ConicProblem p;
    const int t = p.add_variable(0.0, conic::kInf, 1.0);
    const int z = p.add_variables(3);
    const int d = p.add_variables(3);
    const int h = p.add_variable(std::sqrt(dbar2), std::sqrt(dbar2));
    for (int k = 0; k < 3; ++k) p.add_equality({d + k, z + k}, {1.0, -1.0}, -r_hat[k]);
    p.add_cone({t, d, d + 1, d + 2});
    p.add_cone({h, z, z + 1, z + 2});
    const conic::ConicSolution sol = conic::solve(p);
    if (sol.status != conic::SolveStatus::kOptimal) {
      ++failures;
      continue;
    }
    const Vec3 z_hat = sol.x.segment<3>(z);
    const Vec3 oracle = es.eigenvectors() * sqrt_l.cwiseProduct(z_hat);
    const Vec3 closed = project_onto_ellipsoid(r, P, dbar2);
    worst = std::max(worst, (oracle - closed).norm() / closed.norm());
  }
  return {failures == 0 && worst <= kTol,
          format("closed form vs conic solver worst %.3g relative (tol %.0e), %d solver failures",
                 worst, kTol, failures)};
}

Outcome lossless() {
  constexpr double kTol = 1e-6;
  double worst = 0.0;
  int converged = 0;
  for (const Case& c : fixture_matrix()) {
    const Run& r = solve_case(c);
    if (r.plan.status != PlanStatus::kConverged) continue;
    ++converged;
    for (int i = 0; i < r.cfg.N; ++i) {
      const double u = r.plan.slack[i];
      if (u <= 1e-6) continue;
      worst = std::max(worst, std::abs(u - r.plan.controls[i].norm() / r.cfg.u_max));
    }
  }
  return {converged > 0 && worst <= kTol,
          format("worst |u - ||u_vec|||  %.3g (tol %.0e) over %d converged fixtures", worst, kTol,
                 converged)};
}

Outcome leo_reproduction() {
  constexpr double kBand = 0.30;
  constexpr double kRuntime = 60.0;
  constexpr int kMaxMajors = 10;
  struct Ref {
    MetricKind metric;
    const char* label;
    double reference;
  };
  const Ref refs[] = {{MetricKind::kIpc, "leo_base/ipc", 255.0},
                      {MetricKind::kMaxIpc, "leo_base/max_ipc", 322.0},
                      {MetricKind::kMissDistance, "leo_base/miss_distance", 387.0}};
  bool pass = true;
  std::string detail;
  std::vector<double> dv;
  for (const Ref& ref : refs) {
    const Run& r = solve_case({ref.label, "leo_base", ref.metric});
    const bool converged = r.plan.status == PlanStatus::kConverged && r.plan.n_maj <= kMaxMajors;
    const bool in_band = std::abs(r.plan.total_dv - ref.reference) <= kBand * ref.reference;
    const bool fast = r.plan.wall_time < kRuntime;
    pass = pass && converged && in_band && fast;
    dv.push_back(r.plan.total_dv);
    detail += format("%s %.1f mm/s (reference %.0f, band %s), n_maj %d, %.1f s; ", to_string(ref.metric).c_str(),
                     r.plan.total_dv, ref.reference, in_band ? "ok" : "missed", r.plan.n_maj, r.plan.wall_time);
  }
  const bool ordered = dv[0] < dv[1] && dv[1] < dv[2];
  pass = pass && ordered;
  detail += std::string("ordering ipc < max_ipc < miss ") + (ordered ? "held" : "violated");

  auto dominant = [](const ManeuverPlan& plan) {
    int best = 0;
    for (int i = 0; i < plan.N; ++i) {
      if (plan.dv[i] > plan.dv[best]) best = i;
    }
    return plan.dv_rtn[best];
  };
  const Vec3 ipc_dv = dominant(solve_case({"leo_base/ipc", "leo_base", MetricKind::kIpc}).plan);
  const Vec3 miss_dv =
      dominant(solve_case({"leo_base/miss_distance", "leo_base", MetricKind::kMissDistance}).plan);
  const bool ipc_normal = std::abs(ipc_dv[2]) > std::abs(ipc_dv[1]);
  const bool miss_tangential =
      std::abs(miss_dv[1]) > std::abs(miss_dv[0]) && std::abs(miss_dv[1]) > std::abs(miss_dv[2]);
  pass = pass && ipc_normal && miss_tangential;
  detail += format("; ipc dominant burn |N| %.1f vs |T| %.1f mm/s (%s); miss dominant burn RTN "
                   "(%.1f, %.1f, %.1f) mm/s (%s)",
                   std::abs(ipc_dv[2]), std::abs(ipc_dv[1]), ipc_normal ? "out-of-plane" : "not out-of-plane",
                   miss_dv[0], miss_dv[1], miss_dv[2], miss_tangential ? "tangential" : "not tangential");
  return {pass, detail};
}

Outcome validation() {
  constexpr double kErrorLimit = 1.0;  // m
  int checked = 0, invalid = 0;
  double worst_e = 0.0, worst_ratio = 0.0;
  std::string failures;
  for (const Case& c : fixture_matrix()) {
    const Run& r = solve_case(c);
    if (r.plan.status != PlanStatus::kConverged) continue;
    ++checked;
    worst_e = std::max(worst_e, r.validation.max_position_error);
    worst_ratio = std::max(worst_ratio, r.validation.worst_ratio);
    if (!r.validation.valid || r.validation.max_position_error >= kErrorLimit) {
      ++invalid;
      failures += " " + c.label;
    }
  }
  return {checked > 0 && invalid == 0,
          format("%d converged plans re-propagated, %d outside 5%% slack or e >= 1 m%s; worst "
                 "metric ratio %.4f, worst e %.3g m",
                 checked, invalid, failures.c_str(), worst_ratio, worst_e)};
}

Outcome sensitivity_constraint() {
  constexpr double kBoundSlack = 1e-3;
  constexpr double kDeltaSlack = 0.10;
  bool pass = true;
  std::string detail;
  double previous_dv = 0.0;
  bool monotone = true;
  for (double rho : {0.4, 0.3, 0.2, 0.1}) {
    const Run& r = solve_case({format("leo_1orbit/ipc rho %.1f", rho), "leo_1orbit", MetricKind::kIpc, false, rho});
    if (r.plan.status != PlanStatus::kConverged) {
      pass = false;
      detail += format("rho %.1f %s; ", rho, to_string(r.plan.status).c_str());
      continue;
    }
    const RiskMetricSpec metric = r.spec.metric_spec();
    const Trajectory primary = propagate_trajectory(r.scenario.primary, r.plan.controls, r.cfg.dt,
                                                    r.scenario.primary_params, r.scenario.forces,
                                                    true, false, r.scenario.propagation);
    const Trajectory secondary = propagate_trajectory(
        r.scenario.secondary, std::vector<Vec3>(r.cfg.N, Vec3::Zero()), r.cfg.dt,
        r.scenario.secondary_params, r.scenario.forces, true, false, r.scenario.propagation);
    auto stms = [](const Trajectory& t) {
      std::vector<Mat6> a;
      for (const auto& b : t.bundles) a.push_back(b.A);
      return a;
    };
    const auto pc = propagate_covariance(r.scenario.primary_cov, stms(primary));
    const auto sc = propagate_covariance(r.scenario.secondary_cov, stms(secondary));
    const double dr = r.spec.sensitivity->delta_r > 0.0 ? r.spec.sensitivity->delta_r : metric.combined_hbr;
    int nodes = 0;
    double worst_bound = 0.0, worst_delta = -std::numeric_limits<double>::infinity(), worst_linear = 0.0;
    for (int i = 1; i <= r.cfg.N; ++i) {
      if (!(r.plan.gamma[i] > 0.0)) continue;
      ++nodes;
      const RelPosDistribution d =
          combined_relative(primary.nodes[i].position, pc[i], secondary.nodes[i].position, sc[i]);
      worst_bound = std::max(worst_bound, smd_gradient(d).norm() / r.plan.gamma[i]);
            worst_delta = std::max(worst_delta, worst_case_ipc_change(d, metric.combined_hbr, dr) /
                                              (rho * metric.threshold));
      const double linear = 0.5 * ipc(d, metric.combined_hbr) * smd_gradient(d).norm() * dr * 1e-3;
      worst_linear = std::max(worst_linear, linear / (rho * metric.threshold));
    }
    const bool ok = nodes > 0 && worst_bound <= 1.0 + kBoundSlack && worst_delta <= 1.0 + kDeltaSlack;
    pass = pass && ok;
    if (r.plan.total_dv + 1e-6 < previous_dv) monotone = false;
    previous_dv = r.plan.total_dv;
    detail += format("rho %.1f: dv %.2f mm/s, %d constrained nodes, max |grad|/gamma %.4f, "
                     "dP/(rho P) along -grad %.3f (first order %.3f); ",
                     rho, r.plan.total_dv, nodes, worst_bound, worst_delta, worst_linear);
  }
  pass = pass && monotone;
  detail += std::string("dv ") + (monotone ? "non-decreasing" : "decreases") + " as rho decreases";
  return {pass, detail};
}

Outcome geo_station_keeping() {
  constexpr double kBox = 0.05;
  const Run& sk = solve_case({"geo_base/ipc+sk", "geo_base", MetricKind::kIpc, true});
  const Run& cam = solve_case({"geo_base/ipc", "geo_base", MetricKind::kIpc});
  if (sk.plan.status != PlanStatus::kConverged || cam.plan.status != PlanStatus::kConverged) {
    return {false, format("ipc+sk %s, ipc %s", to_string(sk.plan.status).c_str(),
                          to_string(cam.plan.status).c_str())};
  }
  const SkBox& box = sk.spec.box;
  auto worst_offset = [&](const std::vector<Vec2>& track) {
    double w = 0.0;
    for (const Vec2& p : track) {
      w = std::max(w, std::abs(p[0]));
      w = std::max(w, std::abs(wrap_degrees(p[1] - box.center[1])));
    }
    return w;
  };
  std::vector<Vec2> window;
  for (const EpochState& s : sk.validation.states) window.push_back(eci_to_geodetic(s));
  const double window_offset = worst_offset(window);

  const double horizon = sk.spec.sk_horizon_days * constants::kSecondsPerDay;
  const int segments = static_cast<int>(std::lround(sk.spec.sk_horizon_days * sk.spec.sk_nodes_per_day));
  std::vector<Vec2> coast;
  coast_violation(sk.validation.states.back(), horizon, segments, box, sk.scenario.primary_params,
                  sk.scenario.forces, &coast);
  const double coast_offset = worst_offset(coast);

  std::vector<Vec2> free_coast;
  coast_violation(cam.validation.states.back(), horizon, segments, box,
                  cam.scenario.primary_params, cam.scenario.forces, &free_coast);
  double drift = 0.0;
  for (const Vec2& p : free_coast) drift = std::max(drift, std::abs(wrap_degrees(p[1] - box.center[1])));

  const bool pass = window_offset <= kBox && coast_offset <= kBox && drift > kBox;
  return {pass, format("with SK: window offset %.4f deg, 14-day coast offset %.4f deg (box %.2f), "
                       "dv %.1f mm/s; without SK: 14-day longitude offset %.4f deg",
                       window_offset, coast_offset, kBox, sk.plan.total_dv, drift)};
}

Outcome convergence_hygiene() {
  constexpr double kVc = 1e-7;
  constexpr int kByMajor = 3;
  int late = 0;
  std::string detail, failures;
  bool tolerances = true;
  for (const Case& c : fixture_matrix()) {
    const Run& r = solve_case(c);
    if (r.cfg.tol_major != 1e-3 || r.cfg.tol_minor != 1e-6) tolerances = false;
    int reached = -1;
    for (const MajorIteration& m : r.plan.trace) {
      if (m.vc_sum <= kVc) {
        reached = m.major;
        break;
      }
    }
    if (reached < 1 || reached > kByMajor) {
      ++late;
      failures += " " + c.label;
    }
    if (r.plan.status == PlanStatus::kConverged) {
      const MajorIteration& last = r.plan.trace.back();
      if (last.control_change > r.cfg.tol_major || last.vc_sum > kVc) tolerances = false;
      if (last.minors < r.cfg.k_max && last.minor_change > r.cfg.tol_minor) tolerances = false;
    }
  }
  return {late == 0 && tolerances,
          format("%zu fixture runs, %d without sum(vc) <= 1e-7 by major %d%s; tolerances "
                 "tol_M 1e-3 and tol_m 1e-6 %s",
                 fixture_matrix().size(), late, kByMajor, failures.c_str(),
                 tolerances ? "honored" : "not honored")};
}

const std::map<int, std::pair<const char*, std::function<Outcome()>>>& criteria() {
  static const std::map<int, std::pair<const char*, std::function<Outcome()>>> c = {
      {1, {"metric oracle", metric_oracle}},
      {2, {"keep-out limit round trips", round_trips}},
      {3, {"sensitivity machinery", sensitivity_machinery}},
      {4, {"ellipsoid projection", projection}},
      {5, {"lossless relaxation", lossless}},
      {6, {"LEO reproduction", leo_reproduction}},
      {7, {"validation step", validation}},
      {8, {"sensitivity constraint", sensitivity_constraint}},
      {9, {"GEO station keeping", geo_station_keeping}},
      {10, {"convergence hygiene", convergence_hygiene}},
  };
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));
  if (selected.empty()) {
    for (const auto& [id, entry] : criteria()) selected.push_back(id);
  }
  int failed = 0;
  for (int id : selected) {
    const auto it = criteria().find(id);
    if (it == criteria().end()) {
      std::fprintf(stderr, "unknown criterion %d\n", id);
      return 2;
    }
    Outcome o;
    try {
      o = it->second.second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("criterion %2d %-28s %s  %s\n", id, it->second.first, o.pass ? "PASS" : "FAIL",
                o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
