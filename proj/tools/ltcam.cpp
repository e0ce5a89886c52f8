#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "ltcam/io/report.hpp"
#include "ltcam/io/scenario.hpp"
#include "ltcam/log.hpp"

namespace fs = std::filesystem;
using namespace ltcam;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitViolation = 2;
constexpr int kExitFailure = 3;

struct SolveArgs {
  std::string scenario;
  std::string metric;
  bool sk = false;
  bool return_to_orbit = false;
  double rho = 0.0;
  std::string out = "out";
};

void apply_overrides(ScenarioSpec& spec, const SolveArgs& a) {
  if (!a.metric.empty()) spec.metric = metric_from_string(a.metric);
  if (a.sk) {
    spec.sk_box = true;
    spec.target = TargetMode::kStationKeeping;
  }
  if (a.return_to_orbit) spec.target = TargetMode::kReturn;
  if (a.rho > 0.0) {
    SensitivitySettings s = spec.sensitivity.value_or(SensitivitySettings{});
    s.rho = a.rho;
    spec.sensitivity = s;
  }
}

int cmd_solve(const SolveArgs& a) {
  ScenarioSpec spec = load_scenario(a.scenario);
  apply_overrides(spec, a);
  const ScpConfig cfg = make_config(spec);
  const ScpScenario sc = make_scenario(spec);
  const ManeuverPlan plan = run(sc, cfg);
  fs::create_directories(a.out);
  if (plan.status == PlanStatus::kSolverFailure) {
    std::cerr << "solver failure: " << plan.message;
    write_file(fs::path(a.out) / "trace.txt", plan.message);
    return kExitFailure;
  }
  const ValidationReport v = validate_plan(sc, cfg, plan);
  write_file(fs::path(a.out) / "report.txt", report_text(spec, plan, v));
  write_file(fs::path(a.out) / "nodes.csv", nodes_csv(spec, plan, v));
  write_file(fs::path(a.out) / "plan.json", plan_json(spec, plan, v).dump(2) + "\n");
  write_file(fs::path(a.out) / "scenario_resolved.json", resolved_json(spec).dump(2) + "\n");
  std::cout << spec.name << ": " << to_string(plan.status) << ", "
            << (v.valid ? "VALID" : "INVALID") << ", total dv " << fmt(plan.total_dv)
            << " mm/s, n_maj " << plan.n_maj << ", n_min " << plan.n_min << ", e "
            << fmt(v.max_position_error) << " m, tau " << fmt(plan.wall_time) << " s\n";
  if (plan.status == PlanStatus::kNotConverged) {
    std::cerr << plan.message;
    return kExitViolation;
  }
  return v.valid ? kExitOk : kExitViolation;
}

int cmd_metrics(const std::string& path, const std::string& metric, const std::string& out) {
  ScenarioSpec spec = load_scenario(path);
  if (!metric.empty()) spec.metric = metric_from_string(metric);
  const ScpConfig cfg = make_config(spec);
  const ScpScenario sc = make_scenario(spec);
  const Trajectory p = coast_grid(sc.primary, cfg.N, cfg.dt, sc.primary_params, sc.forces, false);
  const Trajectory s =
      coast_grid(sc.secondary, cfg.N, cfg.dt, sc.secondary_params, sc.forces, false);
  std::vector<Mat6> ap, as;
  for (const auto& b : p.bundles) ap.push_back(b.A);
  for (const auto& b : s.bundles) as.push_back(b.A);
  const auto nodes = node_metrics(cfg.metric, p.nodes, propagate_covariance(sc.primary_cov, ap),
                                  s.nodes, propagate_covariance(sc.secondary_cov, as));
  fs::create_directories(out);
  write_file(fs::path(out) / "metrics.csv", metrics_csv(spec, p.nodes, nodes));
  int worst = 0;
  double min_miss = nodes[0].miss, max_ipc_value = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    min_miss = std::min(min_miss, nodes[i].miss);
    if (nodes[i].ipc > max_ipc_value) {
      max_ipc_value = nodes[i].ipc;
      worst = static_cast<int>(i);
    }
  }
  std::cout << spec.name << ": peak ipc " << fmt(max_ipc_value) << " at node " << worst
            << ", min miss distance " << fmt(min_miss) << " km\n";
  return kExitOk;
}

int cmd_sk_target(const std::string& path, double days, const std::string& out) {
  const ScenarioSpec spec = load_scenario(path);
  const ScpConfig cfg = make_config(spec);
  const ScpScenario sc = make_scenario(spec);
  const Trajectory coast = propagate_trajectory(sc.primary, std::vector<Vec3>(cfg.N, Vec3::Zero()),
                                                cfg.dt, sc.primary_params, sc.forces, false, false);
  const SkTargetResult r = solve_sk_target(return_target(coast), days, spec.box, sc.primary_params,
                                           sc.forces, cfg.sk_options);
  fs::create_directories(out);
  write_file(fs::path(out) / "sk_target.json", sk_target_json(r, spec.box).dump(2) + "\n");
  write_file(fs::path(out) / "sk_coast.csv", sk_coast_csv(r, spec.box));
  std::cout << spec.name << ": box violation " << fmt(r.violation) << " deg after "
            << r.iterations << " iterations\n";
  return r.violation > 1e-6 ? kExitViolation : kExitOk;
}

int cmd_validate(const std::string& path, const std::string& plan_path, const std::string& out) {
  const ScenarioSpec spec = load_scenario(path);
  const ScpConfig cfg = make_config(spec);
  const ScpScenario sc = make_scenario(spec);
  std::ifstream in(plan_path);
  if (!in) throw ScenarioError(plan_path, "", "cannot open file");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ScenarioError(plan_path, "", e.what());
  }
  ManeuverPlan plan;
  plan.N = cfg.N;
  plan.dt = cfg.dt;
  plan.u_max = cfg.u_max;
  plan.status = PlanStatus::kConverged;
  try {
    const auto& controls = j.at("controls");
    if (static_cast<int>(controls.size()) != cfg.N) {
      throw ScenarioError(plan_path, "/controls", "expected " + std::to_string(cfg.N) + " segments");
    }
    for (const auto& c : controls) {
      const auto& u = c.at("u_km_s2");
      plan.controls.emplace_back(u.at(0).get<double>(), u.at(1).get<double>(), u.at(2).get<double>());
      plan.slack.push_back(plan.controls.back().norm() / cfg.u_max);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ScenarioError(plan_path, "/controls", e.what());
  }
  const ValidationReport v = validate_plan(sc, cfg, plan);
  plan.linear_states = v.states;
  for (const Vec3& u : plan.controls) {
    plan.dv.push_back(u.norm() * cfg.dt * 1e6);
    plan.total_dv += plan.dv.back();
  }
  for (int i = 0; i < cfg.N; ++i) {
    plan.dv_rtn.push_back(rtn_to_eci(v.states[i]).transpose() * plan.controls[i] * cfg.dt * 1e6);
  }
  fs::create_directories(out);
  write_file(fs::path(out) / "validation.csv", nodes_csv(spec, plan, v));
  std::cout << spec.name << ": " << (v.valid ? "VALID" : "INVALID") << ", worst node "
            << v.worst_node << ", ratio " << fmt(v.worst_ratio) << ", total dv "
            << fmt(plan.total_dv) << " mm/s\n";
  return v.valid ? kExitOk : kExitViolation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Long-term conjunction collision-avoidance maneuver planner"};
  app.require_subcommand(1);

  SolveArgs solve;
  auto* s = app.add_subcommand("solve", "optimize a maneuver for a scenario");
  s->add_option("scenario", solve.scenario, "scenario file")->required()->check(CLI::ExistingFile);
  s->add_option("--metric", solve.metric, "ipc, max_ipc or miss_distance")
      ->check(CLI::IsMember({"ipc", "max_ipc", "miss_distance"}));
  auto* sk_flag = s->add_flag("--sk", solve.sk, "station-keeping box and 14-day targeting");
  auto* return_flag =
      s->add_flag("--return", solve.return_to_orbit, "return to the ballistic orbit at the window end");
  sk_flag->excludes(return_flag);
  s->add_option("--sensitivity", solve.rho, "gradient constraint with this rho")
      ->check(CLI::Range(0.0, 1.0));
  s->add_option("--out", solve.out, "output directory");

  std::string m_path, m_metric, m_out = "out";
  auto* m = app.add_subcommand("metrics", "ballistic metric history");
  m->add_option("scenario", m_path, "scenario file")->required()->check(CLI::ExistingFile);
  m->add_option("--metric", m_metric, "metric of record")
      ->check(CLI::IsMember({"ipc", "max_ipc", "miss_distance"}));
  m->add_option("--out", m_out, "output directory");

  std::string k_path, k_out = "out";
  double days = 14.0;
  auto* k = app.add_subcommand("sk-target", "station-keeping coast targeting");
  k->add_option("scenario", k_path, "scenario file")->required()->check(CLI::ExistingFile);
  k->add_option("--days", days, "coast horizon in days")->check(CLI::PositiveNumber);
  k->add_option("--out", k_out, "output directory");

  std::string v_path, v_plan, v_out = "out";
  auto* v = app.add_subcommand("validate", "re-propagate a saved plan");
  v->add_option("scenario", v_path, "scenario file")->required()->check(CLI::ExistingFile);
  v->add_option("--plan", v_plan, "plan.json from solve")->required()->check(CLI::ExistingFile);
  v->add_option("--out", v_out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*s) return cmd_solve(solve);
    if (*m) return cmd_metrics(m_path, m_metric, m_out);
    if (*k) return cmd_sk_target(k_path, days, k_out);
    if (*v) return cmd_validate(v_path, v_plan, v_out);
  } catch (const ScenarioError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}
