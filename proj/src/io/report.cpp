#include "ltcam/io/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace ltcam {

using nlohmann::json;

std::string fmt(double x) {
  if (x == 0.0) return "0";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << content;
  if (!out) throw Error("write failed for " + path.string());
}

namespace {

std::string metric_unit(MetricKind kind) { return kind == MetricKind::kMissDistance ? "km" : "1"; }

}  // namespace

std::string nodes_csv(const ScenarioSpec& spec, const ManeuverPlan& plan,
                      const ValidationReport& validation) {
  std::ostringstream os;
  const std::string mu = metric_unit(spec.metric);
  os << "node,t_over_T,epoch_s,x_km,y_km,z_km,vx_km_s,vy_km_s,vz_km_s,ux_km_s2,uy_km_s2,uz_km_s2,"
        "slack_1,dv_mm_s,dv_r_mm_s,dv_t_mm_s,dv_n_mm_s,dm2_1,dm2_limit_1,ipc_1,max_ipc_1,miss_km,"
        "metric_"
     << mu << ",gamma_1_km,grad_norm_1_km\n";
  const double period = spec.period();
  const int n = plan.N;
  for (int i = 0; i <= n; ++i) {
    const EpochState& x = validation.states[i];
    const NodeMetrics& m = validation.nodes[i];
    const bool seg = i < n && !plan.controls.empty();
    const Vec3 u = seg ? plan.controls[i] : Vec3::Zero();
    const Vec3 dv = seg ? plan.dv_rtn[i] : Vec3::Zero();
    os << i << ',' << fmt((x.epoch - spec.tca_epoch) / period) << ',' << fmt(x.epoch);
    for (int k = 0; k < 3; ++k) os << ',' << fmt(x.position[k]);
    for (int k = 0; k < 3; ++k) os << ',' << fmt(x.velocity[k]);
    for (int k = 0; k < 3; ++k) os << ',' << fmt(u[k]);
    os << ',' << fmt(seg ? plan.slack[i] : 0.0) << ',' << fmt(seg ? plan.dv[i] : 0.0);
    for (int k = 0; k < 3; ++k) os << ',' << fmt(dv[k]);
    os << ',' << fmt(m.dm2) << ',' << fmt(m.dbar2) << ',' << fmt(m.ipc) << ',' << fmt(m.max_ipc)
       << ',' << fmt(m.miss) << ',' << fmt(m.metric) << ','
       << fmt(plan.gamma.empty() ? 0.0 : plan.gamma[i]) << ','
       << fmt(plan.gradient_norm.empty() ? 0.0 : plan.gradient_norm[i]) << '\n';
  }
  return os.str();
}

json plan_json(const ScenarioSpec& spec, const ManeuverPlan& plan,
               const ValidationReport& validation) {
  json j;
  j["scenario"] = spec.name;
  j["metric"] = to_string(spec.metric);
  j["threshold"] = spec.metric_spec().threshold;
  j["status"] = to_string(plan.status);
  j["valid"] = validation.valid;
  j["segments"] = plan.N;
  j["dt_s"] = plan.dt;
  j["u_max_mm_s2"] = plan.u_max * 1e6;
  j["total_dv_mm_s"] = plan.total_dv;
  j["n_maj"] = plan.n_maj;
  j["n_min"] = plan.n_min;
  j["max_position_error_m"] = validation.max_position_error;
  j["worst_node"] = validation.worst_node;
  j["worst_ratio"] = validation.worst_ratio;
  json controls = json::array();
  for (int i = 0; i < static_cast<int>(plan.controls.size()); ++i) {
    controls.push_back({{"segment", i},
                        {"u_km_s2", {plan.controls[i][0], plan.controls[i][1], plan.controls[i][2]}},
                        {"slack", plan.slack[i]},
                        {"dv_mm_s", plan.dv[i]},
                        {"dv_rtn_mm_s", {plan.dv_rtn[i][0], plan.dv_rtn[i][1], plan.dv_rtn[i][2]}}});
  }
  j["controls"] = controls;
  if (plan.target) {
    const Vec6& t = *plan.target;
    j["target_state_km_km_s"] = {t[0], t[1], t[2], t[3], t[4], t[5]};
  }
  json trace = json::array();
  for (const auto& m : plan.trace) {
    trace.push_back({{"major", m.major},
                     {"minors", m.minors},
                     {"control_change", m.control_change},
                     {"minor_change_km", m.minor_change},
                     {"vc_sum", m.vc_sum},
                     {"objective", m.objective},
                     {"total_dv_mm_s", m.total_dv},
                     {"gradient_nodes", m.gradient_nodes},
                     {"solver_status", m.solver_status}});
  }
  j["trace"] = trace;
  return j;
}

std::string report_text(const ScenarioSpec& spec, const ManeuverPlan& plan,
                        const ValidationReport& validation) {
  std::ostringstream os;
  const RiskMetricSpec metric = spec.metric_spec();
  os << "scenario        " << spec.name << '\n'
     << "metric          " << to_string(metric.kind) << " threshold " << fmt(metric.threshold)
     << (metric.kind == MetricKind::kMissDistance ? " km" : "") << '\n'
     << "segments        " << plan.N << " (dt " << fmt(plan.dt) << " s, TCA node "
     << spec.tca_node() << ")\n"
     << "u_max           " << fmt(plan.u_max * 1e6) << " mm/s^2\n"
     << "status          " << to_string(plan.status) << '\n'
     << "validation      " << (validation.valid ? "VALID" : "INVALID") << " (worst node "
     << validation.worst_node << ", ratio " << fmt(validation.worst_ratio) << ")\n"
     << "total dv        " << fmt(plan.total_dv) << " mm/s\n\n";

  os << "convergence     n_maj n_min e_m\n"
     << "                " << plan.n_maj << ' ' << plan.n_min << ' '
     << fmt(validation.max_position_error) << "\n\n";

  os << "major minors du_inf vc_sum dv_mm_s status\n";
  for (const auto& m : plan.trace) {
    os << m.major << ' ' << m.minors << ' ' << fmt(m.control_change) << ' ' << fmt(m.vc_sum)
       << ' ' << fmt(m.total_dv) << ' ' << m.solver_status << '\n';
  }

  os << "\nburns (segments with dv > 1e-3 mm/s)\n"
     << "segment t_over_T dv_mm_s dv_r dv_t dv_n\n";
  for (int i = 0; i < static_cast<int>(plan.dv.size()); ++i) {
    if (plan.dv[i] <= 1e-3) continue;
    const double t = (validation.states[i].epoch - spec.tca_epoch) / spec.period();
    os << i << ' ' << fmt(t) << ' ' << fmt(plan.dv[i]) << ' ' << fmt(plan.dv_rtn[i][0]) << ' '
       << fmt(plan.dv_rtn[i][1]) << ' ' << fmt(plan.dv_rtn[i][2]) << '\n';
  }
  if (!plan.message.empty() && plan.status != PlanStatus::kConverged) {
    os << '\n' << plan.message;
  }
  return os.str();
}

std::string metrics_csv(const ScenarioSpec& spec, const std::vector<EpochState>& primary,
                        const std::vector<NodeMetrics>& nodes) {
  std::ostringstream os;
  os << "node,t_over_T,epoch_s,dm2_1,dm2_limit_1,ipc_1,max_ipc_1,miss_km,metric_"
     << metric_unit(spec.metric) << '\n';
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const NodeMetrics& m = nodes[i];
    os << i << ',' << fmt((primary[i].epoch - spec.tca_epoch) / spec.period()) << ','
       << fmt(primary[i].epoch) << ',' << fmt(m.dm2) << ',' << fmt(m.dbar2) << ',' << fmt(m.ipc)
       << ',' << fmt(m.max_ipc) << ',' << fmt(m.miss) << ',' << fmt(m.metric) << '\n';
  }
  return os.str();
}

std::string sk_coast_csv(const SkTargetResult& result, const SkBox& box) {
  std::ostringstream os;
  os << "node,epoch_s,days,lat_deg,lon_deg,lat_excess_deg,lon_excess_deg\n";
  const double t0 = result.epochs.empty() ? 0.0 : result.epochs.front();
  for (std::size_t i = 0; i < result.lat_lon.size(); ++i) {
    const Vec2 ex = box.excess(result.lat_lon[i]);
    os << i << ',' << fmt(result.epochs[i]) << ','
       << fmt((result.epochs[i] - t0) / constants::kSecondsPerDay) << ','
       << fmt(result.lat_lon[i][0]) << ',' << fmt(result.lat_lon[i][1]) << ',' << fmt(ex[0]) << ','
       << fmt(ex[1]) << '\n';
  }
  return os.str();
}

json sk_target_json(const SkTargetResult& result, const SkBox& box) {
  const EpochState& x = result.target;
  json j;
  j["epoch_s"] = x.epoch;
  j["position_km"] = {x.position[0], x.position[1], x.position[2]};
  j["velocity_km_s"] = {x.velocity[0], x.velocity[1], x.velocity[2]};
  j["violation_deg"] = result.violation;
  j["violation_history_deg"] = result.violation_history;
  j["iterations"] = result.iterations;
  j["box"] = {{"center_lat_deg", box.center[0]},
              {"center_lon_deg", box.center[1]},
              {"half_width_lat_deg", box.half_width[0]},
              {"half_width_lon_deg", box.half_width[1]}};
  return j;
}

}  // namespace ltcam
