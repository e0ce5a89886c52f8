#include "ltcam/io/scenario.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <Eigen/LU>

namespace ltcam {

using nlohmann::json;

ScenarioError::ScenarioError(const std::string& source, const std::string& where,
                             const std::string& what)
    : Error(source + (where.empty() ? "" : ":" + where) + ": " + what) {}

std::string to_string(CovarianceEpoch e) { return e == CovarianceEpoch::kTca ? "tca" : "start"; }

std::string to_string(TargetMode m) {
  switch (m) {
    case TargetMode::kNone:
      return "none";
    case TargetMode::kReturn:
      return "return";
    case TargetMode::kStationKeeping:
      return "sk";
  }
  return "none";
}

double ScenarioSpec::period() const {
  const double a = primary.elements.a;
  return 2.0 * constants::kPi * std::sqrt(a * a * a / constants::kMuEarth);
}

int ScenarioSpec::segments() const {
  return static_cast<int>(std::lround((orbits_before + orbits_after) * nodes_per_orbit));
}

double ScenarioSpec::dt() const { return period() / nodes_per_orbit; }

int ScenarioSpec::tca_node() const {
  return static_cast<int>(std::lround(orbits_before * nodes_per_orbit));
}

double ScenarioSpec::start_epoch() const { return tca_epoch - tca_node() * dt(); }

RiskMetricSpec ScenarioSpec::metric_spec() const {
  RiskMetricSpec m;
  m.kind = metric;
  m.threshold = metric == MetricKind::kIpc      ? ipc_threshold
                : metric == MetricKind::kMaxIpc ? max_ipc_threshold
                                                : miss_distance;
  m.combined_hbr = primary.params.hard_body_radius + secondary.params.hard_body_radius;
  return m;
}

double parse_epoch(const std::string& text) {
  int y = 0, mo = 0, d = 0, h = 0, mi = 0;
  double s = 0.0;
  char t = 0;
  std::istringstream is(text);
  char c1 = 0, c2 = 0, c3 = 0, c4 = 0;
  if (!(is >> y >> c1 >> mo >> c2 >> d >> t >> h >> c3 >> mi >> c4 >> s) || c1 != '-' ||
      c2 != '-' || (t != 'T' && t != ' ') || c3 != ':' || c4 != ':') {
    throw Error("epoch '" + text + "' is not of the form YYYY-MM-DDTHH:MM:SS");
  }
  is >> std::ws;
  if (!is.eof()) throw Error("epoch '" + text + "' has trailing characters");
  const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month(mo),
                                        std::chrono::day(d)};
  if (!ymd.ok() || h < 0 || h > 23 || mi < 0 || mi > 59 || s < 0.0 || s >= 61.0) {
    throw Error("epoch '" + text + "' is not a valid date-time");
  }
  const std::chrono::year_month_day j2000{std::chrono::year{2000}, std::chrono::January,
                                          std::chrono::day(1)};
  const auto days = (std::chrono::sys_days(ymd) - std::chrono::sys_days(j2000)).count();
  return static_cast<double>(days) * constants::kSecondsPerDay + (h - 12) * 3600.0 + mi * 60.0 + s;
}

namespace {

const std::vector<std::string> kUnitSuffixes = {"_m2_s2", "_mm_s2", "_kg_m3", "_km", "_m2", "_deg",
                                                "_kg", "_days", "_tt", "_m", "_s", "_rad"};

std::string stem(const std::string& key) {
  for (const auto& suffix : kUnitSuffixes) {
    if (key.size() > suffix.size() && key.ends_with(suffix)) {
      return key.substr(0, key.size() - suffix.size());
    }
  }
  return key;
}

/// One JSON object of the schema. Every key read is recorded; `finish`
/// rejects the rest.
class Section {
 public:
  Section(const json& j, std::string pointer, const std::string& source)
      : j_(j), pointer_(std::move(pointer)), source_(source) {
    if (!j_.is_object()) fail(pointer_.empty() ? "/" : pointer_, "expected an object");
  }

  [[noreturn]] void fail(const std::string& where, const std::string& what) const {
    throw ScenarioError(source_, where, what);
  }

  std::string at(const std::string& key) const { return pointer_ + "/" + key; }

  bool has(const std::string& key) {
    seen_.insert(key);
    return j_.contains(key) && !j_.at(key).is_null();
  }

  const json& require(const std::string& key) {
    if (!has(key)) fail(at(key), "required field is missing");
    return j_.at(key);
  }

  double number(const std::string& key, std::optional<double> fallback = std::nullopt) {
    if (!has(key)) {
      if (!fallback) fail(at(key), "required field is missing");
      return *fallback;
    }
    const json& v = j_.at(key);
    if (!v.is_number()) fail(at(key), "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) fail(at(key), "must be finite");
    return x;
  }

  double positive(const std::string& key, std::optional<double> fallback = std::nullopt) {
    const double x = number(key, fallback);
    if (!(x > 0.0)) fail(at(key), "must be positive");
    return x;
  }

  double nonnegative(const std::string& key, std::optional<double> fallback = std::nullopt) {
    const double x = number(key, fallback);
    if (!(x >= 0.0)) fail(at(key), "must be non-negative");
    return x;
  }

  int integer(const std::string& key, std::optional<int> fallback = std::nullopt) {
    if (!has(key)) {
      if (!fallback) fail(at(key), "required field is missing");
      return *fallback;
    }
    const json& v = j_.at(key);
    if (!v.is_number_integer()) fail(at(key), "expected an integer");
    return v.get<int>();
  }

  bool boolean(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_boolean()) fail(at(key), "expected true or false");
    return v.get<bool>();
  }

  std::string string(const std::string& key, std::optional<std::string> fallback = std::nullopt) {
    if (!has(key)) {
      if (!fallback) fail(at(key), "required field is missing");
      return *fallback;
    }
    const json& v = j_.at(key);
    if (!v.is_string()) fail(at(key), "expected a string");
    return v.get<std::string>();
  }

  std::optional<Section> child(const std::string& key) {
    if (!has(key)) return std::nullopt;
    return Section(j_.at(key), at(key), source_);
  }

  Section required_child(const std::string& key) {
    require(key);
    return Section(j_.at(key), at(key), source_);
  }

  void finish() const {
    for (const auto& [key, value] : j_.items()) {
      if (seen_.count(key)) continue;
      for (const auto& known : seen_) {
        if (stem(known) == stem(key)) {
          fail(at(key), "unit suffix mismatch, expected '" + known + "'");
        }
      }
      fail(at(key), "unknown field");
    }
  }

 private:
  const json& j_;
  std::string pointer_;
  const std::string& source_;
  std::set<std::string> seen_;
};

ObjectSpec read_object(Section s) {
  ObjectSpec o;
  o.elements.a = s.positive("a_km");
  o.elements.e = s.nonnegative("e");
  if (o.elements.e >= 1.0) s.fail(s.at("e"), "must be below 1");
  o.elements.i = s.number("i_deg") * constants::kDeg;
  o.elements.argp = s.number("argp_deg") * constants::kDeg;
  o.elements.raan = s.number("raan_deg") * constants::kDeg;
  o.elements.theta = s.number("theta_deg") * constants::kDeg;
  o.params.mass = s.positive("mass_kg");
  o.params.drag_area = s.nonnegative("drag_area_m2", 0.0);
  o.params.drag_coefficient = s.nonnegative("drag_coefficient", 2.2);
  o.params.srp_area = s.nonnegative("srp_area_m2", 0.0);
  o.params.reflectivity = s.nonnegative("reflectivity", 1.0);
  o.params.hard_body_radius = s.nonnegative("hbr_m");
  Section c = s.required_child("covariance_rtn");
  const char* keys[] = {"r_m2", "t_m2", "n_m2", "vr_m2_s2", "vt_m2_s2", "vn_m2_s2"};
  for (int k = 0; k < 6; ++k) o.covariance_rtn[k] = c.nonnegative(keys[k]);
  c.finish();
  s.finish();
  return o;
}

std::pair<int, int> line_column(const std::string& text, std::size_t byte) {
  int line = 1, col = 1;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, std::max(1, col - 1)};
}

}  // namespace

ScenarioSpec parse_scenario(const std::string& text, const std::string& source) {
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) {
    throw ScenarioError(source, "", "scenario is empty");
  }
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_column(text, e.byte);
    std::string what = e.what();
    const auto pos = what.find("syntax error");
    throw ScenarioError(source, std::to_string(line) + ":" + std::to_string(col),
                        pos == std::string::npos ? what : what.substr(pos));
  }

  ScenarioSpec spec;
  Section s(root, "", source);
  spec.name = s.string("name", std::string("scenario"));
  spec.tca_epoch_text = s.string("tca_epoch_tt");
  try {
    spec.tca_epoch = parse_epoch(spec.tca_epoch_text);
  } catch (const Error& e) {
    s.fail("/tca_epoch_tt", e.what());
  }

  if (auto w = s.child("window")) {
    spec.orbits_before = w->nonnegative("orbits_before", spec.orbits_before);
    spec.orbits_after = w->nonnegative("orbits_after", spec.orbits_after);
    spec.nodes_per_orbit = w->integer("nodes_per_orbit", spec.nodes_per_orbit);
    if (spec.nodes_per_orbit < 2) w->fail(w->at("nodes_per_orbit"), "must be at least 2");
    w->finish();
  }
  spec.primary = read_object(s.required_child("primary"));
  spec.secondary = read_object(s.required_child("secondary"));
  if (spec.segments() < 2) s.fail("/window", "window must span at least two segments");
  const double before = spec.orbits_before * spec.nodes_per_orbit;
  if (std::abs(before - std::round(before)) > 1e-9) {
    s.fail("/window/orbits_before", "TCA must fall on a node");
  }

  const std::string cov_epoch = s.string("covariance_epoch", std::string("tca"));
  if (cov_epoch == "tca") {
    spec.covariance_epoch = CovarianceEpoch::kTca;
  } else if (cov_epoch == "start") {
    spec.covariance_epoch = CovarianceEpoch::kStart;
  } else {
    s.fail("/covariance_epoch", "expected 'tca' or 'start'");
  }

  if (auto f = s.child("forces")) {
    spec.forces.zonal_degree = f->integer("zonal_degree", 0);
    spec.forces.drag_enabled = f->boolean("drag", false);
    spec.forces.srp_enabled = f->boolean("srp", false);
    spec.forces.third_body_enabled = f->boolean("third_body", false);
    spec.forces.density_ref = f->positive("density_ref_kg_m3", spec.forces.density_ref);
    spec.forces.density_ref_altitude =
        f->number("density_ref_altitude_km", spec.forces.density_ref_altitude);
    spec.forces.scale_height = f->positive("scale_height_km", spec.forces.scale_height);
    try {
      spec.forces.validate();
    } catch (const Error& e) {
      f->fail(f->at("zonal_degree"), e.what());
    }
    f->finish();
  }

  if (auto m = s.child("metric")) {
    const std::string kind = m->string("kind", std::string("ipc"));
    try {
      spec.metric = metric_from_string(kind);
    } catch (const Error& e) {
      m->fail(m->at("kind"), e.what());
    }
    spec.ipc_threshold = m->positive("ipc_threshold", spec.ipc_threshold);
    spec.max_ipc_threshold = m->positive("max_ipc_threshold", spec.max_ipc_threshold);
    spec.miss_distance = m->positive("miss_distance_km", spec.miss_distance);
    if (spec.ipc_threshold >= 1.0) m->fail(m->at("ipc_threshold"), "must be below 1");
    if (spec.max_ipc_threshold >= 1.0) m->fail(m->at("max_ipc_threshold"), "must be below 1");
    m->finish();
  }

  if (auto c = s.child("control")) {
    spec.u_max = c->positive("u_max_mm_s2", spec.u_max * 1e6) * 1e-6;
    c->finish();
  }

  if (auto p = s.child("scp")) {
    spec.trust_nu_bar = p->positive("trust_nu_bar", spec.trust_nu_bar);
    spec.tol_major = p->positive("tol_major", spec.tol_major);
    spec.tol_minor = p->positive("tol_minor_km", spec.tol_minor);
    spec.j_max = p->integer("j_max", spec.j_max);
    spec.k_max = p->integer("k_max", spec.k_max);
    spec.kappa_vc = p->positive("kappa_vc", spec.kappa_vc);
    spec.kappa_T = p->positive("kappa_target", spec.kappa_T);
    spec.vc_tolerance = p->positive("vc_tolerance", spec.vc_tolerance);
    spec.solver_tol = p->positive("solver_tol", spec.solver_tol);
    spec.solver_max_iter = p->integer("solver_max_iter", spec.solver_max_iter);
    if (spec.j_max < 1) p->fail(p->at("j_max"), "must be at least 1");
    if (spec.k_max < 1) p->fail(p->at("k_max"), "must be at least 1");
    if (spec.solver_max_iter < 1) p->fail(p->at("solver_max_iter"), "must be at least 1");
    p->finish();
  }

  if (auto q = s.child("sensitivity")) {
    SensitivitySettings st;
    st.rho = q->positive("rho");
    if (st.rho > 1.0) q->fail(q->at("rho"), "must be in (0, 1]");
    st.epsilon = q->nonnegative("epsilon", st.epsilon);
    if (st.epsilon > 1.0) q->fail(q->at("epsilon"), "must be in [0, 1]");
    st.delta_r = q->nonnegative("delta_r_m", st.delta_r);
    q->finish();
    spec.sensitivity = st;
  }

  if (auto k = s.child("station_keeping")) {
    spec.sk_box = k->boolean("box", false);
    spec.box.center[0] = k->number("center_lat_deg", 0.0);
    spec.box.center[1] = k->number("center_lon_deg", 0.0);
    spec.box.half_width[0] = k->positive("half_width_lat_deg", 0.05);
    spec.box.half_width[1] = k->positive("half_width_lon_deg", 0.05);
    const std::string target = k->string("target", std::string("none"));
    if (target == "none") {
      spec.target = TargetMode::kNone;
    } else if (target == "return") {
      spec.target = TargetMode::kReturn;
    } else if (target == "sk") {
      spec.target = TargetMode::kStationKeeping;
    } else {
      k->fail(k->at("target"), "expected 'none', 'return' or 'sk'");
    }
    spec.sk_horizon_days = k->positive("horizon_days", spec.sk_horizon_days);
    spec.sk_nodes_per_day = k->integer("nodes_per_day", spec.sk_nodes_per_day);
    if (spec.sk_nodes_per_day < 1) k->fail(k->at("nodes_per_day"), "must be at least 1");
    k->finish();
  }
  s.finish();
  return spec;
}

ScenarioSpec load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError(path, "", "cannot open file");
  std::ostringstream os;
  os << in.rdbuf();
  return parse_scenario(os.str(), path);
}

namespace {

json object_json(const ObjectSpec& o) {
  const double deg = 1.0 / constants::kDeg;
  return json{{"a_km", o.elements.a},
              {"e", o.elements.e},
              {"i_deg", o.elements.i * deg},
              {"argp_deg", o.elements.argp * deg},
              {"raan_deg", o.elements.raan * deg},
              {"theta_deg", o.elements.theta * deg},
              {"mass_kg", o.params.mass},
              {"drag_area_m2", o.params.drag_area},
              {"drag_coefficient", o.params.drag_coefficient},
              {"srp_area_m2", o.params.srp_area},
              {"reflectivity", o.params.reflectivity},
              {"hbr_m", o.params.hard_body_radius},
              {"covariance_rtn",
               {{"r_m2", o.covariance_rtn[0]},
                {"t_m2", o.covariance_rtn[1]},
                {"n_m2", o.covariance_rtn[2]},
                {"vr_m2_s2", o.covariance_rtn[3]},
                {"vt_m2_s2", o.covariance_rtn[4]},
                {"vn_m2_s2", o.covariance_rtn[5]}}}};
}

}  // namespace

json resolved_json(const ScenarioSpec& spec) {
  json j;
  j["name"] = spec.name;
  j["tca_epoch_tt"] = spec.tca_epoch_text;
  j["window"] = {{"orbits_before", spec.orbits_before},
                 {"orbits_after", spec.orbits_after},
                 {"nodes_per_orbit", spec.nodes_per_orbit}};
  j["primary"] = object_json(spec.primary);
  j["secondary"] = object_json(spec.secondary);
  j["covariance_epoch"] = to_string(spec.covariance_epoch);
  j["forces"] = {{"zonal_degree", spec.forces.zonal_degree},
                 {"drag", spec.forces.drag_enabled},
                 {"srp", spec.forces.srp_enabled},
                 {"third_body", spec.forces.third_body_enabled},
                 {"density_ref_kg_m3", spec.forces.density_ref},
                 {"density_ref_altitude_km", spec.forces.density_ref_altitude},
                 {"scale_height_km", spec.forces.scale_height}};
  j["metric"] = {{"kind", to_string(spec.metric)},
                 {"ipc_threshold", spec.ipc_threshold},
                 {"max_ipc_threshold", spec.max_ipc_threshold},
                 {"miss_distance_km", spec.miss_distance}};
  j["control"] = {{"u_max_mm_s2", spec.u_max * 1e6}};
  j["scp"] = {{"trust_nu_bar", spec.trust_nu_bar},   {"tol_major", spec.tol_major},
              {"tol_minor_km", spec.tol_minor},       {"j_max", spec.j_max},
              {"k_max", spec.k_max},                  {"kappa_vc", spec.kappa_vc},
              {"kappa_target", spec.kappa_T},         {"vc_tolerance", spec.vc_tolerance},
              {"solver_tol", spec.solver_tol},        {"solver_max_iter", spec.solver_max_iter}};
  if (spec.sensitivity) {
    j["sensitivity"] = {{"rho", spec.sensitivity->rho},
                        {"epsilon", spec.sensitivity->epsilon},
                        {"delta_r_m", spec.sensitivity->delta_r}};
  } else {
    j["sensitivity"] = nullptr;
  }
  j["station_keeping"] = {{"box", spec.sk_box},
                          {"center_lat_deg", spec.box.center[0]},
                          {"center_lon_deg", spec.box.center[1]},
                          {"half_width_lat_deg", spec.box.half_width[0]},
                          {"half_width_lon_deg", spec.box.half_width[1]},
                          {"target", to_string(spec.target)},
                          {"horizon_days", spec.sk_horizon_days},
                          {"nodes_per_day", spec.sk_nodes_per_day}};
  return j;
}

ScpConfig make_config(const ScenarioSpec& spec) {
  ScpConfig cfg;
  cfg.N = spec.segments();
  cfg.dt = spec.dt();
  cfg.u_max = spec.u_max;
  cfg.metric = spec.metric_spec();
  cfg.sensitivity = spec.sensitivity;
  if (cfg.sensitivity && cfg.sensitivity->delta_r == 0.0) {
    cfg.sensitivity->delta_r = cfg.metric.combined_hbr;
  }
  cfg.trust_nu_bar = spec.trust_nu_bar;
  cfg.tol_major = spec.tol_major;
  cfg.tol_minor = spec.tol_minor;
  cfg.j_max = spec.j_max;
  cfg.k_max = spec.k_max;
  cfg.kappa_vc = spec.kappa_vc;
  cfg.kappa_T = spec.kappa_T;
  cfg.vc_tolerance = spec.vc_tolerance;
  cfg.sk_box = spec.sk_box;
  cfg.box = spec.box;
  cfg.return_to_orbit = spec.target == TargetMode::kReturn;
  cfg.sk_target = spec.target == TargetMode::kStationKeeping;
  cfg.sk_horizon_days = spec.sk_horizon_days;
  cfg.sk_options.nodes_per_day = spec.sk_nodes_per_day;
  cfg.solver.tol = spec.solver_tol;
  cfg.solver.max_iter = spec.solver_max_iter;
  cfg.sk_options.solver = cfg.solver;
  return cfg;
}

ScpScenario make_scenario(const ScenarioSpec& spec, const PropagationOptions& options) {
  ScpScenario sc;
  sc.forces = spec.forces;
  sc.primary_params = spec.primary.params;
  sc.secondary_params = spec.secondary.params;
  sc.propagation = options;

  const auto at_tca = [&](const ObjectSpec& o) {
    return EpochState::from_vector(spec.tca_epoch,
                                   elements_to_state(o.elements, constants::kMuEarth));
  };
  const EpochState p_tca = at_tca(spec.primary);
  const EpochState s_tca = at_tca(spec.secondary);
  const double t0 = spec.start_epoch();
  sc.primary = propagate_to(p_tca, t0, sc.primary_params, sc.forces, options);
  sc.secondary = propagate_to(s_tca, t0, sc.secondary_params, sc.forces, options);

  const auto start_covariance = [&](const ObjectSpec& o, const EpochState& start,
                                    const SpacecraftParams& params) {
    if (spec.covariance_epoch == CovarianceEpoch::kStart || spec.tca_node() == 0) {
      return rtn_diagonal_to_eci(o.covariance_rtn, start);
    }
    const Trajectory coast =
        coast_grid(start, spec.tca_node(), spec.dt(), params, sc.forces, false, options);
    Mat6 phi = Mat6::Identity();
    for (const auto& b : coast.bundles) phi = b.A * phi;
    const Mat6 c_tca = rtn_diagonal_to_eci(o.covariance_rtn, coast.nodes.back()).matrix;
    const Eigen::PartialPivLU<Mat6> lu(phi);
    const Mat6 inv = lu.inverse();
    StateCovariance c0;
    c0.matrix = inv * c_tca * inv.transpose();
    c0.matrix = 0.5 * (c0.matrix + c0.matrix.transpose()).eval();
    return c0;
  };
  sc.primary_cov = start_covariance(spec.primary, sc.primary, sc.primary_params);
  sc.secondary_cov = start_covariance(spec.secondary, sc.secondary, sc.secondary_params);
  return sc;
}

}  // namespace ltcam
