#include "ltcam/sk/station_keeping.hpp"

#include <cmath>
#include <sstream>

#include "ltcam/dynamics/frames.hpp"

namespace ltcam {

namespace {

// Variable units: km for position, m/s for velocity.
Vec6 variable_units() {
  Vec6 s;
  s << 1.0, 1.0, 1.0, 1e-3, 1e-3, 1e-3;
  return s;
}

Vec2 relative_to_center(const Vec2& lat_lon, const SkBox& box) {
  return {lat_lon[0] - box.center[0], wrap_degrees(lat_lon[1] - box.center[1])};
}

}  // namespace

void SkBox::validate() const {
  if (!(half_width.array() > 0.0).all()) throw Error("station-keeping box half-widths must be positive");
}

Vec2 SkBox::excess(const Vec2& lat_lon) const {
  const Vec2 rel = relative_to_center(lat_lon, *this);
  return (rel.cwiseAbs() - half_width).cwiseMax(0.0);
}

std::array<SkRow, 4> sk_box_rows(const Mat26& G, const Vec2& phi_ref, const SkBox& box) {
  const Vec2 rel = relative_to_center(phi_ref, box);
  std::array<SkRow, 4> rows;
  for (int k = 0; k < 2; ++k) {
    rows[k].g = G.row(k);
    rows[k].rhs = box.half_width[k] - rel[k];
    rows[2 + k].g = -G.row(k);
    rows[2 + k].rhs = box.half_width[k] + rel[k];
  }
  return rows;
}

double coast_violation(const EpochState& start, double horizon_s, int segments, const SkBox& box,
                       const SpacecraftParams& params, const ForceModelConfig& forces,
                       std::vector<Vec2>* lat_lon, std::vector<double>* epochs) {
  const Trajectory t = propagate_trajectory(start, std::vector<Vec3>(segments, Vec3::Zero()),
                                            horizon_s / segments, params, forces, false, false);
  double v = 0.0;
  if (lat_lon) lat_lon->clear();
  if (epochs) epochs->clear();
  for (const EpochState& node : t.nodes) {
    const Vec2 g = eci_to_geodetic(node);
    v += box.excess(g).sum();
    if (lat_lon) lat_lon->push_back(g);
    if (epochs) epochs->push_back(node.epoch);
  }
  return v;
}

SkTargetResult solve_sk_target(const EpochState& x_f, double horizon_days, const SkBox& box,
                               const SpacecraftParams& params, const ForceModelConfig& forces,
                               const SkTargetOptions& options) {
  if (!(horizon_days > 0.0)) throw Error("station-keeping horizon must be positive");
  box.validate();
  const int m = std::max(2, static_cast<int>(std::lround(horizon_days * options.nodes_per_day)));
  const double horizon = horizon_days * constants::kSecondsPerDay;
  const double dt = horizon / m;
  const Vec6 units = variable_units();

  SkTargetResult res;
  EpochState current = x_f;
  double current_violation = coast_violation(current, horizon, m, box, params, forces);
  res.violation_history.push_back(current_violation);
  double trust_scale = 1.0;
  std::ostringstream trace;

  for (int it = 1; it <= options.max_iterations; ++it) {
    res.iterations = it;
    if (current_violation == 0.0) break;
    const Trajectory ref = propagate_trajectory(current, std::vector<Vec3>(m, Vec3::Zero()), dt,
                                                params, forces, true, false);

    conic::ConicProblem p;
    const int x0 = p.add_variables(6 * (m + 1));
    const int chi = p.add_variables(4 * (m + 1), 0.0, conic::kInf, 1.0);
    auto xi = [&](int node, int k) { return x0 + 6 * node + k; };
    for (int k = 0; k < 6; ++k) {
      const double w = (k < 3 ? options.position_trust : options.velocity_trust) * trust_scale / units[k];
      p.lower[xi(0, k)] = -w;
      p.upper[xi(0, k)] = w;
    }
    for (int i = 0; i < m; ++i) {
      const Mat6 a = units.cwiseInverse().asDiagonal() * ref.bundles[i].A * units.asDiagonal();
      for (int r = 0; r < 6; ++r) {
        std::vector<int> idx{xi(i + 1, r)};
        std::vector<double> val{1.0};
        for (int c = 0; c < 6; ++c) {
          if (a(r, c) != 0.0) {
            idx.push_back(xi(i, c));
            val.push_back(-a(r, c));
          }
        }
        p.add_equality(std::move(idx), std::move(val), 0.0);
      }
    }
    for (int i = 0; i <= m; ++i) {
      const Mat26 g = geodetic_jacobian(ref.nodes[i]) * units.asDiagonal();
      const auto rows = sk_box_rows(g, eci_to_geodetic(ref.nodes[i]), box);
      for (int r = 0; r < 4; ++r) {
        std::vector<int> idx;
        std::vector<double> val;
        for (int c = 0; c < 6; ++c) {
          if (rows[r].g(c) != 0.0) {
            idx.push_back(xi(i, c));
            val.push_back(rows[r].g(c));
          }
        }
        idx.push_back(chi + 4 * i + r);
        val.push_back(-1.0);
        p.add_inequality(std::move(idx), std::move(val), rows[r].rhs);
      }
    }

    const conic::ConicSolution sol = conic::solve(p, options.solver);
    if (sol.status != conic::SolveStatus::kOptimal) {
      trace << "iteration " << it << ": solver status " << conic::to_string(sol.status) << '\n';
      throw Error("station-keeping targeting failed\n" + trace.str());
    }
    Vec6 step;
    for (int k = 0; k < 6; ++k) step[k] = sol.x[xi(0, k)] * units[k];
    const EpochState candidate = EpochState::from_vector(current.epoch, current.vector() + step);
    const double v = coast_violation(candidate, horizon, m, box, params, forces);
    trace << "iteration " << it << ": linear objective " << sol.objective << ", violation " << v
          << '\n';

    if (v > current_violation) {
      trust_scale *= 0.5;
      res.violation_history.push_back(current_violation);
      if (step.head<3>().norm() * 0.5 < options.step_tolerance) break;
      continue;
    }
    current = candidate;
    current_violation = v;
    res.violation_history.push_back(v);
    if (step.head<3>().norm() < options.step_tolerance) break;
  }

  res.target = current;
  res.violation = coast_violation(current, horizon, m, box, params, forces, &res.lat_lon, &res.epochs);
  return res;
}

EpochState return_target(const Trajectory& ballistic) {
  if (ballistic.nodes.empty()) throw Error("return_target: empty trajectory");
  return ballistic.nodes.back();
}

}  // namespace ltcam
