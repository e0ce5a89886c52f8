#include "ltcam/scp/subproblem.hpp"

#include "ltcam/dynamics/frames.hpp"
#include "ltcam/scp/trust_region.hpp"

namespace ltcam {

using conic::kInf;

void ScpConfig::validate() const {
  if (N < 2) throw Error("scp: at least two segments are required");
  if (!(dt > 0.0)) throw Error("scp: time step must be positive");
  if (!(u_max > 0.0)) throw Error("scp: maximum control must be positive");
  if (!(tol_major > 0.0 && tol_minor > 0.0 && vc_tolerance > 0.0)) {
    throw Error("scp: tolerances must be positive");
  }
  if (!(trust_nu_bar > 0.0)) throw Error("scp: trust region radius must be positive");
  if (j_max < 1 || k_max < 1) throw Error("scp: iteration limits must be positive");
  metric.validate();
  if (sensitivity) {
    if (metric.kind != MetricKind::kIpc) {
      throw Error("scp: the gradient constraint requires the ipc metric");
    }
    if (!(sensitivity->rho > 0.0) || !(sensitivity->epsilon >= 0.0 && sensitivity->epsilon <= 1.0)) {
      throw Error("scp: sensitivity needs rho > 0 and epsilon in [0, 1]");
    }
  }
  if (sk_box) box.validate();
  if (return_to_orbit && sk_target) {
    throw Error("scp: return-to-orbit and station-keeping targets are exclusive");
  }
}

Vec6 state_variable_units() {
  Vec6 s;
  s << 1.0, 1.0, 1.0, 1e-3, 1e-3, 1e-3;
  return s;
}

Subproblem assemble_subproblem(const std::vector<NodeLinearization>& lin, const ScpConfig& cfg,
                               const std::optional<Vec6>& target) {
  const int n = cfg.N;
  if (static_cast<int>(lin.size()) != n + 1) {
    throw Error("assemble_subproblem: expected " + std::to_string(n + 1) + " nodes, got " +
                std::to_string(lin.size()));
  }
  const Vec6 units = state_variable_units();
  const Vec6 inv_units = units.cwiseInverse();
  const double r_scale = lin.front().bundle.x_ref.head<3>().norm();
  const NondimScales scales = NondimScales::from_orbit(r_scale, constants::kMuEarth, cfg.u_max);

  Subproblem out;
  conic::ConicProblem& p = out.problem;
  SubproblemLayout& L = out.layout;
  L.N = n;
  L.x0 = p.add_variables(6 * (n + 1));
  L.u0 = p.add_variables(3 * n);
  L.slack0 = p.add_variables(n, 0.0, 1.0, 1.0);
  L.vdyn0 = p.add_variables(6 * n);
  L.vca0 = p.add_variables(n, 0.0, kInf);
  L.vhead0 = p.add_variables(n, 0.0, kInf, cfg.kappa_vc);
  if (cfg.sk_box) L.vsk0 = p.add_variables(n, 0.0, kInf);

  // Initial state is fixed.
  for (int k = 0; k < 6; ++k) {
    p.lower[L.x(0, k)] = 0.0;
    p.upper[L.x(0, k)] = 0.0;
  }

  for (int i = 0; i < n; ++i) {
    const SensitivityBundle& b = lin[i].bundle;
    const Mat6 a = inv_units.asDiagonal() * b.A * units.asDiagonal();
    const Mat63 bu = inv_units.asDiagonal() * b.B * cfg.u_max;
    const Vec6 c = inv_units.cwiseProduct(b.xbar - lin[i + 1].state.vector()) - bu * lin[i].control;
    for (int r = 0; r < 6; ++r) {
      std::vector<int> idx{L.x(i + 1, r), L.vdyn(i, r)};
      std::vector<double> val{1.0, -1.0};
      for (int k = 0; k < 6; ++k) {
        if (a(r, k) != 0.0) {
          idx.push_back(L.x(i, k));
          val.push_back(-a(r, k));
        }
      }
      for (int k = 0; k < 3; ++k) {
        if (bu(r, k) != 0.0) {
          idx.push_back(L.u(i, k));
          val.push_back(-bu(r, k));
        }
      }
      p.add_equality(std::move(idx), std::move(val), c[r]);
    }
    p.add_cone({L.slack(i), L.u(i, 0), L.u(i, 1), L.u(i, 2)});
  }

  // Trust region: segment i bounds the control of segment i and the state of
  // node i; the final node reuses the last segment's weights.
  Vec9 scale;
  scale << scales.input_scale().head<6>().cwiseQuotient(units), Vec3::Ones();
  for (int i = 0; i <= n; ++i) {
    const Vec9& xi = lin[std::min(i, n - 1)].xi;
    const TrustRegion tr =
        trust_region_rows(xi, Vec6::Zero(), lin[std::min(i, n - 1)].control, cfg.trust_nu_bar, scale);
    if (i >= 1) {
      for (int k = 0; k < 6; ++k) {
        if (!tr.active[k]) continue;
        p.lower[L.x(i, k)] = tr.lower[k];
        p.upper[L.x(i, k)] = tr.upper[k];
      }
    }
    if (i < n) {
      for (int k = 0; k < 3; ++k) {
        if (!tr.active[6 + k]) continue;
        p.lower[L.u(i, k)] = tr.lower[6 + k];
        p.upper[L.u(i, k)] = tr.upper[6 + k];
      }
    }
  }

  for (int i = 1; i <= n; ++i) {
    const NodeLinearization& node = lin[i];
    std::vector<int> cone{L.vhead(i)};
    for (int k = 0; k < 6; ++k) cone.push_back(L.vdyn(i - 1, k));
    cone.push_back(L.vca(i));

    if (node.ca) {
      // normal^T (r_ref + dr - z) + v >= 0 with a unit normal.
      const double nn = node.ca->normal.norm();
      const Vec3 nh = node.ca->normal / nn;
      const double rhs = node.ca->margin(node.r) / nn;
      p.add_inequality({L.x(i, 0), L.x(i, 1), L.x(i, 2), L.vca(i)}, {-nh[0], -nh[1], -nh[2], -1.0},
                       rhs);
    }

    if (cfg.sk_box) {
      if (!node.has_geodetic) throw Error("assemble_subproblem: geodetic map missing at node " + std::to_string(i));
      const Mat26 g = node.G * units.asDiagonal();
      const auto rows = sk_box_rows(g, node.phi, cfg.box);
      for (const SkRow& row : rows) {
        std::vector<int> idx;
        std::vector<double> val;
        for (int k = 0; k < 6; ++k) {
          if (row.g(k) != 0.0) {
            idx.push_back(L.x(i, k));
            val.push_back(row.g(k));
          }
        }
        idx.push_back(L.vsk(i));
        val.push_back(-1.0);
        p.add_inequality(std::move(idx), std::move(val), row.rhs);
      }
      cone.push_back(L.vsk(i));
    }

    if (node.gradient) {
      // g_hat = (2 P^-1 / gamma)(r_ref + dr), ||g_hat|| <= 1 + v.
      SubproblemLayout::GradientVars gv;
      gv.node = i;
      gv.g = p.add_variables(3);
      gv.t = p.add_variable();
      gv.v = p.add_variable(0.0, kInf);
      const Mat3 m = node.gradient->gradient_map / node.gradient->gamma;
      const Vec3 g_ref = m * node.r;
      for (int r = 0; r < 3; ++r) {
        p.add_equality({gv.g + r, L.x(i, 0), L.x(i, 1), L.x(i, 2)},
                       {1.0, -m(r, 0), -m(r, 1), -m(r, 2)}, g_ref[r]);
      }
      p.add_equality({gv.t, gv.v}, {1.0, -1.0}, 1.0);
      p.add_cone({gv.t, gv.g, gv.g + 1, gv.g + 2});
      cone.push_back(gv.v);
      L.gradients.push_back(gv);
    }
    p.add_cone(std::move(cone));
  }

  if (target) {
    L.target_plus = p.add_variables(6, 0.0, kInf, cfg.kappa_T);
    L.target_minus = p.add_variables(6, 0.0, kInf, cfg.kappa_T);
    const Vec6 offset = inv_units.cwiseProduct(*target - lin[n].state.vector());
    for (int k = 0; k < 6; ++k) {
      p.add_equality({L.x(n, k), L.target_plus + k, L.target_minus + k}, {1.0, -1.0, 1.0},
                     offset[k]);
    }
  }
  return out;
}

}  // namespace ltcam
