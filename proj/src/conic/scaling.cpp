#include "ltcam/conic/scaling.hpp"

#include <cmath>
#include <numeric>

namespace ltcam::conic {

namespace {

constexpr double kLow = 0.1;
constexpr double kHigh = 10.0;
constexpr int kPasses = 30;

bool in_range(double v) { return v == 0.0 || (v >= kLow && v <= kHigh); }

int find_root(std::vector<int>& parent, int i) {
  while (parent[i] != i) {
    parent[i] = parent[parent[i]];
    i = parent[i];
  }
  return i;
}

}  // namespace

bool ScalingMap::is_identity() const {
  auto ones = [](const Eigen::VectorXd& v) { return v.size() == 0 || (v.array() == 1.0).all(); };
  return ones(column_scale) && ones(equality_scale) && ones(inequality_scale) && cost_scale == 1.0;
}

ScaledProblem presolve_scale(const ConicProblem& p) {
  const int n = p.num_variables();
  const auto n_eq = static_cast<Eigen::Index>(p.equalities.size());
  const auto n_in = static_cast<Eigen::Index>(p.inequalities.size());

  // Variables tied together by cones must share a column scale.
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  for (const auto& cone : p.cones) {
    const int r0 = find_root(parent, cone[0]);
    for (int idx : cone) parent[find_root(parent, idx)] = r0;
  }
  std::vector<int> group(n);
  for (int j = 0; j < n; ++j) group[j] = find_root(parent, j);

  Eigen::VectorXd d = Eigen::VectorXd::Ones(n);
  Eigen::VectorXd r_eq = Eigen::VectorXd::Ones(n_eq);
  Eigen::VectorXd r_in = Eigen::VectorXd::Ones(n_in);

  for (int pass = 0; pass < kPasses; ++pass) {
    bool changed = false;
    auto scale_rows = [&](const std::vector<LinearRow>& rows, Eigen::VectorXd& r) {
      for (std::size_t i = 0; i < rows.size(); ++i) {
        double norm = 0.0;
        for (std::size_t k = 0; k < rows[i].indices.size(); ++k) {
          norm = std::max(norm, std::abs(rows[i].values[k] * r[i] * d[rows[i].indices[k]]));
        }
        if (!in_range(norm)) {
          r[i] /= std::sqrt(norm);
          changed = true;
        }
      }
    };
    scale_rows(p.equalities, r_eq);
    scale_rows(p.inequalities, r_in);

    Eigen::VectorXd col = Eigen::VectorXd::Zero(n);
    auto accumulate = [&](const std::vector<LinearRow>& rows, const Eigen::VectorXd& r) {
      for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t k = 0; k < rows[i].indices.size(); ++k) {
          const int j = rows[i].indices[k];
          col[j] = std::max(col[j], std::abs(rows[i].values[k] * r[i] * d[j]));
        }
      }
    };
    accumulate(p.equalities, r_eq);
    accumulate(p.inequalities, r_in);
    Eigen::VectorXd group_norm = Eigen::VectorXd::Zero(n);
    for (int j = 0; j < n; ++j) group_norm[group[j]] = std::max(group_norm[group[j]], col[j]);
    for (int j = 0; j < n; ++j) {
      const double norm = group_norm[group[j]];
      if (!in_range(norm)) {
        d[j] /= std::sqrt(norm);
        changed = true;
      }
    }
    if (!changed) break;
  }

  ScaledProblem out;
  ConicProblem& q = out.problem;
  q = p;
  for (int j = 0; j < n; ++j) {
    q.cost[j] = p.cost[j] * d[j];
    q.lower[j] = p.lower[j] / d[j];
    q.upper[j] = p.upper[j] / d[j];
  }
  auto apply = [&](std::vector<LinearRow>& rows, const Eigen::VectorXd& r) {
    for (std::size_t i = 0; i < rows.size(); ++i) {
      for (std::size_t k = 0; k < rows[i].indices.size(); ++k) {
        rows[i].values[k] *= r[i] * d[rows[i].indices[k]];
      }
      rows[i].rhs *= r[i];
    }
  };
  apply(q.equalities, r_eq);
  apply(q.inequalities, r_in);

  double cmax = 0.0;
  for (double c : q.cost) cmax = std::max(cmax, std::abs(c));
  double sigma = 1.0;
  if (!in_range(cmax)) sigma = 1.0 / cmax;
  for (double& c : q.cost) c *= sigma;

  out.map.column_scale = d;
  out.map.equality_scale = r_eq;
  out.map.inequality_scale = r_in;
  out.map.cost_scale = sigma;
  return out;
}

}  // namespace ltcam::conic
