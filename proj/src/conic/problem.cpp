#include "ltcam/conic/problem.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ltcam::conic {

namespace {

Eigen::SparseMatrix<double> rows_to_matrix(const std::vector<LinearRow>& rows, int n) {
  std::vector<Eigen::Triplet<double>> trips;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t k = 0; k < rows[i].indices.size(); ++k) {
      trips.emplace_back(static_cast<int>(i), rows[i].indices[k], rows[i].values[k]);
    }
  }
  Eigen::SparseMatrix<double> m(static_cast<Eigen::Index>(rows.size()), n);
  m.setFromTriplets(trips.begin(), trips.end());
  return m;
}

double row_value(const LinearRow& row, const Eigen::VectorXd& x) {
  double v = 0.0;
  for (std::size_t k = 0; k < row.indices.size(); ++k) v += row.values[k] * x[row.indices[k]];
  return v;
}

void check_row(const LinearRow& row, int n, const char* kind, std::size_t i) {
  if (row.indices.size() != row.values.size()) {
    throw Error(std::string(kind) + " row " + std::to_string(i) + ": index/value length mismatch");
  }
  for (std::size_t k = 0; k < row.indices.size(); ++k) {
    if (row.indices[k] < 0 || row.indices[k] >= n) {
      throw Error(std::string(kind) + " row " + std::to_string(i) + ": variable index " +
                  std::to_string(row.indices[k]) + " out of range");
    }
    if (!std::isfinite(row.values[k])) {
      throw Error(std::string(kind) + " row " + std::to_string(i) + ": non-finite coefficient");
    }
  }
  if (!std::isfinite(row.rhs)) {
    throw Error(std::string(kind) + " row " + std::to_string(i) + ": non-finite right-hand side");
  }
}

}  // namespace

int ConicProblem::add_variables(int count, double lo, double up, double c) {
  const int first = num_variables();
  cost.insert(cost.end(), count, c);
  lower.insert(lower.end(), count, lo);
  upper.insert(upper.end(), count, up);
  return first;
}

int ConicProblem::add_equality(std::vector<int> indices, std::vector<double> values, double rhs) {
  equalities.push_back({std::move(indices), std::move(values), rhs});
  return static_cast<int>(equalities.size()) - 1;
}

int ConicProblem::add_inequality(std::vector<int> indices, std::vector<double> values,
                                 double rhs) {
  inequalities.push_back({std::move(indices), std::move(values), rhs});
  return static_cast<int>(inequalities.size()) - 1;
}

void ConicProblem::add_cone(std::vector<int> indices) { cones.push_back(std::move(indices)); }

void ConicProblem::validate() const {
  const int n = num_variables();
  if (lower.size() != cost.size() || upper.size() != cost.size()) {
    throw Error("conic problem: bound vectors do not match the variable count");
  }
  for (int j = 0; j < n; ++j) {
    if (!std::isfinite(cost[j])) throw Error("conic problem: non-finite cost");
    if (std::isnan(lower[j]) || std::isnan(upper[j]) || lower[j] > upper[j]) {
      throw Error("conic problem: invalid bounds on variable " + std::to_string(j));
    }
  }
  for (std::size_t i = 0; i < equalities.size(); ++i) check_row(equalities[i], n, "equality", i);
  for (std::size_t i = 0; i < inequalities.size(); ++i) {
    check_row(inequalities[i], n, "inequality", i);
  }
  std::vector<char> head(n, 0);
  for (std::size_t c = 0; c < cones.size(); ++c) {
    if (cones[c].empty()) throw Error("conic problem: empty cone " + std::to_string(c));
    for (int idx : cones[c]) {
      if (idx < 0 || idx >= n) {
        throw Error("conic problem: cone " + std::to_string(c) + " references variable " +
                    std::to_string(idx) + " out of range");
      }
    }
    if (head[cones[c][0]]) {
      throw Error("conic problem: variable " + std::to_string(cones[c][0]) +
                  " heads more than one cone");
    }
    head[cones[c][0]] = 1;
  }
}

Eigen::SparseMatrix<double> ConicProblem::equality_matrix() const {
  return rows_to_matrix(equalities, num_variables());
}

Eigen::SparseMatrix<double> ConicProblem::inequality_matrix() const {
  return rows_to_matrix(inequalities, num_variables());
}

double equality_residual(const ConicProblem& p, const Eigen::VectorXd& x) {
  double r = 0.0;
  for (const auto& row : p.equalities) r = std::max(r, std::abs(row_value(row, x) - row.rhs));
  return r;
}

double constraint_violation(const ConicProblem& p, const Eigen::VectorXd& x) {
  double v = 0.0;
  for (const auto& row : p.inequalities) v = std::max(v, row_value(row, x) - row.rhs);
  for (int j = 0; j < p.num_variables(); ++j) {
    v = std::max({v, p.lower[j] - x[j], x[j] - p.upper[j]});
  }
  for (const auto& cone : p.cones) {
    double sq = 0.0;
    for (std::size_t k = 1; k < cone.size(); ++k) sq += x[cone[k]] * x[cone[k]];
    v = std::max(v, std::sqrt(sq) - x[cone[0]]);
  }
  return v;
}

double objective_value(const ConicProblem& p, const Eigen::VectorXd& x) {
  double v = 0.0;
  for (int j = 0; j < p.num_variables(); ++j) v += p.cost[j] * x[j];
  return v;
}

}  // namespace ltcam::conic
