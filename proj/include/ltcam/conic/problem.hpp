#pragma once

#include <limits>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "ltcam/types.hpp"

namespace ltcam::conic {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Sparse linear row sum_k values[k] * x[indices[k]] (op) rhs.
struct LinearRow {
  std::vector<int> indices;
  std::vector<double> values;
  double rhs = 0.0;
};

/// minimize c^T x
/// subject to  A_eq x = b_eq
///             A_in x <= b_in
///             lower <= x <= upper
///             x[t] >= || x[k1..kn] ||   for every cone (t, k1, ..., kn)
class ConicProblem {
 public:
  int num_variables() const { return static_cast<int>(cost.size()); }

  /// Appends `count` variables with common bounds and cost; returns the
  /// index of the first.
  int add_variables(int count, double lower = -kInf, double upper = kInf, double c = 0.0);
  int add_variable(double lower = -kInf, double upper = kInf, double c = 0.0) {
    return add_variables(1, lower, upper, c);
  }

  int add_equality(std::vector<int> indices, std::vector<double> values, double rhs);
  int add_inequality(std::vector<int> indices, std::vector<double> values, double rhs);
  /// Second-order cone with head `indices[0]`.
  void add_cone(std::vector<int> indices);

  /// Throws Error when an index is out of range, a row is malformed, a bound
  /// pair is inverted or a variable heads two cones.
  void validate() const;

  Eigen::SparseMatrix<double> equality_matrix() const;
  Eigen::SparseMatrix<double> inequality_matrix() const;

  std::vector<double> cost;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<LinearRow> equalities;
  std::vector<LinearRow> inequalities;
  std::vector<std::vector<int>> cones;
};

/// Largest violation of the equality rows (absolute).
double equality_residual(const ConicProblem& p, const Eigen::VectorXd& x);
/// Largest violation of inequality rows, bounds and cones (absolute, >= 0).
double constraint_violation(const ConicProblem& p, const Eigen::VectorXd& x);
double objective_value(const ConicProblem& p, const Eigen::VectorXd& x);

}  // namespace ltcam::conic
