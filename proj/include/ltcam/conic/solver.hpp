#pragma once

#include <string>

#include "ltcam/conic/problem.hpp"

namespace ltcam::conic {

enum class SolveStatus { kOptimal, kInfeasible, kUnbounded, kMaxIter, kNumerical };

std::string to_string(SolveStatus status);

struct SolverOptions {
  double tol = 1e-8;
  /// When the iteration breaks down, the best iterate is still reported
  /// optimal if it meets this looser tolerance.
  double reduced_tol = 1e-6;
  int max_iter = 200;
  /// Equilibrate rows and columns before solving (see presolve_scale).
  bool scale = true;
  /// Static regularization of the KKT system.
  double regularization = 1e-9;
  bool verbose = false;
};

struct ConicSolution {
  SolveStatus status = SolveStatus::kNumerical;
  Eigen::VectorXd x;
  double objective = 0.0;
  /// Largest absolute equality residual of the original problem.
  double primal_residual = 0.0;
  /// Largest absolute violation of inequalities, bounds and cones.
  double cone_violation = 0.0;
  /// Relative dual residual ||A^T y + G^T z + c|| / (1 + ||c||).
  double dual_residual = 0.0;
  /// Complementarity s^T z of the final iterate.
  double gap = 0.0;
  int iterations = 0;
};

/// Interior-point solve of a conic problem.
ConicSolution solve(const ConicProblem& problem, const SolverOptions& options = {});

}  // namespace ltcam::conic
