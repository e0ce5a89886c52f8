#pragma once

#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

namespace ltcam::conic {

// Sparse LDL^T for quasi-definite matrices. Each pivot has a known sign; a pivot
// that comes out too small or with the wrong sign is replaced by sign * dynamic_delta.
class QuasiDefiniteLdl {
 public:
  QuasiDefiniteLdl(double pivot_threshold = 1e-13, double dynamic_delta = 1e-7)
      : threshold_(pivot_threshold), dynamic_delta_(dynamic_delta) {}

  // K holds the full symmetric matrix; only its pattern is used here.
  void analyze(const Eigen::SparseMatrix<double>& K, const Eigen::VectorXd& signs);
  bool factorize(const Eigen::SparseMatrix<double>& K);
  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;

  int regularized_pivots() const { return regularized_; }
  const Eigen::VectorXd& d() const { return D_; }

 private:
  double threshold_;
  double dynamic_delta_;
  int n_ = 0;
  Eigen::PermutationMatrix<Eigen::Dynamic, Eigen::Dynamic, int> perm_;
  Eigen::VectorXd signs_;
  std::vector<int> etree_, lnz_, lp_, li_;
  std::vector<double> lx_;
  Eigen::VectorXd D_, dinv_;
  int regularized_ = 0;
  bool analyzed_ = false;
};

}  // namespace ltcam::conic
