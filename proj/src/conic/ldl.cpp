#include "ltcam/conic/ldl.hpp"

#include <cmath>

#include <Eigen/OrderingMethods>

namespace ltcam::conic {

namespace {

using SpMat = Eigen::SparseMatrix<double>;

SpMat permuted_upper(const SpMat& K, const Eigen::PermutationMatrix<Eigen::Dynamic, Eigen::Dynamic, int>& perm) {
  SpMat full;
  full = K.selfadjointView<Eigen::Upper>().twistedBy(perm);
  SpMat upper = full.triangularView<Eigen::Upper>();
  upper.makeCompressed();
  return upper;
}

}  // namespace

void QuasiDefiniteLdl::analyze(const SpMat& K, const Eigen::VectorXd& signs) {
  n_ = static_cast<int>(K.rows());
  Eigen::AMDOrdering<int> amd;
  Eigen::PermutationMatrix<Eigen::Dynamic, Eigen::Dynamic, int> p;
  amd(K.selfadjointView<Eigen::Upper>(), p);
  perm_ = p.inverse();
  signs_.resize(n_);
  for (int i = 0; i < n_; ++i) signs_[perm_.indices()[i]] = signs[i];

  const SpMat U = permuted_upper(K, perm_);
  etree_.assign(n_, -1);
  lnz_.assign(n_, 0);
  std::vector<int> work(n_, -1);
  for (int j = 0; j < n_; ++j) {
    work[j] = j;
    for (SpMat::InnerIterator it(U, j); it; ++it) {
      int i = static_cast<int>(it.row());
      while (i != -1 && i < j && work[i] != j) {
        if (etree_[i] == -1) etree_[i] = j;
        ++lnz_[i];
        work[i] = j;
        i = etree_[i];
      }
    }
  }
  lp_.assign(n_ + 1, 0);
  for (int i = 0; i < n_; ++i) lp_[i + 1] = lp_[i] + lnz_[i];
  li_.assign(lp_[n_], 0);
  lx_.assign(lp_[n_], 0.0);
  D_.resize(n_);
  dinv_.resize(n_);
  analyzed_ = true;
}

bool QuasiDefiniteLdl::factorize(const SpMat& K) {
  if (!analyzed_) return false;
  const SpMat U = permuted_upper(K, perm_);
  std::vector<char> marked(n_, 0);
  std::vector<int> y_idx(n_), elim(n_), next_space(lp_.begin(), lp_.end() - 1);
  std::vector<double> y(n_, 0.0);
  regularized_ = 0;

  for (int k = 0; k < n_; ++k) {
    D_[k] = 0.0;
    int nnz_y = 0;
    for (SpMat::InnerIterator it(U, k); it; ++it) {
      const int b = static_cast<int>(it.row());
      if (b == k) {
        D_[k] = it.value();
        continue;
      }
      y[b] = it.value();
      if (marked[b]) continue;
      marked[b] = 1;
      int n_elim = 0;
      elim[n_elim++] = b;
      for (int next = etree_[b]; next != -1 && next < k && !marked[next]; next = etree_[next]) {
        marked[next] = 1;
        elim[n_elim++] = next;
      }
      while (n_elim > 0) y_idx[nnz_y++] = elim[--n_elim];
    }
    for (int i = nnz_y - 1; i >= 0; --i) {
      const int c = y_idx[i];
      const int slot = next_space[c];
      const double yc = y[c];
      for (int j = lp_[c]; j < slot; ++j) y[li_[j]] -= lx_[j] * yc;
      li_[slot] = k;
      lx_[slot] = yc * dinv_[c];
      D_[k] -= yc * lx_[slot];
      ++next_space[c];
      y[c] = 0.0;
      marked[c] = 0;
    }
    if (!std::isfinite(D_[k])) return false;
    if (signs_[k] * D_[k] < threshold_) {
      D_[k] = signs_[k] * dynamic_delta_;
      ++regularized_;
    }
    dinv_[k] = 1.0 / D_[k];
  }
  return true;
}

Eigen::VectorXd QuasiDefiniteLdl::solve(const Eigen::VectorXd& rhs) const {
  Eigen::VectorXd x = perm_ * rhs;
  for (int i = 0; i < n_; ++i) {
    for (int j = lp_[i]; j < lp_[i + 1]; ++j) x[li_[j]] -= lx_[j] * x[i];
  }
  x.array() *= dinv_.array();
  for (int i = n_ - 1; i >= 0; --i) {
    for (int j = lp_[i]; j < lp_[i + 1]; ++j) x[i] -= lx_[j] * x[li_[j]];
  }
  return perm_.inverse() * x;
}

}  // namespace ltcam::conic
