#include "ltcam/conic/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "ltcam/conic/ldl.hpp"
#include "ltcam/conic/scaling.hpp"

namespace ltcam::conic {

namespace {

using Eigen::VectorXd;
using SpMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

constexpr double kStepFraction = 0.99;
constexpr int kRefineSteps = 8;

// min c^T x  s.t.  A x = b,  G x + s = h,  s in R+^l x SOC_1 x ... x SOC_q.
struct StandardForm {
  int n = 0;
  SpMat A, G;
  VectorXd c, b, h;
  int num_linear = 0;
  std::vector<int> soc_offset;
  std::vector<int> soc_size;

  int m() const { return static_cast<int>(h.size()); }
  int p() const { return static_cast<int>(b.size()); }
  int degree() const { return num_linear + static_cast<int>(soc_size.size()); }
};

StandardForm to_standard_form(const ConicProblem& q) {
  StandardForm f;
  f.n = q.num_variables();
  f.c = Eigen::Map<const VectorXd>(q.cost.data(), f.n);

  std::vector<Triplet> ta, tg;
  std::vector<double> b, h;
  for (const auto& row : q.equalities) {
    const int i = static_cast<int>(b.size());
    for (std::size_t k = 0; k < row.indices.size(); ++k) ta.emplace_back(i, row.indices[k], row.values[k]);
    b.push_back(row.rhs);
  }
  for (int j = 0; j < f.n; ++j) {
    if (q.lower[j] == q.upper[j]) {
      ta.emplace_back(static_cast<int>(b.size()), j, 1.0);
      b.push_back(q.lower[j]);
    }
  }
  for (const auto& row : q.inequalities) {
    const int i = static_cast<int>(h.size());
    for (std::size_t k = 0; k < row.indices.size(); ++k) tg.emplace_back(i, row.indices[k], row.values[k]);
    h.push_back(row.rhs);
  }
  for (int j = 0; j < f.n; ++j) {
    if (q.lower[j] == q.upper[j]) continue;
    if (std::isfinite(q.lower[j])) {
      tg.emplace_back(static_cast<int>(h.size()), j, -1.0);
      h.push_back(-q.lower[j]);
    }
    if (std::isfinite(q.upper[j])) {
      tg.emplace_back(static_cast<int>(h.size()), j, 1.0);
      h.push_back(q.upper[j]);
    }
  }
  f.num_linear = static_cast<int>(h.size());
  for (const auto& cone : q.cones) {
    f.soc_offset.push_back(static_cast<int>(h.size()));
    f.soc_size.push_back(static_cast<int>(cone.size()));
    for (int idx : cone) {
      tg.emplace_back(static_cast<int>(h.size()), idx, -1.0);
      h.push_back(0.0);
    }
  }
  f.b = Eigen::Map<VectorXd>(b.data(), static_cast<Eigen::Index>(b.size()));
  f.h = Eigen::Map<VectorXd>(h.data(), static_cast<Eigen::Index>(h.size()));
  f.A.resize(f.p(), f.n);
  f.A.setFromTriplets(ta.begin(), ta.end());
  f.G.resize(f.m(), f.n);
  f.G.setFromTriplets(tg.begin(), tg.end());
  return f;
}

// Nesterov-Todd scaling W with W z = W^-1 s = lambda.
struct Scaling {
  VectorXd lp;                  // W = diag(lp) on the linear cone
  std::vector<double> eta;      // per second-order cone
  std::vector<VectorXd> wbar;   // normalized scaling point, wbar^T J wbar = 1
  std::vector<double> lambda_det;
};

double soc_residual(const double* u, int k) {
  double t = 0.0;
  for (int i = 1; i < k; ++i) t += u[i] * u[i];
  const double n = std::sqrt(t);
  return (u[0] - n) * (u[0] + n);
}

class Cones {
 public:
  explicit Cones(const StandardForm& f) : f_(f) {}

  VectorXd identity() const {
    VectorXd e = VectorXd::Zero(f_.m());
    e.head(f_.num_linear).setOnes();
    for (int off : f_.soc_offset) e[off] = 1.0;
    return e;
  }

  // Smallest alpha with u + alpha e in the cone (negative when u is interior).
  double interior_shift(const VectorXd& u) const {
    double a = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < f_.num_linear; ++i) a = std::max(a, -u[i]);
    for (std::size_t c = 0; c < f_.soc_size.size(); ++c) {
      const int off = f_.soc_offset[c];
      const int k = f_.soc_size[c];
      a = std::max(a, u.segment(off + 1, k - 1).norm() - u[off]);
    }
    return a;
  }

  bool compute_scaling(const VectorXd& s, const VectorXd& z, Scaling& w, VectorXd& lambda) const {
    const int l = f_.num_linear;
    w.lp.resize(l);
    lambda.resize(f_.m());
    for (int i = 0; i < l; ++i) {
      if (!(s[i] > 0.0 && z[i] > 0.0)) return false;
      w.lp[i] = std::sqrt(s[i] / z[i]);
      lambda[i] = std::sqrt(s[i] * z[i]);
    }
    const std::size_t q = f_.soc_size.size();
    w.eta.resize(q);
    w.wbar.resize(q);
    w.lambda_det.resize(q);
    for (std::size_t c = 0; c < q; ++c) {
      const int off = f_.soc_offset[c];
      const int k = f_.soc_size[c];
      const double ss = soc_residual(s.data() + off, k);
      const double zz = soc_residual(z.data() + off, k);
      if (!(ss > 0.0 && zz > 0.0 && s[off] > 0.0 && z[off] > 0.0)) return false;
      const double sn = std::sqrt(ss);
      const double zn = std::sqrt(zz);
      const VectorXd sb = s.segment(off, k) / sn;
      VectorXd zb = z.segment(off, k) / zn;
      const double gamma = std::sqrt(0.5 * (1.0 + sb.dot(zb)));
      zb.tail(k - 1) *= -1.0;
      w.wbar[c] = (sb + zb) / (2.0 * gamma);
      w.eta[c] = std::sqrt(sn / zn);
      w.lambda_det[c] = sn * zn;
      lambda.segment(off, k) = apply_w(w, c, z.segment(off, k));
    }
    return true;
  }

  VectorXd apply_w(const Scaling& w, std::size_t c, const VectorXd& v) const {
    const VectorXd& wb = w.wbar[c];
    const int k = static_cast<int>(wb.size());
    const double dot = wb.tail(k - 1).dot(v.tail(k - 1));
    VectorXd out(k);
    out[0] = wb[0] * v[0] + dot;
    out.tail(k - 1) = v.tail(k - 1) + (v[0] + dot / (1.0 + wb[0])) * wb.tail(k - 1);
    return w.eta[c] * out;
  }

  VectorXd apply_w_inv(const Scaling& w, std::size_t c, const VectorXd& v) const {
    const VectorXd& wb = w.wbar[c];
    const int k = static_cast<int>(wb.size());
    const double dot = wb.tail(k - 1).dot(v.tail(k - 1));
    VectorXd out(k);
    out[0] = wb[0] * v[0] - dot;
    out.tail(k - 1) = v.tail(k - 1) + (-v[0] + dot / (1.0 + wb[0])) * wb.tail(k - 1);
    return out / w.eta[c];
  }

  VectorXd W(const Scaling& w, const VectorXd& v) const {
    VectorXd out(v.size());
    const int l = f_.num_linear;
    out.head(l) = w.lp.cwiseProduct(v.head(l));
    for (std::size_t c = 0; c < f_.soc_size.size(); ++c) {
      const int off = f_.soc_offset[c];
      out.segment(off, f_.soc_size[c]) = apply_w(w, c, v.segment(off, f_.soc_size[c]));
    }
    return out;
  }

  VectorXd W_inv(const Scaling& w, const VectorXd& v) const {
    VectorXd out(v.size());
    const int l = f_.num_linear;
    out.head(l) = v.head(l).cwiseQuotient(w.lp);
    for (std::size_t c = 0; c < f_.soc_size.size(); ++c) {
      const int off = f_.soc_offset[c];
      out.segment(off, f_.soc_size[c]) = apply_w_inv(w, c, v.segment(off, f_.soc_size[c]));
    }
    return out;
  }

  // Dense W^2 block of a second-order cone: eta^2 (2 wbar wbar^T - J).
  Eigen::MatrixXd w_squared(const Scaling& w, std::size_t c) const {
    const VectorXd& wb = w.wbar[c];
    Eigen::MatrixXd m = 2.0 * wb * wb.transpose();
    m(0, 0) -= 1.0;
    for (Eigen::Index i = 1; i < wb.size(); ++i) m(i, i) += 1.0;
    return w.eta[c] * w.eta[c] * m;
  }

  VectorXd jordan_product(const VectorXd& u, const VectorXd& v) const {
    VectorXd out(u.size());
    const int l = f_.num_linear;
    out.head(l) = u.head(l).cwiseProduct(v.head(l));
    for (std::size_t c = 0; c < f_.soc_size.size(); ++c) {
      const int off = f_.soc_offset[c];
      const int k = f_.soc_size[c];
      out[off] = u.segment(off, k).dot(v.segment(off, k));
      out.segment(off + 1, k - 1) = u[off] * v.segment(off + 1, k - 1) + v[off] * u.segment(off + 1, k - 1);
    }
    return out;
  }

  // x with lambda o x = v.
  VectorXd jordan_divide(const Scaling& w, const VectorXd& lambda, const VectorXd& v) const {
    VectorXd out(v.size());
    const int l = f_.num_linear;
    out.head(l) = v.head(l).cwiseQuotient(lambda.head(l));
    for (std::size_t c = 0; c < f_.soc_size.size(); ++c) {
      const int off = f_.soc_offset[c];
      const int k = f_.soc_size[c];
      const double l0 = lambda[off];
      const auto l1 = lambda.segment(off + 1, k - 1);
      const double det = w.lambda_det[c];
      const double x0 = (l0 * v[off] - l1.dot(v.segment(off + 1, k - 1))) / det;
      out[off] = x0;
      out.segment(off + 1, k - 1) = (v.segment(off + 1, k - 1) - x0 * l1) / l0;
    }
    return out;
  }

  // Largest alpha with u + alpha du in the cone, for interior u.
  double max_step(const VectorXd& u, const VectorXd& du) const {
    double alpha = std::numeric_limits<double>::infinity();
    for (int i = 0; i < f_.num_linear; ++i) {
      if (du[i] < 0.0) alpha = std::min(alpha, -u[i] / du[i]);
    }
    for (std::size_t c = 0; c < f_.soc_size.size(); ++c) {
      const int off = f_.soc_offset[c];
      const int k = f_.soc_size[c];
      const double u0 = u[off];
      const double d0 = du[off];
      const auto u1 = u.segment(off + 1, k - 1);
      const auto d1 = du.segment(off + 1, k - 1);
      const double a = d0 * d0 - d1.squaredNorm();
      if (a > 0.0 && d0 > 0.0) continue;
      const double b = u0 * d0 - u1.dot(d1);
      const double u1n = u1.norm();
      const double cc = (u0 - u1n) * (u0 + u1n);
      const double disc = std::max(b * b - a * cc, 0.0);
      const double denom = -b + std::sqrt(disc);
      if (denom > 0.0) alpha = std::min(alpha, cc / denom);
    }
    return alpha;
  }

 private:
  const StandardForm& f_;
};

class KktSystem {
 public:
  KktSystem(const StandardForm& f, double delta) : f_(f), delta_(delta) {
    const int n = f.n, p = f.p(), m = f.m();
    size_ = n + p + m;
    for (int j = 0; j < n; ++j) base_.emplace_back(j, j, delta);
    for (int k = 0; k < f.A.outerSize(); ++k) {
      for (SpMat::InnerIterator it(f.A, k); it; ++it) {
        base_.emplace_back(n + it.row(), it.col(), it.value());
        base_.emplace_back(it.col(), n + it.row(), it.value());
      }
    }
    for (int i = 0; i < p; ++i) base_.emplace_back(n + i, n + i, -delta);
    for (int k = 0; k < f.G.outerSize(); ++k) {
      for (SpMat::InnerIterator it(f.G, k); it; ++it) {
        base_.emplace_back(n + p + it.row(), it.col(), it.value());
        base_.emplace_back(it.col(), n + p + it.row(), it.value());
      }
    }
    reg_ = VectorXd::Zero(size_);
    reg_.head(n).setConstant(delta);
    reg_.tail(p + m).setConstant(-delta);
  }

  bool factor(const Cones& cones, const Scaling& w) {
    std::vector<Triplet> trips = base_;
    const int off0 = f_.n + f_.p();
    for (int i = 0; i < f_.num_linear; ++i) {
      trips.emplace_back(off0 + i, off0 + i, -w.lp[i] * w.lp[i] - delta_);
    }
    for (std::size_t c = 0; c < f_.soc_size.size(); ++c) {
      const Eigen::MatrixXd w2 = cones.w_squared(w, c);
      const int off = off0 + f_.soc_offset[c];
      for (Eigen::Index i = 0; i < w2.rows(); ++i) {
        for (Eigen::Index j = 0; j < w2.cols(); ++j) {
          trips.emplace_back(off + i, off + j, -w2(i, j) - (i == j ? delta_ : 0.0));
        }
      }
    }
    K_.resize(size_, size_);
    K_.setFromTriplets(trips.begin(), trips.end());
    if (!analyzed_) {
      VectorXd signs = VectorXd::Ones(size_);
      signs.tail(size_ - f_.n).setConstant(-1.0);
      ldl_.analyze(K_, signs);
      analyzed_ = true;
    }
    return ldl_.factorize(K_);
  }

  VectorXd solve(const VectorXd& rhs) const {
    VectorXd d = ldl_.solve(rhs);
    const double target = 1e-14 * (1.0 + rhs.lpNorm<Eigen::Infinity>());
    VectorXd e = rhs - (K_ * d - reg_.cwiseProduct(d));
    double err = e.lpNorm<Eigen::Infinity>();
    for (int it = 0; it < kRefineSteps && err > target; ++it) {
      const VectorXd trial = d + ldl_.solve(e);
      const VectorXd trial_e = rhs - (K_ * trial - reg_.cwiseProduct(trial));
      const double trial_err = trial_e.lpNorm<Eigen::Infinity>();
      if (!(trial_err < err)) break;
      d = trial;
      e = trial_e;
      err = trial_err;
    }
    return d;
  }

 private:
  const StandardForm& f_;
  double delta_;
  int size_ = 0;
  std::vector<Triplet> base_;
  VectorXd reg_;
  SpMat K_;
  QuasiDefiniteLdl ldl_;
  bool analyzed_ = false;
};

struct InnerResult {
  SolveStatus status = SolveStatus::kNumerical;
  VectorXd x;
  double dual_residual = 0.0;
  double gap = 0.0;
  int iterations = 0;
};

InnerResult solve_standard(const StandardForm& f, const SolverOptions& opt) {
  const int n = f.n, p = f.p(), m = f.m();
  const Cones cones(f);
  KktSystem kkt(f, opt.regularization);
  InnerResult res;
  res.x = VectorXd::Zero(n);

  // Initial point from two least-squares style solves with W = I.
  Scaling w;
  w.lp = VectorXd::Ones(f.num_linear);
  for (std::size_t c = 0; c < f.soc_size.size(); ++c) {
    VectorXd e = VectorXd::Zero(f.soc_size[c]);
    e[0] = 1.0;
    w.wbar.push_back(e);
    w.eta.push_back(1.0);
  }
  if (!kkt.factor(cones, w)) return res;

  VectorXd rhs(n + p + m);
  rhs << VectorXd::Zero(n), f.b, f.h;
  VectorXd sol = kkt.solve(rhs);
  VectorXd x = sol.head(n);
  VectorXd s = -sol.tail(m);
  rhs << -f.c, VectorXd::Zero(p + m);
  sol = kkt.solve(rhs);
  VectorXd y = sol.segment(n, p);
  VectorXd z = sol.tail(m);
  const VectorXd e = cones.identity();
  if (m > 0) {
    const double as = cones.interior_shift(s);
    if (as >= -1e-8) s += (1.0 + std::max(as, 0.0)) * e;
    const double az = cones.interior_shift(z);
    if (az >= -1e-8) z += (1.0 + std::max(az, 0.0)) * e;
  }
  double tau = 1.0, kappa = 1.0;

  const double nb = f.b.size() ? f.b.lpNorm<Eigen::Infinity>() : 0.0;
  const double nh = f.h.size() ? f.h.lpNorm<Eigen::Infinity>() : 0.0;
  const double nc = f.c.size() ? f.c.lpNorm<Eigen::Infinity>() : 0.0;
  const int degree = f.degree();
  int stalls = 0;
  InnerResult best;
  double best_score = std::numeric_limits<double>::infinity();
  auto breakdown = [&](SolveStatus status) {
    if (best_score <= opt.reduced_tol) {
      best.status = SolveStatus::kOptimal;
      return best;
    }
    res.status = status;
    return res;
  };

  for (int iter = 0; iter <= opt.max_iter; ++iter) {
    res.iterations = iter;
    const VectorXd rx = f.A.transpose() * y + f.G.transpose() * z + f.c * tau;
    const VectorXd ry = f.A * x - f.b * tau;
    const VectorXd rz = f.G * x + s - f.h * tau;
    const double cx = f.c.dot(x);
    const double by = f.b.dot(y);
    const double hz = f.h.dot(z);
    const double rt = kappa + cx + by + hz;

    if (!(x.allFinite() && y.allFinite() && z.allFinite() && s.allFinite() &&
          std::isfinite(tau) && std::isfinite(kappa))) {
      return breakdown(SolveStatus::kNumerical);
    }

    const double pres = std::max(ry.size() ? ry.lpNorm<Eigen::Infinity>() / (1.0 + nb) : 0.0,
                                 rz.size() ? rz.lpNorm<Eigen::Infinity>() / (1.0 + nh) : 0.0) /
                        tau;
    const double dres = (rx.size() ? rx.lpNorm<Eigen::Infinity>() : 0.0) / (1.0 + nc) / tau;
    const double gap = s.dot(z) / (tau * tau);
    const double pobj = cx / tau;
    res.x = x / tau;
    res.dual_residual = dres;
    res.gap = gap;
    const double score = std::max({pres, dres, gap / (1.0 + std::abs(pobj))});
    if (score < best_score) {
      best_score = score;
      best = res;
    }

    if (opt.verbose) {
      std::fprintf(stderr, "%3d  pobj %+.6e  pres %.2e  dres %.2e  gap %.2e  tau %.2e  kap %.2e\n",
                   iter, pobj, pres, dres, gap, tau, kappa);
    }

    if (pres <= opt.tol && dres <= opt.tol && gap <= opt.tol * (1.0 + std::abs(pobj))) {
      res.status = SolveStatus::kOptimal;
      return res;
    }
    if (kappa > tau) {
      if (hz + by < 0.0) {
        const VectorXd g = f.A.transpose() * y + f.G.transpose() * z;
        if ((g.size() ? g.lpNorm<Eigen::Infinity>() : 0.0) / -(hz + by) <= opt.tol) {
          res.status = SolveStatus::kInfeasible;
          return res;
        }
      }
      if (cx < 0.0) {
        const double ax = p ? (f.A * x).lpNorm<Eigen::Infinity>() : 0.0;
        const double gx = m ? (f.G * x + s).lpNorm<Eigen::Infinity>() : 0.0;
        if (std::max(ax, gx) / -cx <= opt.tol) {
          res.status = SolveStatus::kUnbounded;
          return res;
        }
      }
    }
    if (iter == opt.max_iter) break;

    VectorXd lambda;
    if (!cones.compute_scaling(s, z, w, lambda)) {
      if (opt.verbose) std::fprintf(stderr, "scaling failed\n");
      return breakdown(SolveStatus::kNumerical);
    }
    if (!kkt.factor(cones, w)) {
      if (opt.verbose) std::fprintf(stderr, "factorization failed\n");
      return breakdown(SolveStatus::kNumerical);
    }
    const double mu = (s.dot(z) + tau * kappa) / (degree + 1);

    rhs << -f.c, f.b, f.h;
    const VectorXd xi1 = kkt.solve(rhs);
    const double denom_base = f.c.dot(xi1.head(n)) + f.b.dot(xi1.segment(n, p)) +
                              f.h.dot(xi1.tail(m)) - kappa / tau;

    struct Direction {
      VectorXd dx, dy, dz, ds;
      double dtau = 0.0, dkappa = 0.0;
    };
    auto direction = [&](double residual_factor, const VectorXd& ds_target, double dk_target) {
      VectorXd r2(n + p + m);
      r2 << -residual_factor * rx, -residual_factor * ry,
          -residual_factor * rz - cones.W(w, cones.jordan_divide(w, lambda, ds_target));
      const VectorXd xi2 = kkt.solve(r2);
      Direction d;
      const double num = -residual_factor * rt - dk_target / tau - f.c.dot(xi2.head(n)) -
                         f.b.dot(xi2.segment(n, p)) - f.h.dot(xi2.tail(m));
      d.dtau = num / denom_base;
      const VectorXd full = xi2 + d.dtau * xi1;
      d.dx = full.head(n);
      d.dy = full.segment(n, p);
      d.dz = full.tail(m);
      d.ds = cones.W(w, cones.jordan_divide(w, lambda, ds_target) - cones.W(w, d.dz));
      d.dkappa = (dk_target - kappa * d.dtau) / tau;
      return d;
    };
    auto step_length = [&](const Direction& d, VectorXd& ds_scaled, VectorXd& dz_scaled) {
      ds_scaled = cones.W_inv(w, d.ds);
      dz_scaled = cones.W(w, d.dz);
      double a = std::min(cones.max_step(lambda, ds_scaled), cones.max_step(lambda, dz_scaled));
      if (d.dtau < 0.0) a = std::min(a, -tau / d.dtau);
      if (d.dkappa < 0.0) a = std::min(a, -kappa / d.dkappa);
      return a;
    };

    const VectorXd ll = cones.jordan_product(lambda, lambda);
    const Direction aff = direction(1.0, -ll, -kappa * tau);
    VectorXd ds_aff, dz_aff;
    const double alpha_aff = std::min(1.0, step_length(aff, ds_aff, dz_aff));
    const double sigma = std::clamp(std::pow(1.0 - alpha_aff, 3), 0.0, 1.0);

    const VectorXd ds_target = -ll - cones.jordan_product(ds_aff, dz_aff) + sigma * mu * e;
    const double dk_target = -kappa * tau - aff.dtau * aff.dkappa + sigma * mu;
    const Direction comb = direction(1.0 - sigma, ds_target, dk_target);
    VectorXd ds_c, dz_c;
    const double alpha = std::min(1.0, kStepFraction * step_length(comb, ds_c, dz_c));

    if (!std::isfinite(alpha) || !comb.dx.allFinite()) return breakdown(SolveStatus::kNumerical);
    if (!(alpha > 1e-12)) {
      if (++stalls >= 3) return breakdown(SolveStatus::kNumerical);
    } else {
      stalls = 0;
    }
    x += alpha * comb.dx;
    y += alpha * comb.dy;
    z += alpha * comb.dz;
    s += alpha * comb.ds;
    tau += alpha * comb.dtau;
    kappa += alpha * comb.dkappa;
  }
  return breakdown(SolveStatus::kMaxIter);
}

}  // namespace

std::string to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal:
      return "OPTIMAL";
    case SolveStatus::kInfeasible:
      return "INFEASIBLE";
    case SolveStatus::kUnbounded:
      return "UNBOUNDED";
    case SolveStatus::kMaxIter:
      return "MAX_ITER";
    case SolveStatus::kNumerical:
      return "NUMERICAL";
  }
  return "UNKNOWN";
}

ConicSolution solve(const ConicProblem& problem, const SolverOptions& options) {
  problem.validate();
  ConicSolution out;
  InnerResult inner;
  if (options.scale) {
    const ScaledProblem scaled = presolve_scale(problem);
    inner = solve_standard(to_standard_form(scaled.problem), options);
    out.x = scaled.map.unscale(inner.x);
  } else {
    inner = solve_standard(to_standard_form(problem), options);
    out.x = inner.x;
  }
  out.status = inner.status;
  out.iterations = inner.iterations;
  out.dual_residual = inner.dual_residual;
  out.gap = inner.gap;
  out.objective = objective_value(problem, out.x);
  out.primal_residual = equality_residual(problem, out.x);
  out.cone_violation = constraint_violation(problem, out.x);
  return out;
}

}  // namespace ltcam::conic
