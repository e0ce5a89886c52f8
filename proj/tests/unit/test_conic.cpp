#include "doctest.h"

#include <algorithm>
#include <numeric>
#include <random>
#include <sstream>

#include <Eigen/Dense>

#include "ltcam/conic/dump.hpp"
#include "ltcam/conic/ldl.hpp"
#include "ltcam/conic/scaling.hpp"
#include "ltcam/conic/solver.hpp"

using namespace ltcam;
using namespace ltcam::conic;

namespace {

struct Certified {
  ConicProblem problem;
  Eigen::VectorXd x;
  double objective = 0.0;
};

// Random SOCP with a known optimum: a primal point and a complementary dual
// certificate are drawn first, then c = A^T y - G^T lambda + s.
Certified random_socp(std::mt19937_64& rng, int n_target) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> pos(0.2, 2.0);
  std::uniform_int_distribution<int> pick(0, 2);
  Certified out;
  ConicProblem& p = out.problem;
  std::vector<double> x, s;

  while (static_cast<int>(x.size()) < n_target) {
    const int kind = pick(rng);
    if (kind == 0) {
      const int size = 2 + static_cast<int>(rng() % 4);
      const int first = p.add_variables(size);
      std::vector<int> idx(size);
      std::iota(idx.begin(), idx.end(), first);
      p.add_cone(idx);
      Eigen::VectorXd body(size - 1);
      for (int k = 0; k < size - 1; ++k) body[k] = u(rng);
      const int state = pick(rng);
      if (state == 0) {
        const double alpha = pos(rng);
        x.push_back(body.norm());
        s.push_back(alpha * body.norm());
        for (int k = 0; k < size - 1; ++k) {
          x.push_back(body[k]);
          s.push_back(-alpha * body[k]);
        }
      } else if (state == 1) {
        x.push_back(body.norm() + pos(rng));
        s.push_back(0.0);
        for (int k = 0; k < size - 1; ++k) {
          x.push_back(body[k]);
          s.push_back(0.0);
        }
      } else {
        x.push_back(0.0);
        s.push_back(body.norm() + pos(rng));
        for (int k = 0; k < size - 1; ++k) {
          x.push_back(0.0);
          s.push_back(body[k]);
        }
      }
    } else if (kind == 1) {
      p.add_variable(0.0);
      if (pick(rng) == 0) {
        x.push_back(0.0);
        s.push_back(pos(rng));
      } else {
        x.push_back(pos(rng));
        s.push_back(0.0);
      }
    } else {
      p.add_variable();
      x.push_back(u(rng));
      s.push_back(0.0);
    }
  }
  const int n = static_cast<int>(x.size());
  out.x = Eigen::Map<Eigen::VectorXd>(x.data(), n);
  Eigen::VectorXd c = Eigen::Map<Eigen::VectorXd>(s.data(), n);

  const int m_eq = n / 3;
  for (int r = 0; r < m_eq; ++r) {
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::vector<double> val(n);
    for (double& v : val) v = u(rng);
    const Eigen::VectorXd a = Eigen::Map<Eigen::VectorXd>(val.data(), n);
    const double y = u(rng);
    c += y * a;
    p.add_equality(idx, val, a.dot(out.x));
  }
  const int m_in = n / 4;
  for (int r = 0; r < m_in; ++r) {
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::vector<double> val(n);
    for (double& v : val) v = u(rng);
    const Eigen::VectorXd g = Eigen::Map<Eigen::VectorXd>(val.data(), n);
    if (pick(rng) == 0) {
      p.add_inequality(idx, val, g.dot(out.x) + pos(rng));
    } else {
      c -= pos(rng) * g;
      p.add_inequality(idx, val, g.dot(out.x));
    }
  }
  p.cost.assign(c.data(), c.data() + n);
  out.objective = c.dot(out.x);
  return out;
}

ConicProblem toy_lp() {
  // min -x - 2y  s.t.  x + y <= 4, x <= 3, 0 <= y <= 2.5
  ConicProblem p;
  p.add_variables(2);
  p.cost = {-1.0, -2.0};
  p.lower = {-kInf, 0.0};
  p.upper = {kInf, 2.5};
  p.add_inequality({0, 1}, {1.0, 1.0}, 4.0);
  p.add_inequality({0}, {1.0}, 3.0);
  return p;
}

}  // namespace

TEST_CASE("trivial programs") {
  SUBCASE("bound") {
    ConicProblem p;
    p.add_variable(3.0, kInf, 1.0);
    const ConicSolution s = solve(p);
    REQUIRE(s.status == SolveStatus::kOptimal);
    CHECK(s.x[0] == doctest::Approx(3.0).epsilon(1e-8));
  }
  SUBCASE("Euclidean norm") {
    ConicProblem p;
    const int t = p.add_variable(-kInf, kInf, 1.0);
    const int a = p.add_variable();
    const int b = p.add_variable();
    p.add_equality({a}, {1.0}, 3.0);
    p.add_equality({b}, {1.0}, 4.0);
    p.add_cone({t, a, b});
    const ConicSolution s = solve(p);
    REQUIRE(s.status == SolveStatus::kOptimal);
    CHECK(s.objective == doctest::Approx(5.0).epsilon(1e-8));
  }
  SUBCASE("infeasible") {
    ConicProblem p;
    p.add_variable(1.0, kInf, 1.0);
    p.add_inequality({0}, {1.0}, 0.0);
    CHECK(solve(p).status == SolveStatus::kInfeasible);
  }
  SUBCASE("unbounded") {
    ConicProblem p;
    p.add_variable(-kInf, 0.0, 1.0);
    CHECK(solve(p).status == SolveStatus::kUnbounded);
  }
}

TEST_CASE("random SOCPs reach their certified optimum") {
  std::mt19937_64 rng(2024);
  const SolverOptions opt;
  for (int i = 0; i < 40; ++i) {
    const Certified c = random_socp(rng, 10 + static_cast<int>(rng() % 41));
    const ConicSolution s = solve(c.problem, opt);
    INFO("instance " << i);
    REQUIRE(s.status == SolveStatus::kOptimal);
    CHECK(std::abs(s.objective - c.objective) <= 1e-5 * (1.0 + std::abs(c.objective)));
    CHECK(s.primal_residual <= opt.reduced_tol);
    CHECK(s.cone_violation <= opt.reduced_tol);
    CHECK(s.gap <= opt.reduced_tol * (1.0 + std::abs(s.objective)));
  }
}

TEST_CASE("solves are deterministic and ordering independent") {
  std::mt19937_64 rng(99);
  const Certified c = random_socp(rng, 30);
  const ConicSolution a = solve(c.problem);
  const ConicSolution b = solve(c.problem);
  REQUIRE(a.status == SolveStatus::kOptimal);
  CHECK((a.x - b.x).cwiseAbs().maxCoeff() == 0.0);
  CHECK(a.iterations == b.iterations);

  const int n = c.problem.num_variables();
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  ConicProblem q = c.problem;
  for (int j = 0; j < n; ++j) {
    q.cost[perm[j]] = c.problem.cost[j];
    q.lower[perm[j]] = c.problem.lower[j];
    q.upper[perm[j]] = c.problem.upper[j];
  }
  for (auto* rows : {&q.equalities, &q.inequalities}) {
    for (LinearRow& r : *rows) {
      for (int& k : r.indices) k = perm[k];
    }
  }
  for (auto& cone : q.cones) {
    for (int& k : cone) k = perm[k];
  }
  const ConicSolution pq = solve(q);
  REQUIRE(pq.status == SolveStatus::kOptimal);
  CHECK(pq.objective == doctest::Approx(a.objective).epsilon(1e-7));
}

TEST_CASE("presolve scaling") {
  SUBCASE("well-scaled problems are left alone") {
    CHECK(presolve_scale(toy_lp()).map.is_identity());
  }
  SUBCASE("scaled and unscaled solves agree") {
    SolverOptions plain;
    plain.scale = false;
    const ConicSolution a = solve(toy_lp());
    const ConicSolution b = solve(toy_lp(), plain);
    REQUIRE(a.status == SolveStatus::kOptimal);
    REQUIRE(b.status == SolveStatus::kOptimal);
    CHECK((a.x - b.x).cwiseAbs().maxCoeff() < 1e-9);
    CHECK(a.x[0] == doctest::Approx(1.5));
    CHECK(a.x[1] == doctest::Approx(2.5));
  }
  SUBCASE("badly scaled problem") {
    // The toy LP with x measured in units of 1e-8 and rows spanning 1e-8..1e8.
    ConicProblem p;
    p.add_variables(2);
    p.cost = {-1e-8, -2.0};
    p.lower = {-kInf, 0.0};
    p.upper = {kInf, 2.5};
    p.add_inequality({0, 1}, {1e0, 1e8}, 4e8);
    p.add_inequality({0}, {1e-8}, 3.0);
    const ScaledProblem scaled = presolve_scale(p);
    CHECK_FALSE(scaled.map.is_identity());
    const ConicSolution s = solve(p);
    REQUIRE(s.status == SolveStatus::kOptimal);
    CHECK(s.x[0] == doctest::Approx(1.5e8).epsilon(1e-7));
    CHECK(s.x[1] == doctest::Approx(2.5).epsilon(1e-7));
    CHECK((scaled.map.unscale(scaled.map.scale(s.x)) - s.x).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("problem dump round trip") {
  std::mt19937_64 rng(5);
  const Certified c = random_socp(rng, 20);
  std::stringstream buffer;
  dump_problem(c.problem, buffer);
  const ConicProblem back = read_problem(buffer);
  CHECK(back.cost == c.problem.cost);
  CHECK(back.lower == c.problem.lower);
  CHECK(back.upper == c.problem.upper);
  CHECK(back.cones == c.problem.cones);
  CHECK((back.equality_matrix() - c.problem.equality_matrix()).norm() == 0.0);
  CHECK((back.inequality_matrix() - c.problem.inequality_matrix()).norm() == 0.0);
  CHECK(solve(back).objective == solve(c.problem).objective);
}

TEST_CASE("malformed problems are rejected") {
  ConicProblem p;
  p.add_variables(3);
  p.add_cone({0, 1});
  p.add_cone({0, 2});
  CHECK_THROWS_AS(p.validate(), Error);
  ConicProblem q;
  q.add_variable();
  q.add_equality({4}, {1.0}, 0.0);
  CHECK_THROWS_AS(q.validate(), Error);
}

TEST_CASE("quasi-definite factorization") {
  std::mt19937_64 rng(8);
  const int n = 12, m = 7;
  Eigen::MatrixXd h = Eigen::MatrixXd::Random(n, n);
  h = h * h.transpose() + 1e-3 * Eigen::MatrixXd::Identity(n, n);
  const Eigen::MatrixXd a = Eigen::MatrixXd::Random(m, n);
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(n + m, n + m);
  k.topLeftCorner(n, n) = h;
  k.bottomLeftCorner(m, n) = a;
  k.topRightCorner(n, m) = a.transpose();
  k.bottomRightCorner(m, m) = -1e-2 * Eigen::MatrixXd::Identity(m, m);
  Eigen::VectorXd signs = Eigen::VectorXd::Ones(n + m);
  signs.tail(m).setConstant(-1.0);
  const Eigen::VectorXd rhs = Eigen::VectorXd::Random(n + m);

  QuasiDefiniteLdl ldl;
  const Eigen::SparseMatrix<double> ks = k.sparseView();
  ldl.analyze(ks, signs);
  REQUIRE(ldl.factorize(ks));
  CHECK(ldl.regularized_pivots() == 0);
  const Eigen::VectorXd x = ldl.solve(rhs);
  CHECK((k * x - rhs).cwiseAbs().maxCoeff() < 1e-10);

  // A zero pivot gets a small value of the expected sign instead of failing.
  Eigen::MatrixXd singular = Eigen::MatrixXd::Zero(2, 2);
  singular(0, 1) = singular(1, 0) = 1.0;
  QuasiDefiniteLdl reg;
  const Eigen::SparseMatrix<double> ss = singular.sparseView();
  reg.analyze(ss, Eigen::Vector2d(1.0, -1.0));
  REQUIRE(reg.factorize(ss));
  CHECK(reg.regularized_pivots() == 1);
  CHECK(reg.solve(Eigen::Vector2d(1.0, 2.0)).allFinite());
}
