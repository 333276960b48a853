#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "tfa/qp.hpp"

using namespace tfa;

namespace {

// Dual projected-gradient reference solver: ascends the dual of the QP with
// a trivial lambda >= 0 projection. Independent of the active-set path.
double dual_pg_objective(const QpProblem& p, int iterations) {
  const Eigen::MatrixXd Hinv = p.H.inverse();
  const int m = p.m();
  Eigen::VectorXd lambda = Eigen::VectorXd::Zero(m);
  const Eigen::MatrixXd AHA = p.A * Hinv * p.A.transpose();
  const double L = AHA.norm() + 1e-12;
  const double step = 1.0 / L;
  Eigen::VectorXd x;
  for (int k = 0; k < iterations; ++k) {
    x = -Hinv * (p.g + p.A.transpose() * lambda);
    lambda = (lambda + step * (p.A * x - p.b)).cwiseMax(0.0);
  }
  x = -Hinv * (p.g + p.A.transpose() * lambda);
  // final feasibility polish: tiny violations projected out by clamping the
  // objective at the solver's own point is unnecessary; violations at this
  // iteration count are far below the comparison tolerance
  return 0.5 * x.dot(p.H * x) + p.g.dot(x);
}

QpProblem random_problem(std::mt19937& rng, int m, Eigen::VectorXd& x_feasible) {
  const int n = 8;
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  QpProblem p;
  Eigen::MatrixXd Q(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      Q(i, j) = d(rng);
  p.H = Q.transpose() * Q + 0.5 * Eigen::MatrixXd::Identity(n, n);
  p.g.resize(n);
  for (int i = 0; i < n; ++i)
    p.g(i) = 2.0 * d(rng);

  x_feasible.resize(n);
  for (int i = 0; i < n; ++i)
    x_feasible(i) = 0.3 * d(rng);

  p.A.resize(m, n);
  p.b.resize(m);
  std::uniform_real_distribution<double> slack(0.05, 1.0);
  for (int i = 0; i < m; ++i) {
    Eigen::VectorXd row(n);
    for (int j = 0; j < n; ++j)
      row(j) = d(rng);
    row.normalize();
    p.A.row(i) = row;
    p.b(i) = row.dot(x_feasible) + slack(rng);
  }
  p.A_eq.resize(0, n);
  p.b_eq.resize(0);
  return p;
}

}  // namespace

TEST_CASE("unconstrained minimum is found immediately") {
  QpProblem p;
  p.H = 2.0 * Eigen::MatrixXd::Identity(3, 3);
  p.g = Eigen::Vector3d(-2.0, 4.0, 0.0);
  p.A.resize(0, 3);
  p.b.resize(0);
  p.A_eq.resize(0, 3);
  p.b_eq.resize(0);
  const QpResult r = solve_qp(p, Eigen::Vector3d::Zero());
  CHECK(r.status == QpStatus::Optimal);
  CHECK(r.x(0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.x(1) == doctest::Approx(-2.0).epsilon(1e-12));
  CHECK(r.active_set.empty());
}

TEST_CASE("active bound is detected and certified") {
  QpProblem p;
  p.H = 2.0 * Eigen::MatrixXd::Identity(2, 2);
  p.g = Eigen::Vector2d(-6.0, 0.0);  // unconstrained optimum at (3, 0)
  p.A.resize(1, 2);
  p.A << 1.0, 0.0;  // x0 <= 1
  p.b.resize(1);
  p.b << 1.0;
  p.A_eq.resize(0, 2);
  p.b_eq.resize(0);
  const QpResult r = solve_qp(p, Eigen::Vector2d::Zero());
  CHECK(r.status == QpStatus::Optimal);
  CHECK(r.x(0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.lambda(0) > 0.0);
  CHECK(r.stationarity <= 1e-10);
  CHECK(r.complementarity <= 1e-10);
}

TEST_CASE("equality constraints are honored") {
  QpProblem p;
  p.H = 2.0 * Eigen::MatrixXd::Identity(2, 2);
  p.g = Eigen::Vector2d::Zero();
  p.A.resize(0, 2);
  p.b.resize(0);
  p.A_eq.resize(1, 2);
  p.A_eq << 1.0, 1.0;
  p.b_eq.resize(1);
  p.b_eq << 2.0;
  const QpResult r = solve_qp(p, Eigen::Vector2d(1.0, 1.0));
  CHECK(r.status == QpStatus::Optimal);
  CHECK(r.x(0) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(r.x(1) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("infeasible start is reported, not repaired") {
  QpProblem p;
  p.H = Eigen::MatrixXd::Identity(2, 2);
  p.g = Eigen::Vector2d::Zero();
  p.A.resize(1, 2);
  p.A << 1.0, 0.0;
  p.b.resize(1);
  p.b << -1.0;
  p.A_eq.resize(0, 2);
  p.b_eq.resize(0);
  const QpResult r = solve_qp(p, Eigen::Vector2d::Zero());
  CHECK(r.status == QpStatus::Infeasible);
  CHECK(r.infeasible_row == 0);
  CHECK(r.infeasible_by == doctest::Approx(1.0));
}

TEST_CASE("random problems match the dual projected-gradient oracle") {
  std::mt19937 rng(41);
  std::uniform_int_distribution<int> dm(4, 32);
  for (int it = 0; it < 50; ++it) {
    Eigen::VectorXd x0;
    const QpProblem p = random_problem(rng, dm(rng), x0);
    const QpResult r = solve_qp(p, x0);
    REQUIRE(r.status == QpStatus::Optimal);

    const double ref = dual_pg_objective(p, 60000);
    const double mine = r.objective(p);
    CHECK(mine <= ref + 1e-6 * (1.0 + std::abs(ref)));
    CHECK(std::abs(mine - ref) <= 1e-6 * (1.0 + std::abs(ref)));

    CHECK(r.stationarity <= 1e-8);
    CHECK(r.primal_feasibility <= 1e-8);
    CHECK(r.dual_feasibility <= 1e-8);
    CHECK(r.complementarity <= 1e-8);
  }
}

TEST_CASE("box-constrained optimum matches exhaustive face enumeration") {
  std::mt19937 rng(43);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  const int n = 8;
  for (int it = 0; it < 10; ++it) {
    Eigen::MatrixXd Q(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        Q(i, j) = d(rng);
    QpProblem p;
    p.H = Q.transpose() * Q + 0.3 * Eigen::MatrixXd::Identity(n, n);
    p.g.resize(n);
    for (int i = 0; i < n; ++i)
      p.g(i) = d(rng) * 3.0;
    // box |x_i| <= 0.4 as 16 halfspaces
    const double lim = 0.4;
    p.A.resize(2 * n, n);
    p.A.setZero();
    p.b.resize(2 * n);
    for (int i = 0; i < n; ++i) {
      p.A(2 * i, i) = 1.0;
      p.b(2 * i) = lim;
      p.A(2 * i + 1, i) = -1.0;
      p.b(2 * i + 1) = lim;
    }
    p.A_eq.resize(0, n);
    p.b_eq.resize(0);

    const QpResult r = solve_qp(p, Eigen::VectorXd::Zero(n));
    REQUIRE(r.status == QpStatus::Optimal);

    // enumerate all 3^8 fixings of variables to {lo, free, hi}
    double best = 1e300;
    for (int code = 0; code < 6561; ++code) {
      int c = code;
      std::array<int, 8> fix{};
      for (int i = 0; i < n; ++i) {
        fix[i] = c % 3;  // 0 free, 1 lo, 2 hi
        c /= 3;
      }
      std::vector<int> free_idx;
      Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
      for (int i = 0; i < n; ++i) {
        if (fix[i] == 0) free_idx.push_back(i);
        else x(i) = fix[i] == 1 ? -lim : lim;
      }
      const int k = static_cast<int>(free_idx.size());
      if (k > 0) {
        Eigen::MatrixXd Hff(k, k);
        Eigen::VectorXd gf(k);
        for (int a = 0; a < k; ++a) {
          gf(a) = p.g(free_idx[a]);
          for (int b = 0; b < k; ++b)
            Hff(a, b) = p.H(free_idx[a], free_idx[b]);
          for (int i = 0; i < n; ++i)
            if (fix[i] != 0)
              gf(a) += p.H(free_idx[a], i) * x(i);
        }
        const Eigen::VectorXd xf = Hff.ldlt().solve(-gf);
        bool ok = true;
        for (int a = 0; a < k; ++a) {
          if (std::abs(xf(a)) > lim + 1e-12)
            ok = false;
          x(free_idx[a]) = xf(a);
        }
        if (!ok)
          continue;
      }
      best = std::min(best, 0.5 * x.dot(p.H * x) + p.g.dot(x));
    }
    CHECK(std::abs(r.objective(p) - best) <= 1e-6 * (1.0 + std::abs(best)));
  }
}
