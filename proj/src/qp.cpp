#include "tfa/qp.hpp"

#include <algorithm>
#include <limits>

namespace tfa {

namespace {

constexpr double kFeasTol = 1e-9;
constexpr double kStepTol = 1e-11;
constexpr double kDualTol = 1e-10;

// Solve the equality-constrained subproblem at x: step p and multipliers for
// the rows of C (active inequalities stacked under the equalities).
//   [H  C'] [p  ]   [-(H x + g)]
//   [C  0 ] [lam] = [ r        ]
void solve_eqp(const Eigen::MatrixXd& H, const Eigen::VectorXd& grad, const Eigen::MatrixXd& C,
               const Eigen::VectorXd& r, Eigen::VectorXd& p, Eigen::VectorXd& lam) {
  const int n = static_cast<int>(H.rows());
  const int k = static_cast<int>(C.rows());
  Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(n + k, n + k);
  kkt.topLeftCorner(n, n) = H;
  if (k > 0) {
    kkt.topRightCorner(n, k) = C.transpose();
    kkt.bottomLeftCorner(k, n) = C;
  }
  Eigen::VectorXd rhs(n + k);
  rhs.head(n) = -grad;
  rhs.tail(k) = r;

  // Complete orthogonal decomposition tolerates a rank-deficient active set.
  Eigen::VectorXd sol = kkt.completeOrthogonalDecomposition().solve(rhs);
  p = sol.head(n);
  lam = sol.tail(k);
}

}  // namespace

QpResult solve_qp(const QpProblem& prob, const Eigen::VectorXd& x0, int max_iterations) {
  const int n = prob.n();
  const int m = prob.m();
  const int p_eq = prob.p();

  QpResult res;
  res.x = x0;
  res.lambda = Eigen::VectorXd::Zero(m);
  res.lambda_eq = Eigen::VectorXd::Zero(p_eq);

  // Scale used for feasibility comparisons.
  auto row_scale = [&](int i) { return std::max(1.0, prob.A.row(i).norm()); };

  // Verify the start point.
  for (int i = 0; i < m; ++i) {
    const double v = prob.A.row(i).dot(x0) - prob.b(i);
    if (v > 1e-7 * row_scale(i)) {
      res.status = QpStatus::Infeasible;
      if (v > res.infeasible_by) {
        res.infeasible_by = v;
        res.infeasible_row = i;
      }
    }
  }
  for (int i = 0; i < p_eq; ++i) {
    const double v = std::abs(prob.A_eq.row(i).dot(x0) - prob.b_eq(i));
    if (v > 1e-6 * std::max(1.0, prob.A_eq.row(i).norm())) {
      res.status = QpStatus::Infeasible;
      if (v > res.infeasible_by) {
        res.infeasible_by = v;
        res.infeasible_row = m + i;
      }
    }
  }
  if (res.status == QpStatus::Infeasible)
    return res;

  std::vector<int> work;  // active inequality rows
  work.reserve(m);
  for (int i = 0; i < m; ++i)
    if (prob.A.row(i).dot(x0) - prob.b(i) > -1e-9 * row_scale(i))
      work.push_back(i);

  Eigen::VectorXd x = x0;

  auto build_active = [&](Eigen::MatrixXd& C, Eigen::VectorXd& r) {
    const int k = p_eq + static_cast<int>(work.size());
    C.resize(k, n);
    r.resize(k);
    for (int i = 0; i < p_eq; ++i) {
      C.row(i) = prob.A_eq.row(i);
      r(i) = prob.b_eq(i) - prob.A_eq.row(i).dot(x);
    }
    for (size_t j = 0; j < work.size(); ++j) {
      C.row(p_eq + static_cast<int>(j)) = prob.A.row(work[j]);
      r(p_eq + static_cast<int>(j)) = prob.b(work[j]) - prob.A.row(work[j]).dot(x);
    }
  };

  Eigen::MatrixXd C;
  Eigen::VectorXd r, step, lam;
  auto objective = [&](const Eigen::VectorXd& v) {
    return 0.5 * v.dot(prob.H * v) + prob.g.dot(v);
  };

  // Stagnation guard: an unblocked full step that fails to improve the
  // objective means the iterates wander in a numerically flat subspace.
  bool stationary = false;

  int it = 0;
  for (; it < max_iterations; ++it) {
    build_active(C, r);
    const Eigen::VectorXd grad = prob.H * x + prob.g;
    solve_eqp(prob.H, grad, C, r, step, lam);

    if (stationary || step.norm() <= kStepTol * std::max(1.0, x.norm())) {
      stationary = false;
      // Stationary on the working set; check inequality multipliers.
      int drop = -1;
      double most_negative = -kDualTol;
      for (size_t j = 0; j < work.size(); ++j) {
        const double l = lam(p_eq + static_cast<int>(j));
        if (l < most_negative) {
          most_negative = l;
          drop = static_cast<int>(j);
        }
      }
      if (drop < 0) {
        res.status = QpStatus::Optimal;
        for (size_t j = 0; j < work.size(); ++j)
          res.lambda(work[j]) = std::max(0.0, lam(p_eq + static_cast<int>(j)));
        res.lambda_eq = lam.head(p_eq);
        break;
      }
      work.erase(work.begin() + drop);
      continue;
    }

    // Line search against inactive constraints.
    double alpha = 1.0;
    int blocking = -1;
    for (int i = 0; i < m; ++i) {
      if (std::find(work.begin(), work.end(), i) != work.end())
        continue;
      const double ap = prob.A.row(i).dot(step);
      if (ap > 1e-14 * row_scale(i)) {
        const double slack = prob.b(i) - prob.A.row(i).dot(x);
        const double a = slack / ap;
        if (a < alpha) {
          alpha = a;
          blocking = i;
        }
      }
    }
    const double before = objective(x);
    x += std::max(alpha, 0.0) * step;
    if (blocking >= 0)
      work.push_back(blocking);
    else if (objective(x) > before - 1e-14 * (1.0 + std::abs(before)))
      stationary = true;
  }

  res.x = x;
  res.iterations = it;
  res.active_set = work;
  if (res.status != QpStatus::Optimal)
    res.status = QpStatus::IterationLimit;

  // KKT residuals at the returned point.
  Eigen::VectorXd stat = prob.H * x + prob.g;
  if (m > 0)
    stat += prob.A.transpose() * res.lambda;
  if (p_eq > 0)
    stat += prob.A_eq.transpose() * res.lambda_eq;
  res.stationarity = stat.lpNorm<Eigen::Infinity>();

  double pviol = 0.0;
  for (int i = 0; i < m; ++i)
    pviol = std::max(pviol, prob.A.row(i).dot(x) - prob.b(i));
  for (int i = 0; i < p_eq; ++i)
    pviol = std::max(pviol, std::abs(prob.A_eq.row(i).dot(x) - prob.b_eq(i)));
  res.primal_feasibility = std::max(0.0, pviol);

  res.dual_feasibility = m > 0 ? std::max(0.0, -res.lambda.minCoeff()) : 0.0;

  double comp = 0.0;
  for (int i = 0; i < m; ++i)
    comp = std::max(comp, std::abs(res.lambda(i) * (prob.A.row(i).dot(x) - prob.b(i))));
  res.complementarity = comp;

  (void)kFeasTol;
  return res;
}

}  // namespace tfa
