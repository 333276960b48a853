#ifndef TFA_QP_HPP
#define TFA_QP_HPP

#include <vector>

#include "tfa/types.hpp"

namespace tfa {

// Dense strictly convex quadratic program
//   min 1/2 x' H x + g' x
//   s.t. A x <= b,  A_eq x = b_eq.
struct QpProblem {
  Eigen::MatrixXd H;
  Eigen::VectorXd g;
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  Eigen::MatrixXd A_eq;
  Eigen::VectorXd b_eq;

  int n() const { return static_cast<int>(H.rows()); }
  int m() const { return static_cast<int>(A.rows()); }
  int p() const { return static_cast<int>(A_eq.rows()); }
};

enum class QpStatus { Optimal, IterationLimit, Infeasible };

struct QpResult {
  QpStatus status = QpStatus::IterationLimit;
  Eigen::VectorXd x;
  Eigen::VectorXd lambda;     // inequality multipliers, >= 0 at optimum
  Eigen::VectorXd lambda_eq;  // equality multipliers
  std::vector<int> active_set;
  int iterations = 0;

  // KKT residuals at the returned point.
  double stationarity = 0.0;
  double primal_feasibility = 0.0;
  double dual_feasibility = 0.0;
  double complementarity = 0.0;

  // Populated when status == Infeasible: worst violated constraint at x0.
  int infeasible_row = -1;
  double infeasible_by = 0.0;

  double objective(const QpProblem& p) const {
    return 0.5 * x.dot(p.H * x) + p.g.dot(x);
  }
};

// Primal active-set method. `x0` must satisfy all constraints (up to a small
// tolerance); an infeasible start is reported, not repaired.
QpResult solve_qp(const QpProblem& prob, const Eigen::VectorXd& x0, int max_iterations = 200);

}  // namespace tfa

#endif
