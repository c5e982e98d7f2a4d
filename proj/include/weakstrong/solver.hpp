#pragma once

#include <Eigen/Dense>

namespace weakstrong::solver {

struct ConstrainedLsqResult {
  Eigen::VectorXd x;
  double residual;       // ||B x - d||^2
  double kkt_residual;   // scaled first-order optimality violation
  int iterations;
};

// Primal active-set solver for
//   minimize ||B x - d||^2  subject to  x >= 0,  a^T x = total,
// with every a_i > 0. Equality-constrained subproblems are solved in the
// null space of a (Householder QR), so heavily weighted rows do not square
// the condition number.
//
// Throws SolverFailure when the iteration budget runs out or the final KKT
// residual exceeds kkt_tolerance; RankDeficient when B has fewer rows than
// columns.
ConstrainedLsqResult nonnegative_sum_constrained_lsq(const Eigen::MatrixXd& b, const Eigen::VectorXd& d,
                                                     const Eigen::VectorXd& a, double total = 1.0,
                                                     int max_iterations = 100000, double kkt_tolerance = 1e-8);

}  // namespace weakstrong::solver
