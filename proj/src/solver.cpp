#include "weakstrong/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "weakstrong/errors.hpp"

namespace weakstrong::solver {

namespace {

// Solves min ||B_P z - d|| s.t. a_P^T z = total over the passive columns.
Eigen::VectorXd solve_equality_subproblem(const Eigen::MatrixXd& b, const Eigen::VectorXd& d,
                                          const Eigen::VectorXd& a, double total,
                                          const std::vector<Eigen::Index>& passive) {
  const auto m = static_cast<Eigen::Index>(passive.size());
  Eigen::VectorXd out = Eigen::VectorXd::Zero(b.cols());
  Eigen::VectorXd ap(m);
  Eigen::MatrixXd bp(b.rows(), m);
  for (Eigen::Index j = 0; j < m; ++j) {
    ap(j) = a(passive[j]);
    bp.col(j) = b.col(passive[j]);
  }
  const Eigen::VectorXd z0 = ap * (total / ap.squaredNorm());
  Eigen::VectorXd zp = z0;
  if (m > 1) {
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(ap);
    const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(m, m);
    const Eigen::MatrixXd null_basis = q.rightCols(m - 1);
    const Eigen::MatrixXd reduced = bp * null_basis;
    const Eigen::VectorXd target = d - bp * z0;
    const Eigen::VectorXd y = reduced.completeOrthogonalDecomposition().solve(target);
    zp += null_basis * y;
  }
  for (Eigen::Index j = 0; j < m; ++j) out(passive[j]) = zp(j);
  return out;
}

}  // namespace

ConstrainedLsqResult nonnegative_sum_constrained_lsq(const Eigen::MatrixXd& b, const Eigen::VectorXd& d,
                                                     const Eigen::VectorXd& a, double total, int max_iterations,
                                                     double kkt_tolerance) {
  const Eigen::Index n = b.cols();
  if (d.size() != b.rows() || a.size() != n || n == 0) throw SolverFailure("constrained lsq: size mismatch");
  if (b.rows() < n) {
    throw RankDeficient("constrained lsq: " + std::to_string(b.rows()) + " equations for " + std::to_string(n) +
                        " unknowns");
  }
  if ((a.array() <= 0.0).any() || !(total > 0.0)) throw SolverFailure("constrained lsq: a must be positive");

  const double grad_scale = (b.transpose() * d).cwiseAbs().maxCoeff() + b.squaredNorm() * total / a.minCoeff();
  const double stop_tol = 1e-3 * kkt_tolerance * grad_scale;

  Eigen::VectorXd x = Eigen::VectorXd::Constant(n, total / a.sum());
  std::vector<char> in_passive(n, 1);
  std::vector<char> blocked(n, 0);

  auto passive_list = [&] {
    std::vector<Eigen::Index> p;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (in_passive[i]) p.push_back(i);
    }
    return p;
  };

  int iter = 0;
  double kkt = std::numeric_limits<double>::infinity();
  Eigen::Index just_added = -1;
  while (iter++ < max_iterations) {
    const auto passive = passive_list();
    const Eigen::VectorXd z = solve_equality_subproblem(b, d, a, total, passive);

    bool feasible = true;
    for (auto i : passive) feasible &= z(i) > 0.0;
    if (!feasible) {
      if (just_added >= 0 && z(just_added) <= 0.0) {
        // Numerically degenerate entry; take it back out and stop proposing it.
        in_passive[just_added] = 0;
        blocked[just_added] = 1;
        just_added = -1;
        continue;
      }
      double alpha = 1.0;
      for (auto i : passive) {
        if (z(i) <= 0.0) alpha = std::min(alpha, x(i) / (x(i) - z(i)));
      }
      x += alpha * (z - x);
      const double floor = 1e-14 * x.cwiseAbs().maxCoeff();
      for (auto i : passive) {
        if (x(i) <= floor) {
          x(i) = 0.0;
          in_passive[i] = 0;
        }
      }
      just_added = -1;
      continue;
    }
    x = z;
    just_added = -1;

    const Eigen::VectorXd grad = b.transpose() * (b * x - d);
    double nu = 0.0;
    int count = 0;
    for (auto i : passive) {
      nu -= grad(i) / a(i);
      ++count;
    }
    nu /= std::max(count, 1);
    const Eigen::VectorXd lambda = grad + nu * a;

    double stationarity = 0.0;
    double worst = 0.0;
    Eigen::Index worst_index = -1;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (in_passive[i]) {
        stationarity = std::max(stationarity, std::abs(lambda(i)));
      } else if (!blocked[i] && lambda(i) < worst) {
        worst = lambda(i);
        worst_index = i;
      }
    }
    kkt = std::max(stationarity, -worst) / grad_scale;
    if (worst_index < 0 || -worst <= stop_tol) break;
    in_passive[worst_index] = 1;
    just_added = worst_index;
    std::fill(blocked.begin(), blocked.end(), 0);
  }
  if (iter > max_iterations) throw SolverFailure("constrained lsq did not converge within the iteration budget");
  if (!(kkt < kkt_tolerance)) {
    throw SolverFailure("constrained lsq stopped with KKT residual " + std::to_string(kkt));
  }
  return ConstrainedLsqResult{x, (b * x - d).squaredNorm(), kkt, iter};
}

}  // namespace weakstrong::solver
