#pragma once

#include <Eigen/Dense>

namespace bvkit::detail {

/// Result of one of the small dual LPs below. `objective` is the optimal
/// value (equal to the primal best-approximation error by strong duality),
/// `y` the equality-constraint multipliers (the primal fit), `z` the optimal
/// dual point over the cells.
struct LpResult {
  double objective = 0.0;
  Eigen::VectorXd y;
  Eigen::VectorXd z;
  int iterations = 0;
};

/// max v.z subject to A^T z = 0, ||z||_1 <= 1.
/// Dual of the minimax fit min_c ||v - A c||_inf; y = (c, t).
LpResult minimax_dual(const Eigen::MatrixXd& A, const Eigen::VectorXd& v);

/// max v.z subject to A^T z = 0, |z_i| <= w_i (w > 0).
/// Dual of the weighted l1 fit min_c sum_i w_i |v_i - (A c)_i|; y = c.
LpResult l1_dual(const Eigen::MatrixXd& A, const Eigen::VectorXd& v,
                 const Eigen::VectorXd& w);

}  // namespace bvkit::detail
