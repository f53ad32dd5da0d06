#include "bvkit/simplex.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace bvkit::detail {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Bounded-variable revised simplex, maximization form:
//   max c.x  s.t.  G x = b,  0 <= x <= u.
// Columns [n_real, n_real + rows) are artificials forming the initial basis;
// their upper bounds are pinned to 0 for phase 2. Bland's rule throughout
// keeps the walk deterministic and cycle-free.
class BoundedSimplex {
 public:
  BoundedSimplex(Eigen::MatrixXd G, Eigen::VectorXd b, Eigen::VectorXd cost,
                 Eigen::VectorXd upper, int n_real)
      : G_(std::move(G)),
        b_(std::move(b)),
        cost_(std::move(cost)),
        upper_(std::move(upper)),
        n_real_(n_real) {
    rows_ = static_cast<int>(G_.rows());
    cols_ = static_cast<int>(G_.cols());
    state_.assign(static_cast<std::size_t>(cols_), AtLower);
    basis_.resize(static_cast<std::size_t>(rows_));
    for (int i = 0; i < rows_; ++i) {
      basis_[static_cast<std::size_t>(i)] = n_real_ + i;
      state_[static_cast<std::size_t>(n_real_ + i)] = Basic;
    }
  }

  void solve() {
    // Phase 1: drive the artificial sum to zero.
    Eigen::VectorXd phase1 = Eigen::VectorXd::Zero(cols_);
    for (int j = n_real_; j < cols_; ++j) phase1(j) = -1.0;
    run(phase1);
    double art = 0.0;
    for (int i = 0; i < rows_; ++i) {
      if (basis_[static_cast<std::size_t>(i)] >= n_real_) art += std::abs(xb_(i));
    }
    if (art > 1e-8) throw std::runtime_error("simplex: infeasible phase-1");
    for (int j = n_real_; j < cols_; ++j) upper_(j) = 0.0;  // pin artificials
    run(cost_);
  }

  double objective() const {
    double obj = 0.0;
    for (int j = 0; j < cols_; ++j) {
      if (state_[static_cast<std::size_t>(j)] == AtUpper) obj += cost_(j) * upper_(j);
    }
    for (int i = 0; i < rows_; ++i) obj += cost_(basis_[static_cast<std::size_t>(i)]) * xb_(i);
    return obj;
  }

  Eigen::VectorXd primal_multipliers(const Eigen::VectorXd& cost) const {
    Eigen::MatrixXd B(rows_, rows_);
    Eigen::VectorXd cb(rows_);
    for (int i = 0; i < rows_; ++i) {
      B.col(i) = G_.col(basis_[static_cast<std::size_t>(i)]);
      cb(i) = cost(basis_[static_cast<std::size_t>(i)]);
    }
    return B.transpose().partialPivLu().solve(cb);
  }

  Eigen::VectorXd solution() const {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(cols_);
    for (int j = 0; j < cols_; ++j) {
      if (state_[static_cast<std::size_t>(j)] == AtUpper) x(j) = upper_(j);
    }
    for (int i = 0; i < rows_; ++i) x(basis_[static_cast<std::size_t>(i)]) = xb_(i);
    return x;
  }

  int iterations() const { return iterations_; }

 private:
  enum State : char { AtLower, AtUpper, Basic };

  void refresh(const Eigen::VectorXd& cost) {
    Eigen::MatrixXd B(rows_, rows_);
    Eigen::VectorXd cb(rows_);
    for (int i = 0; i < rows_; ++i) {
      B.col(i) = G_.col(basis_[static_cast<std::size_t>(i)]);
      cb(i) = cost(basis_[static_cast<std::size_t>(i)]);
    }
    lu_.compute(B);
    Eigen::VectorXd rhs = b_;
    for (int j = 0; j < cols_; ++j) {
      if (state_[static_cast<std::size_t>(j)] == AtUpper) rhs -= G_.col(j) * upper_(j);
    }
    xb_ = lu_.solve(rhs);
    y_ = B.transpose().partialPivLu().solve(cb);
  }

  void run(const Eigen::VectorXd& cost) {
    const double tol = 1e-10;
    const long max_iter = 200000L + 200L * cols_;
    for (long iter = 0;; ++iter) {
      if (iter > max_iter) throw std::runtime_error("simplex: iteration limit");
      refresh(cost);

      int enter = -1;
      bool from_lower = true;
      for (int j = 0; j < cols_; ++j) {
        const State st = state_[static_cast<std::size_t>(j)];
        if (st == Basic) continue;
        if (upper_(j) == 0.0 && st == AtLower && j >= n_real_) continue;  // pinned artificial
        const double d = cost(j) - y_.dot(G_.col(j));
        if (st == AtLower && d > tol) {
          enter = j;
          from_lower = true;
          break;  // Bland: first improving index
        }
        if (st == AtUpper && d < -tol) {
          enter = j;
          from_lower = false;
          break;
        }
      }
      if (enter < 0) return;  // optimal for this cost
      ++iterations_;

      Eigen::VectorXd w = lu_.solve(G_.col(enter));
      if (!from_lower) w = -w;  // entering decreases from its upper bound

      // Ratio test: entering moves by t >= 0; basics change by -w t.
      double t_best = upper_(enter);  // bound flip distance (may be inf)
      int leave = -1;                 // index into basis_, -1 => bound flip
      bool leave_at_upper = false;
      for (int i = 0; i < rows_; ++i) {
        const int bj = basis_[static_cast<std::size_t>(i)];
        double limit = kInf;
        bool at_upper = false;
        if (w(i) > 1e-12) {
          limit = xb_(i) / w(i);  // hits lower bound 0
        } else if (w(i) < -1e-12 && std::isfinite(upper_(bj))) {
          limit = (upper_(bj) - xb_(i)) / (-w(i));
          at_upper = true;
        }
        if (limit < t_best - 1e-15 ||
            (limit < t_best + 1e-15 && leave >= 0 &&
             bj < basis_[static_cast<std::size_t>(leave)])) {
          t_best = limit;
          leave = i;
          leave_at_upper = at_upper;
        }
      }
      if (!std::isfinite(t_best)) throw std::runtime_error("simplex: unbounded");

      if (leave < 0) {
        // Bound flip of the entering variable.
        state_[static_cast<std::size_t>(enter)] = from_lower ? AtUpper : AtLower;
        continue;
      }
      const int out = basis_[static_cast<std::size_t>(leave)];
      state_[static_cast<std::size_t>(out)] = leave_at_upper ? AtUpper : AtLower;
      basis_[static_cast<std::size_t>(leave)] = enter;
      state_[static_cast<std::size_t>(enter)] = Basic;
    }
  }

  Eigen::MatrixXd G_;
  Eigen::VectorXd b_;
  Eigen::VectorXd cost_;
  Eigen::VectorXd upper_;
  int n_real_;
  int rows_ = 0;
  int cols_ = 0;
  std::vector<int> basis_;
  std::vector<State> state_;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
  Eigen::VectorXd xb_;
  Eigen::VectorXd y_;
  int iterations_ = 0;
};

}  // namespace

LpResult minimax_dual(const Eigen::MatrixXd& A, const Eigen::VectorXd& v) {
  const int n = static_cast<int>(A.rows());
  const int nb = static_cast<int>(A.cols());
  const int rows = nb + 1;
  // Variables: mu_i (z_i^+), nu_i (z_i^-), then artificials.
  Eigen::MatrixXd G(rows, 2 * n + rows);
  Eigen::VectorXd cost = Eigen::VectorXd::Zero(2 * n + rows);
  Eigen::VectorXd upper = Eigen::VectorXd::Constant(2 * n + rows, kInf);
  for (int i = 0; i < n; ++i) {
    G.col(i).head(nb) = A.row(i).transpose();
    G(nb, i) = 1.0;
    G.col(n + i).head(nb) = -A.row(i).transpose();
    G(nb, n + i) = 1.0;
    cost(i) = v(i);
    cost(n + i) = -v(i);
  }
  G.rightCols(rows) = Eigen::MatrixXd::Identity(rows, rows);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(rows);
  b(nb) = 1.0;

  BoundedSimplex sx(std::move(G), std::move(b), cost, std::move(upper), 2 * n);
  sx.solve();

  LpResult res;
  res.objective = sx.objective();
  res.y = sx.primal_multipliers(cost);
  Eigen::VectorXd x = sx.solution();
  res.z = x.head(n) - x.segment(n, n);
  res.iterations = sx.iterations();
  return res;
}

LpResult l1_dual(const Eigen::MatrixXd& A, const Eigen::VectorXd& v,
                 const Eigen::VectorXd& w) {
  const int n = static_cast<int>(A.rows());
  const int nb = static_cast<int>(A.cols());
  const int rows = nb;
  Eigen::MatrixXd G(rows, 2 * n + rows);
  Eigen::VectorXd cost = Eigen::VectorXd::Zero(2 * n + rows);
  Eigen::VectorXd upper(2 * n + rows);
  for (int i = 0; i < n; ++i) {
    G.col(i).head(nb) = A.row(i).transpose();
    G.col(n + i).head(nb) = -A.row(i).transpose();
    cost(i) = v(i);
    cost(n + i) = -v(i);
    upper(i) = w(i);
    upper(n + i) = w(i);
  }
  G.rightCols(rows) = Eigen::MatrixXd::Identity(rows, rows);
  upper.tail(rows).setConstant(kInf);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(rows);

  BoundedSimplex sx(std::move(G), std::move(b), cost, std::move(upper), 2 * n);
  sx.solve();

  LpResult res;
  res.objective = sx.objective();
  res.y = sx.primal_multipliers(cost);
  Eigen::VectorXd x = sx.solution();
  res.z = x.head(n) - x.segment(n, n);
  res.iterations = sx.iterations();
  return res;
}

}  // namespace bvkit::detail
