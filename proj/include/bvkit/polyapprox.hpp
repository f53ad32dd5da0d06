#pragma once

#include <Eigen/Dense>
#include <optional>

#include "bvkit/grid.hpp"

namespace bvkit {

/// Monomial basis of total degree <= k-1 in d variables; dimension
/// binom(k-1+d, d). Coordinates are affinely rescaled per cube to [-1,1]^d
/// before any solve, which keeps the basis well conditioned on small cubes.
struct PolyBasis {
  int d = 1;
  int k = 1;
  std::vector<std::vector<int>> exponents;

  static PolyBasis total_degree(int d, int k);
  std::size_t size() const { return exponents.size(); }
};

/// Certificate of a local best-approximation solve on a cube.
struct LocalFit {
  double error = 0.0;
  Eigen::VectorXd coefficients;  // per basis monomial, rescaled coordinates
  GridFunction residual;         // f minus the fitted polynomial, zero off the cube
};

/// Best local polynomial approximation E_{kq}(f; Q): the exact L_q(Q)
/// distance from f to the cell-averaged polynomials of degree <= k-1.
/// q = 2 solves normal equations on exact cell moments; q in {1, inf} solve
/// a small linear program over the cells of Q; other finite q run IRLS to
/// relative tolerance 1e-8 (capped at 200 iterations).
LocalFit local_approx_error(const GridFunction& f, const DyadicCube& Q, int k,
                            const Exponent& q);

struct Oscillation {
  double value = 0.0;
  bool any_shift = false;  // false when Q admits no lattice shift at this k
};

/// k-oscillation osc_{kq}(f;Q): max over lattice shifts h (x and x+kh inside
/// Q) of the L_q norm of the k-th forward difference.
Oscillation k_oscillation(const GridFunction& f, const DyadicCube& Q, int k,
                          const Exponent& q);

/// E_{kq}(f;Q) / osc_{kq}(f;Q); empty when the oscillation vanishes.
std::optional<double> whitney_ratio(const GridFunction& f, const DyadicCube& Q, int k,
                                    const Exponent& q);

/// k-deviation |Delta_h^k f(a)| with h = (b-a)/k, d = 1 only. Values are
/// read as cell values; the nodes a + j h must be grid-resolvable.
double delta_k(const GridFunction& f, double a, double b, int k);

namespace detail {

/// Cell-averaged monomial matrix over a window (rows = cells of the window
/// in for_each_cell order, columns = basis monomials).
Eigen::MatrixXd basis_matrix(const GridFunction& f, const CellWindow& w,
                             const PolyBasis& basis);

struct WindowFit {
  double error = 0.0;
  Eigen::VectorXd coeffs;
  Eigen::VectorXd dual;  // cell-indexed dual certificate; empty unless q in {1, inf}
};

/// Window-level solve shared by the cube-facing API, the variation DP and
/// the atom construction. `want_dual` requests the dual optimizer for
/// q in {1, inf}.
WindowFit fit_window(const GridFunction& f, const CellWindow& w, int k,
                     const Exponent& q, bool want_dual);

/// Residual values over the window (f - fitted polynomial) in cell order.
Eigen::VectorXd window_values(const GridFunction& f, const CellWindow& w);

double binomial(int n, int r);

}  // namespace detail

}  // namespace bvkit
