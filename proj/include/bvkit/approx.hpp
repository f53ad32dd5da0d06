#pragma once

#include <string>
#include <vector>

#include "bvkit/variation.hpp"

namespace bvkit {

/// Dilated-mollifier configuration. The bump is a fixed tensor-product
/// C-infinity profile prod_i c*exp(-1/(1-y_i^2)) supported on [-1,1]^d and
/// pre-normalized to unit mass; "tensor-exp" is the only profile.
struct MollifierConfig {
  int n = 1;               // dilation index, lambda_n = n/(n+1)
  int supersample = 4;     // output-cell averaging lattice, per axis
  std::string bump = "tensor-exp";
};

/// f_n(x) = int_{||y||_inf <= 1} f^0(a_n(x) - y/(n+1)) phi(y) dy with f^0
/// the zero extension and a_n the lambda_n-dilation about the cube center.
/// The kernel integral is evaluated exactly against the piecewise-constant
/// input (per-axis CDF differences); output cells average supersample^d
/// evaluation points.
GridFunction mollify(const GridFunction& f, const MollifierConfig& cfg);

struct BoundCheck {
  double lhs = 0.0;  // |f_n|_V
  double rhs = 0.0;  // lambda_n^{d(lambda - 1/q)} |f|_V
  bool ok = false;
};

/// Checks |f_n|_V <= lambda_n^{d(lambda-1/q)} |f|_V with 5% discretization
/// slack.
BoundCheck mollifier_bound_check(const GridFunction& f, const Kappa& kappa, int n,
                                 int max_level, double slack = 0.05);

struct ConvergenceRow {
  int n = 0;
  double err_q = 0.0;    // ||f - f_n||_q, or the max weak pairing when q = inf
  double seminorm = 0.0; // |f_n|_V
};

/// Mollifier convergence table over n_list. For q = inf the error column
/// reports max_i |<f - f_n, w_i>| against a fixed basis of 32 smooth
/// witnesses (weak-star convergence surrogate).
std::vector<ConvergenceRow> convergence_study(const GridFunction& f, const Kappa& kappa,
                                              const std::vector<int>& n_list);

/// k-th modulus of continuity: sup over grid shifts h with ||h||_inf <= t of
/// ||Delta_h^k f||_{L_q} over the shifted domain.
double modulus(const GridFunction& f, int k, const Exponent& q, double t);

/// One axis of the Jackson-type operator: piecewise-linear interpolation
/// anchored at the centers of the cells containing the nodes j/n.
GridFunction jackson_axis(const GridFunction& f, int n, int axis);

/// Tensor-product Jackson operator (axes applied in order; they commute).
/// Satisfies ||f - T_n f||_inf <= d * omega_{1,inf}(f; 1/n) and reproduces
/// grid projections of affine functions exactly.
GridFunction jackson_approx(const GridFunction& f, int n);

namespace detail {

/// Unit-mass 1D bump CDF on [-1,1] (clamped outside); used by mollify and
/// exposed for quadrature tests.
double bump_cdf(double t);

}  // namespace detail

}  // namespace bvkit
