#pragma once

#include <Eigen/Dense>

#include "bvkit/variation.hpp"

namespace bvkit {

/// kappa-atom: supported on its cube, L_{q'} norm <= |Q|^-lambda, vanishing
/// moments against polynomials of degree <= k-1.
struct Atom {
  DyadicCube cube;
  GridFunction values;  // full-grid function, exactly zero off the cube
};

/// kappa-chain subordinate to one packing: coefficient combination of one
/// atom per cube.
struct Chain {
  Packing packing;
  std::vector<Atom> atoms;     // parallel to packing.cubes
  std::vector<double> coeffs;  // parallel to packing.cubes

  GridFunction synthesize(int d, int m) const;
};

/// l_{p'} norm of the chain coefficients.
double chain_norm(const Chain& b, const Exponent& p_prime);

struct Decomposition {
  std::vector<Chain> chains;

  double cost(const Exponent& p_prime) const;
  GridFunction synthesize(int d, int m) const;
};

/// True when every moment of g against degree <= k-1 monomials is below
/// tol (absolute, on the unit cube).
bool is_moment_free(const GridFunction& g, int k, double tol = 1e-9);

/// Restricts raw to Q, removes its L_2 projection onto the degree <= k-1
/// polynomials on Q, and rescales so the L_{q'}(Q) norm equals |Q|^-lambda
/// exactly. Returns the atom and the normalizing scale (raw restricted and
/// projected equals scale * atom). Throws if the projection removes
/// everything.
std::pair<Atom, double> make_atom(const GridFunction& raw, const DyadicCube& Q,
                                  const Kappa& kappa);

struct ExtremalAtom {
  Atom atom;
  double pairing;  // pair(f, atom) = |Q|^-lambda E_{kq}(f;Q)
};

/// Atom attaining the local duality pair(f, a) = |Q|^-lambda E_{kq}(f;Q).
/// q = 2 normalizes the fit residual; q in {1, inf} read the dual optimizer
/// of the best-approximation LP. Requires E > 0.
ExtremalAtom extremal_atom(const GridFunction& f, const DyadicCube& Q, const Kappa& kappa);

struct SearchBudget {
  int max_partition_level = 3;  // uniform level-L partitions tried as splits
  int recursion_depth = 1;      // remainder re-splitting depth
  bool dual_guided = true;      // KKT-guided chains on tiny q=2 instances
};

struct UpperReport {
  double value = 0.0;
  Decomposition decomposition;
};

/// Constructive upper bound for ||g||_{U_kappa}: a valid decomposition and
/// its total chain cost. Always at most ||g||_{q'} + 1e-9 via the global
/// single-chain fallback. g must be moment-free.
UpperReport u_norm_upper(const GridFunction& g, const Kappa& kappa,
                         const SearchBudget& budget = SearchBudget{},
                         const std::vector<GridFunction>* witnesses = nullptr);

struct LowerReport {
  double value = 0.0;
  bool exact = false;  // true when the tiny-instance dual oracle ran
};

/// Pairing lower bound max_f |<f,g>| / |f|_V over the witnesses; with
/// `exact` and a tiny instance (<= 64 cells, q = 2, p in {2, inf}) the true
/// dual value sup{ <f,g> : gamma(pi;f) <= 1 for all packings } is computed
/// by a certified convex solve.
LowerReport u_norm_lower(const GridFunction& g, const Kappa& kappa,
                         const std::vector<GridFunction>& witnesses, bool exact);

struct GapReport {
  double lower = 0.0;
  double upper = 0.0;
  double relative_gap = 0.0;
};

GapReport duality_gap(const GridFunction& g, const Kappa& kappa,
                      const std::vector<GridFunction>& witnesses = {}, bool exact = false,
                      const SearchBudget& budget = SearchBudget{});

struct PairingCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  bool ok = false;
  double gamma_value = 0.0;
  double seminorm_value = 0.0;  // v_seminorm at the packing's deepest level
};

/// |int f b| <= [b]_{p'} gamma(pi;f): the pairing inequality behind the
/// duality theorem, evaluated on one (f, chain) pair.
PairingCheck check_pairing_inequality(const GridFunction& f, const Chain& b,
                                      const Kappa& kappa);

namespace detail {

struct OracleResult {
  double lower = 0.0;       // certified: attained by the feasible maximizer
  double upper = 0.0;       // Lagrangian bound
  Eigen::VectorXd f_hat;    // feasible near-maximizer, cell values
  std::vector<Packing> constraints;
  std::vector<double> activity;  // gamma(pi; f_hat) per constraint
};

/// Tiny-instance dual oracle for q = 2, p in {2, inf}; throws beyond the
/// size guard.
OracleResult exact_dual_oracle(const GridFunction& g, const Kappa& kappa, int max_level,
                               double tol, int max_iter);

}  // namespace detail

}  // namespace bvkit
