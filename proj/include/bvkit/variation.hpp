#pragma once

#include <map>
#include <string>
#include <unordered_map>

#include "bvkit/grid.hpp"
#include "bvkit/polyapprox.hpp"

namespace bvkit {

/// Computed norm value plus the certificate needed to audit it.
struct NormReport {
  double value = 0.0;
  Packing certificate;                  // argmax packing; empty when value is 0
  std::string kind;                     // which functional produced it
  std::map<std::string, double> meta;   // parameters used
};

/// Memoizes E_{kq}(f;Q) per cube for one fixed f, so sweeps over several
/// (lambda, p) aggregations reuse the expensive local solves. Read paths are
/// const after warm-up; concurrent use requires external synchronization.
class ECache {
 public:
  explicit ECache(const GridFunction& f) : f_(&f) {}

  double error(const DyadicCube& cube, int k, const Exponent& q);

  /// Fills a dense per-level table for one (k, q), so hot loops (packing
  /// enumeration oracles) pay an array lookup instead of a hash probe.
  void precompute(int max_level, int k, const Exponent& q);

  const GridFunction& function() const { return *f_; }

 private:
  struct Key {
    DyadicCube cube;
    int k;
    bool q_inf;
    double q_value;
    bool operator==(const Key& o) const {
      return k == o.k && q_inf == o.q_inf && q_value == o.q_value && cube == o.cube;
    }
  };
  struct KeyHash {
    std::size_t operator()(const Key& key) const;
  };
  const GridFunction* f_;
  std::unordered_map<Key, double, KeyHash> table_;

  bool dense_ready_ = false;
  int dense_k_ = 0;
  Exponent dense_q_;
  std::vector<std::vector<double>> dense_;  // [level][flat index]
};

/// gamma(pi; f) = (sum_{Q in pi} (|Q|^-lambda E_{kq}(f;Q))^p)^{1/p}, max for
/// p = inf. Terms are accumulated in dyadic-tree order so the value is
/// bit-identical to what the DP in v_seminorm produces for the same packing.
double gamma(const GridFunction& f, const Packing& pi, const Kappa& kappa,
             ECache* cache = nullptr);

/// The l_p^p aggregate behind gamma (max for p = inf), same tree-ordered
/// arithmetic; exposed so exhaustive oracles can compare against the DP on
/// the raw accumulator before the final 1/p power.
double gamma_raw(const GridFunction& f, const Packing& pi, const Kappa& kappa,
                 ECache* cache = nullptr);

/// Exact supremum of gamma over all dyadic packings with cubes of level
/// <= max_level, by post-order tree DP; certificate recovered by
/// backtracking.
NormReport v_seminorm(const GridFunction& f, const Kappa& kappa, int max_level,
                      ECache* cache = nullptr);

/// Same DP, but cubes with |Q| > eps cannot be selected (their own term is
/// disabled; their children still combine).
NormReport v_seminorm_restricted(const GridFunction& f, const Kappa& kappa, double eps,
                                 int max_level, ECache* cache = nullptr);

struct ProfilePoint {
  double eps;
  double value;
};

struct LittleVProfile {
  std::vector<ProfilePoint> points;
  double loglog_slope = 0.0;  // fitted d log(value) / d log(eps)
};

/// Mesh-restricted supremum profile over eps = 2^(-level*d) for each level
/// in `levels`, with a log-log regression slope. Near-zero rows are skipped
/// in the fit; an all-zero profile reports slope 0.
LittleVProfile little_v_profile(const GridFunction& f, const Kappa& kappa,
                                const std::vector<int>& levels, ECache* cache = nullptr);

/// (lambda,p)-variation over monotone grid-point sequences (d = 1), by
/// longest-path DP over the DAG of grid-point pairs.
double var_1d(const GridFunction& f, int k, double lambda, const Exponent& p);

/// Packing form of the same variation: sup over packings of arbitrary
/// grid-aligned closed intervals of (sum (E_k(f;I)/|I|^lambda)^p)^{1/p},
/// with E_k the sup-norm local approximation over the cells the closed
/// interval touches. For k = 1 the variation equals exactly twice this.
double var_1d_packing_form(const GridFunction& f, int k, double lambda, const Exponent& p);

/// BMO_p seminorm: sup over dyadic packings of
/// (sum_Q |Q| ((1/|Q|) int_Q |f - f_Q|)^p)^{1/p}.
NormReport bmo_seminorm(const GridFunction& f, const Exponent& p, int max_level);

/// Per-packing BMO aggregate (same tree-ordered arithmetic as gamma).
double gamma_bmo(const GridFunction& f, const Packing& pi, const Exponent& p);

/// Morrey norm: sup over dyadic cubes of |Q|^{s/d} ((1/|Q|) int_Q |f|^q)^{1/q};
/// requires 0 < s < d/q. Certificate is the argmax cube.
NormReport morrey_norm(const GridFunction& f, double q, double s, int max_level);

/// Discrete surrogate of the BV^k seminorm: sum over |alpha| = k of the
/// l1 mass of forward differences times h^{d-k}. A consistency diagnostic,
/// not an exact norm.
double bvk_seminorm(const GridFunction& f, int k);

}  // namespace bvkit
