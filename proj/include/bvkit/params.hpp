#pragma once

#include <stdexcept>
#include <string>

namespace bvkit {

/// Integrability exponent in [1, inf]. Infinity is a distinct state rather
/// than a sentinel float, so 1/inf evaluates to exactly 0 and regime
/// thresholds involving conjugates stay exact.
class Exponent {
 public:
  Exponent() : inf_(false), value_(1.0) {}

  static Exponent infinity() {
    Exponent e;
    e.inf_ = true;
    return e;
  }

  static Exponent finite(double r);

  bool is_inf() const { return inf_; }

  /// Finite value; throws for the infinite state.
  double value() const;

  /// 1/r with 1/inf == 0 exactly.
  double inv() const { return inf_ ? 0.0 : 1.0 / value_; }

  /// Conjugate exponent r' with 1/r + 1/r' = 1. Maps 1 <-> inf.
  Exponent conjugate() const;

  bool operator==(const Exponent& o) const {
    return inf_ == o.inf_ && (inf_ || value_ == o.value_);
  }
  bool operator!=(const Exponent& o) const { return !(*this == o); }

  bool is_one() const { return !inf_ && value_ == 1.0; }

  std::string str() const;

  /// Parses "inf"/"Inf"/"INF" or a finite decimal >= 1.
  static Exponent parse(const std::string& text);

 private:
  bool inf_;
  double value_;
};

/// The parameter pack kappa = {k, d, lambda, p, q} that governs every norm
/// in the toolkit. k is the polynomial order (degree bound k-1).
struct Kappa {
  int k;
  int d;
  double lambda;
  Exponent p;
  Exponent q;

  Kappa(int k_, int d_, double lambda_, Exponent p_, Exponent q_);

  std::string str() const;
};

/// Smoothness s(kappa) = d * (lambda + 1/p - 1/q).
double smoothness(const Kappa& kappa);

/// Regime flags gating the duality and two-stars machinery.
struct Regime {
  bool degenerate;       // s(kappa) > k: the space collapses to polynomials
  bool maximal;          // s(kappa) == k
  bool duality_valid;    // 1 < q and s <= k
  bool two_stars_valid;  // 1 < p, 1 < q < inf and s < k
};

/// Classifies kappa. Comparisons of s(kappa) against k use exact rational
/// arithmetic when lambda, 1/p, 1/q are recognizable as small rationals;
/// otherwise a 1e-12 float tolerance decides the boundary.
Regime classify(const Kappa& kappa);

/// Conjugate of a free-standing exponent (1 <-> inf, r -> r/(r-1)).
Exponent conjugate(const Exponent& r);

}  // namespace bvkit
