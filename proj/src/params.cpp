#include "bvkit/params.hpp"

#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <sstream>

namespace bvkit {

Exponent Exponent::finite(double r) {
  if (!std::isfinite(r) || r < 1.0) {
    throw std::invalid_argument("exponent must be a finite real >= 1 or infinity");
  }
  Exponent e;
  e.inf_ = false;
  e.value_ = r;
  return e;
}

double Exponent::value() const {
  if (inf_) throw std::logic_error("value() called on infinite exponent");
  return value_;
}

Exponent Exponent::conjugate() const {
  if (inf_) return finite(1.0);
  if (value_ == 1.0) return infinity();
  return finite(value_ / (value_ - 1.0));
}

std::string Exponent::str() const {
  if (inf_) return "inf";
  std::ostringstream os;
  os << value_;
  return os.str();
}

Exponent Exponent::parse(const std::string& text) {
  if (text == "inf" || text == "Inf" || text == "INF" || text == "oo") {
    return infinity();
  }
  std::size_t pos = 0;
  double v = std::stod(text, &pos);
  if (pos != text.size()) throw std::invalid_argument("bad exponent: " + text);
  if (std::isinf(v)) return infinity();
  return finite(v);
}

Exponent conjugate(const Exponent& r) { return r.conjugate(); }

Kappa::Kappa(int k_, int d_, double lambda_, Exponent p_, Exponent q_)
    : k(k_), d(d_), lambda(lambda_), p(p_), q(q_) {
  if (k < 1) throw std::invalid_argument("kappa: k must be >= 1");
  if (d < 1) throw std::invalid_argument("kappa: d must be >= 1");
  if (!std::isfinite(lambda)) throw std::invalid_argument("kappa: lambda must be finite");
}

std::string Kappa::str() const {
  std::ostringstream os;
  os << "{k=" << k << ",d=" << d << ",lambda=" << lambda << ",p=" << p.str()
     << ",q=" << q.str() << "}";
  return os.str();
}

double smoothness(const Kappa& kappa) {
  return kappa.d * (kappa.lambda + kappa.p.inv() - kappa.q.inv());
}

namespace {

// Minimal exact rational for regime boundary tests. __int128 intermediates
// keep the handful of operations below exact for any recognized inputs.
struct Rational {
  std::int64_t num;
  std::int64_t den;  // > 0

  static Rational make(__int128 n, __int128 d) {
    if (d < 0) {
      n = -n;
      d = -d;
    }
    __int128 a = n < 0 ? -n : n;
    __int128 b = d;
    while (b != 0) {
      __int128 t = a % b;
      a = b;
      b = t;
    }
    if (a > 1) {
      n /= a;
      d /= a;
    }
    return {static_cast<std::int64_t>(n), static_cast<std::int64_t>(d)};
  }
  Rational operator+(const Rational& o) const {
    return make(__int128(num) * o.den + __int128(o.num) * den, __int128(den) * o.den);
  }
  Rational operator-(const Rational& o) const {
    return make(__int128(num) * o.den - __int128(o.num) * den, __int128(den) * o.den);
  }
  Rational operator*(std::int64_t s) const { return make(__int128(num) * s, den); }
  int compare(std::int64_t k) const {
    __int128 lhs = num;
    __int128 rhs = __int128(k) * den;
    return lhs < rhs ? -1 : (lhs > rhs ? 1 : 0);
  }
};

// Continued-fraction recognition of a double as a small rational.
std::optional<Rational> as_rational(double x, std::int64_t max_den = 1 << 20) {
  if (!std::isfinite(x)) return std::nullopt;
  double a = x;
  std::int64_t p0 = 1, q0 = 0, p1 = static_cast<std::int64_t>(std::floor(a)), q1 = 1;
  double frac = a - std::floor(a);
  for (int iter = 0; iter < 64 && frac > 0; ++iter) {
    a = 1.0 / frac;
    double fa = std::floor(a);
    if (fa > 9e15) break;
    std::int64_t ai = static_cast<std::int64_t>(fa);
    __int128 p2w = __int128(ai) * p1 + p0;
    __int128 q2w = __int128(ai) * q1 + q0;
    const __int128 num_cap = __int128(1) << 40;
    if (q2w > max_den || p2w > num_cap || p2w < -num_cap) break;
    std::int64_t p2 = static_cast<std::int64_t>(p2w);
    std::int64_t q2 = static_cast<std::int64_t>(q2w);
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    frac = a - fa;
  }
  Rational r = Rational::make(p1, q1);
  if (std::abs(x - static_cast<double>(r.num) / static_cast<double>(r.den)) < 1e-13) {
    return r;
  }
  return std::nullopt;
}

std::optional<Rational> inv_as_rational(const Exponent& e) {
  if (e.is_inf()) return Rational{0, 1};
  return as_rational(1.0 / e.value());
}

}  // namespace

Regime classify(const Kappa& kappa) {
  Regime r{};
  const auto lam = as_rational(kappa.lambda);
  const auto ip = inv_as_rational(kappa.p);
  const auto iq = inv_as_rational(kappa.q);

  int cmp;  // sign of s(kappa) - k
  if (lam && ip && iq) {
    Rational s = (*lam + *ip - *iq) * kappa.d;
    cmp = s.compare(kappa.k);
  } else {
    double s = smoothness(kappa);
    double diff = s - kappa.k;
    cmp = (std::abs(diff) <= 1e-12) ? 0 : (diff < 0 ? -1 : 1);
  }

  r.degenerate = cmp > 0;
  r.maximal = cmp == 0;
  const bool q_gt_1 = kappa.q.is_inf() || kappa.q.value() > 1.0;
  const bool p_gt_1 = kappa.p.is_inf() || kappa.p.value() > 1.0;
  const bool q_finite = !kappa.q.is_inf();
  r.duality_valid = q_gt_1 && cmp <= 0;
  r.two_stars_valid = p_gt_1 && q_gt_1 && q_finite && cmp < 0;
  return r;
}

}  // namespace bvkit
