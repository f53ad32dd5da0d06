#include <doctest.h>

#include <random>

#include "bvkit/builtins.hpp"
#include "bvkit/variation.hpp"

using namespace bvkit;

namespace {

GridFunction random_grid(int d, int m, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> v(static_cast<std::size_t>(std::int64_t(1) << (m * d)));
  for (auto& x : v) x = gauss(rng);
  return GridFunction(d, m, std::move(v));
}

GridFunction scale(const GridFunction& f, double a) {
  std::vector<double> v(f.values().begin(), f.values().end());
  for (auto& x : v) x *= a;
  return GridFunction(f.dim(), f.resolution(), std::move(v));
}

GridFunction add(const GridFunction& f, const GridFunction& g) {
  std::vector<double> v(f.values().begin(), f.values().end());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] += g[static_cast<std::int64_t>(i)];
  return GridFunction(f.dim(), f.resolution(), std::move(v));
}

}  // namespace

TEST_CASE("gamma on simple packings") {
  const Kappa kappa(1, 1, 0.0, Exponent::finite(1), Exponent::infinity());
  const GridFunction lin = make_builtin("linear", 1, 6);

  // Polynomials of degree <= k-1 are the null space.
  const GridFunction cst = make_builtin("const", 1, 6);
  Packing pi{{DyadicCube::root(1).child(0), DyadicCube::root(1).child(1)}};
  CHECK(gamma(cst, pi, kappa) == 0.0);

  // Singleton root packing equals E (|Q^d| = 1).
  Packing root{{DyadicCube::root(1)}};
  const double e = local_approx_error(lin, DyadicCube::root(1), 1, Exponent::infinity()).error;
  CHECK(gamma(lin, root, kappa) == doctest::Approx(e));

  // Two halves of the staircase: each contributes half its oscillation.
  const double expect = 2.0 * 0.5 * (0.5 - std::ldexp(1.0, -6));
  CHECK(gamma(lin, pi, kappa) == doctest::Approx(expect).epsilon(1e-12));

  CHECK(gamma(lin, Packing{}, kappa) == 0.0);
}

TEST_CASE("DP equals exhaustive packing enumeration bitwise") {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> pick_k(1, 2);
  std::uniform_int_distribution<int> pick_exp(0, 2);
  const Exponent exps[3] = {Exponent::finite(1), Exponent::finite(2), Exponent::infinity()};
  for (auto [d, L] : std::vector<std::pair<int, int>>{{1, 2}, {1, 3}, {2, 2}}) {
    for (int trial = 0; trial < 6; ++trial) {
      const GridFunction f = random_grid(d, L, rng());
      const Kappa kappa(pick_k(rng), d, trial % 2 == 0 ? 0.0 : 0.25, exps[pick_exp(rng)],
                        exps[pick_exp(rng)]);
      ECache cache(f);
      const NormReport report = v_seminorm(f, kappa, L, &cache);
      double best_raw = 0.0;
      enumerate_packings(d, L, [&](const Packing& pi) {
        best_raw = std::max(best_raw, gamma_raw(f, pi, kappa, &cache));
      });
      const double best = kappa.p.is_inf()
                              ? best_raw
                              : (kappa.p.value() == 1.0
                                     ? best_raw
                                     : (kappa.p.value() == 2.0 ? std::sqrt(best_raw)
                                                               : std::pow(best_raw,
                                                                          1.0 / kappa.p.value())));
      CHECK(report.value == best);  // bitwise: same arithmetic path
      // Certificate reproduces the value.
      CHECK(gamma(f, report.certificate, kappa, &cache) ==
            doctest::Approx(report.value).epsilon(1e-10));
    }
  }
}

TEST_CASE("seminorm axioms") {
  const Kappa kappa(1, 1, 0.25, Exponent::finite(2), Exponent::finite(2));
  for (std::uint64_t seed : {4ULL, 5ULL}) {
    const GridFunction f = random_grid(1, 4, seed);
    const GridFunction g = random_grid(1, 4, seed + 50);
    const double vf = v_seminorm(f, kappa, 4).value;
    const double vg = v_seminorm(g, kappa, 4).value;
    CHECK(v_seminorm(scale(f, -3.0), kappa, 4).value == doctest::Approx(3.0 * vf).epsilon(1e-10));
    CHECK(v_seminorm(add(f, g), kappa, 4).value <= vf + vg + 1e-9);
  }
}

TEST_CASE("null space of the seminorm") {
  for (int d = 1; d <= 2; ++d) {
    for (int k = 1; k <= 3; ++k) {
      const PolyBasis basis = PolyBasis::total_degree(d, k);
      for (const auto& alpha : basis.exponents) {
        std::string spec = "monomial:";
        for (std::size_t i = 0; i < alpha.size(); ++i) {
          spec += (i ? "," : "") + std::to_string(alpha[i]);
        }
        const GridFunction f = make_builtin(spec, d, 3);
        const Kappa kappa(k, d, 0.25, Exponent::finite(2), Exponent::finite(2));
        CHECK(v_seminorm(f, kappa, 3).value <= 1e-9);
      }
    }
  }
}

TEST_CASE("isometry at p = q, lambda = 0") {
  std::mt19937_64 rng(7);
  for (const Exponent& pq : {Exponent::finite(1), Exponent::finite(2), Exponent::infinity()}) {
    for (int d = 1; d <= 2; ++d) {
      for (int k = 1; k <= 2; ++k) {
        const int m = d == 1 ? 5 : 3;
        const GridFunction f = random_grid(d, m, rng());
        const Kappa kappa(k, d, 0.0, pq, pq);
        ECache cache(f);
        const NormReport rep = v_seminorm(f, kappa, m, &cache);
        const double e = cache.error(DyadicCube::root(d), k, pq);
        CHECK(std::abs(rep.value - e) <= 1e-9);
        // Certificate should be the root cube.
        REQUIRE(rep.certificate.size() == 1);
        CHECK(rep.certificate.cubes[0] == DyadicCube::root(d));
      }
    }
  }
}

TEST_CASE("constant function gives zero with empty certificate") {
  const Kappa kappa(1, 2, 0.0, Exponent::finite(2), Exponent::finite(2));
  const NormReport rep = v_seminorm(GridFunction::constant(2, 3, 4.0), kappa, 3);
  CHECK(rep.value == 0.0);
  CHECK(rep.certificate.empty());
}

TEST_CASE("monotone in max_level") {
  const GridFunction f = make_builtin("random-smooth", 1, 6, 3);
  const Kappa kappa(1, 1, 0.5, Exponent::finite(2), Exponent::infinity());
  double prev = -1.0;
  for (int L = 0; L <= 6; ++L) {
    const double v = v_seminorm(f, kappa, L).value;
    CHECK(v >= prev - 1e-12);
    prev = v;
  }
}

TEST_CASE("restricted seminorm") {
  const GridFunction f = make_builtin("linear", 1, 6);
  const Kappa kappa(1, 1, 0.0, Exponent::finite(1), Exponent::infinity());
  const double full = v_seminorm(f, kappa, 6).value;
  CHECK(v_seminorm_restricted(f, kappa, 1.0, 6).value == doctest::Approx(full));
  // Below the smallest admissible volume nothing is selectable.
  CHECK(v_seminorm_restricted(f, kappa, std::ldexp(1.0, -7), 6).value == 0.0);
  // Linear with s = k: the restricted profile does not decay (stays at the
  // total variation / 2 up to grid effects).
  for (double eps : {0.5, 0.25, 0.125}) {
    const double v = v_seminorm_restricted(f, kappa, eps, 6).value;
    CHECK(v == doctest::Approx(full).epsilon(0.05));
  }
}

TEST_CASE("little-v profile: smooth decays, step does not, polynomial vanishes") {
  // Smooth with s(kappa) < k: slope at least (k-s)/d - 0.2.
  const GridFunction smooth = make_builtin("sine", 1, 9);
  const Kappa ks(1, 1, 0.0, Exponent::finite(2), Exponent::finite(2));
  ECache cache_s(smooth);
  const auto prof = little_v_profile(smooth, ks, {0, 1, 2, 3, 4, 5}, &cache_s);
  const double s = smoothness(ks);
  CHECK(prof.loglog_slope >= (ks.k - s) / ks.d - 0.2);

  // Step with k = 1, lambda = 0, p = 1, q = inf: flat profile.
  const GridFunction step = make_builtin("step", 1, 9);
  const Kappa kf(1, 1, 0.0, Exponent::finite(1), Exponent::infinity());
  ECache cache_f(step);
  const auto flat = little_v_profile(step, kf, {0, 1, 2, 3, 4, 5}, &cache_f);
  CHECK(std::abs(flat.loglog_slope) <= 0.05);
  const double head = flat.points.front().value;
  CHECK(head > 0.3);

  // Polynomials yield the all-zero profile.
  const GridFunction poly = make_builtin("linear", 1, 6);
  const Kappa kp(2, 1, 0.0, Exponent::finite(2), Exponent::finite(2));
  const auto zeros = little_v_profile(poly, kp, {0, 1, 2, 3});
  for (const auto& pt : zeros.points) CHECK(pt.value <= 1e-9);
  CHECK(zeros.loglog_slope == 0.0);
}

TEST_CASE("degeneracy: s > k forces divergence in max_level") {
  const GridFunction f = make_builtin("sine", 1, 10, 0, 8);
  // d = 1, k = 1, q = inf, p = 1, lambda = 1/2: s = 1.5 = k + 1/2.
  const Kappa kappa(1, 1, 0.5, Exponent::finite(1), Exponent::infinity());
  ECache cache(f);
  double prev = 0.0;
  std::vector<double> values;
  for (int L = 2; L <= 6; ++L) {
    const double v = v_seminorm(f, kappa, L, &cache).value;
    CHECK(v >= prev);
    values.push_back(v);
    prev = v;
  }
  // Per-level growth near 2^{(s-k)} = sqrt(2), allowing 20% slack.
  const std::size_t n = values.size();
  const double growth = values[n - 1] / values[n - 2];
  CHECK(growth >= std::pow(2.0, 0.5) * 0.8);
}

TEST_CASE("1D variation: classic values") {
  const GridFunction lin = make_builtin("linear", 1, 8);
  const double tv = var_1d(lin, 1, 0.0, Exponent::finite(1));
  CHECK(tv == doctest::Approx(1.0).epsilon(std::ldexp(1.0, -7)));
  CHECK(var_1d(GridFunction::constant(1, 5, 2.0), 1, 0.0, Exponent::finite(1)) == 0.0);
}

TEST_CASE("factor-2 identity: variation equals twice the interval-packing supremum") {
  for (std::uint64_t seed : {1ULL, 2ULL}) {
    for (const char* id : {"random-step", "random-smooth"}) {
      const GridFunction f = make_builtin(id, 1, 8, seed);
      for (double lambda : {0.0, 0.25}) {
        for (const Exponent& p : {Exponent::finite(1), Exponent::finite(2)}) {
          const double var = var_1d(f, 1, lambda, p);
          const double pack = var_1d_packing_form(f, 1, lambda, p);
          CHECK(var == doctest::Approx(2.0 * pack).epsilon(4.0 * std::ldexp(1.0, -8)));
        }
      }
    }
  }
}

TEST_CASE("factor for k = 2 recorded empirically") {
  const GridFunction f = make_builtin("random-smooth", 1, 5, 11);
  const double var = var_1d(f, 2, 0.0, Exponent::finite(1));
  const double pack = var_1d_packing_form(f, 2, 0.0, Exponent::finite(1));
  // The exact factor-2 proof is stated for k = 1 only; here the ratio is
  // just required to stay within the Whitney-equivalence envelope.
  if (pack > 1e-12) {
    const double ratio = var / pack;
    CHECK(ratio > 0.2);
    CHECK(ratio < 20.0);
  }
}

TEST_CASE("BMO seminorm") {
  CHECK(bmo_seminorm(GridFunction::constant(1, 4, 3.0), Exponent::infinity(), 4).value == 0.0);

  // f = +-1 on halves: sup over cubes of the mean absolute deviation is 1.
  std::vector<double> pm(16, 1.0);
  for (int i = 0; i < 8; ++i) pm[static_cast<std::size_t>(i)] = -1.0;
  const GridFunction f(1, 4, std::move(pm));
  const NormReport rep = bmo_seminorm(f, Exponent::infinity(), 4);
  CHECK(rep.value == doctest::Approx(1.0));
  REQUIRE(rep.certificate.size() == 1);
  CHECK(rep.certificate.cubes[0] == DyadicCube::root(1));
}

TEST_CASE("BMO sandwich against the V-functional per packing") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 30; ++trial) {
    const int d = 1 + (trial % 2);
    const int L = d == 1 ? 3 : 2;
    const GridFunction f = random_grid(d, L, rng());
    for (const Exponent& p : {Exponent::finite(2), Exponent::infinity()}) {
      const double lambda = 1.0 - p.inv();
      const Kappa kappa(1, d, lambda, p, Exponent::finite(1));
      // Random packing from the enumeration.
      std::vector<Packing> all = all_packings(d, L);
      const Packing& pi = all[rng() % all.size()];
      if (pi.empty()) continue;
      const double gv = gamma(f, pi, kappa);
      const double gb = gamma_bmo(f, pi, p);
      CHECK(gv <= gb * (1 + 1e-9) + 1e-12);
      CHECK(gb <= 2.0 * gv * (1 + 1e-9) + 1e-12);
    }
  }
}

TEST_CASE("Morrey norm") {
  const GridFunction c = GridFunction::constant(2, 3, -1.5);
  const NormReport rep = morrey_norm(c, 2.0, 0.5, 3);
  CHECK(rep.value == doctest::Approx(1.5));
  REQUIRE(rep.certificate.size() == 1);
  CHECK(rep.certificate.cubes[0] == DyadicCube::root(2));

  // Indicator of a single level-2 cell: the cell itself attains 2^{-L s}.
  std::vector<double> ind(16, 0.0);
  ind[5] = 1.0;
  const GridFunction f(1, 2 * 2, std::vector<double>(16, 0.0));
  std::vector<double> v(16, 0.0);
  v[5] = 1.0;
  const GridFunction g(1, 4, std::move(v));
  const double s = 0.4;
  const NormReport rg = morrey_norm(g, 2.0, s, 4);
  CHECK(rg.value == doctest::Approx(std::pow(2.0, -4.0 * s)).epsilon(1e-12));
  CHECK(rg.certificate.cubes[0].level == 4);

  // Homogeneity.
  const GridFunction g3 = scale(g, -3.0);
  CHECK(morrey_norm(g3, 2.0, s, 4).value == doctest::Approx(3.0 * rg.value).epsilon(1e-12));

  CHECK_THROWS_AS(morrey_norm(g, 2.0, 0.7, 4), std::invalid_argument);
}

TEST_CASE("discrete BV^k surrogate") {
  const GridFunction lin = make_builtin("linear", 1, 8);
  CHECK(bvk_seminorm(lin, 1) == doctest::Approx(1.0).epsilon(0.01));
  CHECK(bvk_seminorm(GridFunction::constant(2, 3, 5.0), 1) == 0.0);

  // Bounded ratio against the V seminorm with the BV^k kappa across
  // resolutions (consistency diagnostic).
  const Exponent q = Exponent::finite(2);
  double lo = 1e300, hi = 0.0;
  for (int m : {4, 5, 6, 7, 8}) {
    const GridFunction f = make_builtin("sine", 1, m);
    const double lambda = 1.0 / 1.0 - (1.0 - q.inv());  // k/d - 1/q' with k = d = 1
    const Kappa kappa(1, 1, lambda, Exponent::finite(1), q);
    const double ratio = bvk_seminorm(f, 1) / v_seminorm(f, kappa, m).value;
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }
  CHECK(hi / lo < 3.0);
}
