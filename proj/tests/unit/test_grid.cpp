#include <doctest.h>

#include <random>

#include "bvkit/grid.hpp"

using namespace bvkit;

namespace {

GridFunction random_grid(int d, int m, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> v(static_cast<std::size_t>(std::int64_t(1) << (m * d)));
  for (auto& x : v) x = gauss(rng);
  return GridFunction(d, m, std::move(v));
}

}  // namespace

TEST_CASE("lq_norm basics") {
  const auto c = GridFunction::constant(2, 3, -2.5);
  CHECK(lq_norm(c, Exponent::finite(1)) == doctest::Approx(2.5));
  CHECK(lq_norm(c, Exponent::finite(2)) == doctest::Approx(2.5));
  CHECK(lq_norm(c, Exponent::infinity()) == doctest::Approx(2.5));

  // Indicator of half the cells has L_1 mass 1/2.
  std::vector<double> vals(16, 0.0);
  for (int i = 0; i < 8; ++i) vals[static_cast<std::size_t>(i)] = 1.0;
  const GridFunction ind(1, 4, std::move(vals));
  CHECK(lq_norm(ind, Exponent::finite(1)) == doctest::Approx(0.5));

  const GridFunction pm(1, 1, {1.0, -1.0});
  CHECK(lq_norm(pm, Exponent::finite(2)) == doctest::Approx(1.0));
}

TEST_CASE("lq_norm rejects q < 1 via Exponent") {
  CHECK_THROWS_AS(Exponent::finite(0.25), std::invalid_argument);
}

TEST_CASE("pair identities") {
  const auto f = random_grid(2, 3, 7);
  const auto zero = GridFunction::constant(2, 3, 0.0);
  const auto one = GridFunction::constant(2, 3, 1.0);
  CHECK(pair(f, zero) == 0.0);
  double mean = 0.0;
  for (double v : f.values()) mean += v;
  mean /= static_cast<double>(f.size());
  CHECK(pair(one, f) == doctest::Approx(mean).epsilon(1e-12));
  CHECK(pair(f, f) == doctest::Approx(lq_norm(f, Exponent::finite(2)) *
                                      lq_norm(f, Exponent::finite(2))));
}

TEST_CASE("cell averages") {
  const GridFunction f(1, 1, {0.0, 1.0});
  CHECK(cell_average(f, DyadicCube::root(1)) == doctest::Approx(0.5));
  CHECK(cell_average(f, DyadicCube::root(1).child(0)) == 0.0);
  CHECK(cell_average(GridFunction::constant(2, 2, 3.0), DyadicCube::root(2).child(2)) == 3.0);
  CHECK_THROWS_AS(cell_average(f, DyadicCube(2, {0})), std::invalid_argument);
}

TEST_CASE("sample projects cell averages") {
  const auto c5 = sample([](std::span<const double>) { return 5.0; }, 2, 2, 3);
  for (double v : c5.values()) CHECK(v == 5.0);

  const auto lin1 = sample([](std::span<const double> x) { return x[0]; }, 1, 1, 1);
  CHECK(lin1[0] == doctest::Approx(0.25));
  CHECK(lin1[1] == doctest::Approx(0.75));

  // Supersampling converges to the exact cell averages (already exact for
  // linear integrands at any supersample since midpoints average out).
  const auto lin8 = sample([](std::span<const double> x) { return x[0]; }, 1, 1, 8);
  CHECK(lin8[0] == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("norm axioms on random pairs") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> uni(-2.0, 2.0);
  for (int trial = 0; trial < 20; ++trial) {
    const auto f = random_grid(1, 4, 100 + trial);
    const auto g = random_grid(1, 4, 200 + trial);
    const double a = uni(rng);
    for (const Exponent& q : {Exponent::finite(1), Exponent::finite(2), Exponent::infinity()}) {
      std::vector<double> scaled(f.values().begin(), f.values().end());
      for (auto& x : scaled) x *= a;
      CHECK(lq_norm(GridFunction(1, 4, scaled), q) ==
            doctest::Approx(std::abs(a) * lq_norm(f, q)).epsilon(1e-12));

      std::vector<double> summed(f.values().begin(), f.values().end());
      for (std::size_t i = 0; i < summed.size(); ++i) summed[i] += g[static_cast<std::int64_t>(i)];
      CHECK(lq_norm(GridFunction(1, 4, summed), q) <=
            lq_norm(f, q) + lq_norm(g, q) + 1e-12);

      // Hoelder against the conjugate exponent.
      CHECK(std::abs(pair(f, g)) <= lq_norm(f, q) * lq_norm(g, q.conjugate()) + 1e-12);
    }
  }
}

TEST_CASE("refinement preserves norms and pairings") {
  const auto f = random_grid(2, 2, 42);
  const auto g = random_grid(2, 2, 43);
  const auto f2 = f.refine(2);
  const auto g2 = g.refine(2);
  for (const Exponent& q : {Exponent::finite(1), Exponent::finite(2), Exponent::infinity()}) {
    CHECK(lq_norm(f2, q) == doctest::Approx(lq_norm(f, q)).epsilon(1e-12));
  }
  CHECK(pair(f2, g2) == doctest::Approx(pair(f, g)).epsilon(1e-12));
}

TEST_CASE("shape mismatch rejected") {
  const auto f = random_grid(1, 3, 1);
  const auto g = random_grid(1, 4, 2);
  CHECK_THROWS_AS(pair(f, g), std::invalid_argument);
  CHECK_THROWS_AS(GridFunction(1, 2, {1.0, 2.0, 3.0}), std::invalid_argument);
  CHECK_THROWS_AS(GridFunction(1, 1, {1.0, std::nan("")}), std::invalid_argument);
}
