// Acceptance suite: one line per criterion, nonzero exit if any fails.
// Every tolerance is pinned here, in code.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <vector>

#include "bvkit/approx.hpp"
#include "bvkit/atoms.hpp"
#include "bvkit/builtins.hpp"
#include "bvkit/variation.hpp"

using namespace bvkit;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(int id, const char* name, bool ok, const std::string& detail) {
  std::printf("%s  criterion %2d  %-22s %s\n", ok ? "PASS" : "FAIL", id, name,
              detail.c_str());
  if (!ok) ++failures;
}

double elapsed(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

GridFunction random_grid(int d, int m, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> v(static_cast<std::size_t>(std::int64_t(1) << (m * d)));
  for (auto& x : v) x = gauss(rng);
  return GridFunction(d, m, std::move(v));
}

GridFunction random_moment_free(int d, int m, int k, std::uint64_t seed) {
  const GridFunction raw = random_grid(d, m, seed);
  const PolyBasis basis = PolyBasis::total_degree(d, k);
  const Eigen::MatrixXd A = detail::basis_matrix(raw, raw.whole_window(), basis);
  const Eigen::VectorXd v = detail::window_values(raw, raw.whole_window());
  const Eigen::VectorXd c = (A.transpose() * A).ldlt().solve(A.transpose() * v);
  const Eigen::VectorXd r = v - A * c;
  std::vector<double> out(r.data(), r.data() + r.size());
  return GridFunction(d, m, std::move(out));
}

double finish_p(double raw, const Exponent& p) {
  if (p.is_inf()) return raw;
  const double pv = p.value();
  return pv == 1.0 ? raw : (pv == 2.0 ? std::sqrt(raw) : std::pow(raw, 1.0 / pv));
}

// ---------------------------------------------------------------------------
// 1. DP exactness against exhaustive packing enumeration (bitwise).
void criterion_dp_exactness() {
  const auto t0 = Clock::now();
  const Exponent exps[3] = {Exponent::finite(1), Exponent::finite(2), Exponent::infinity()};
  const std::vector<std::pair<int, int>> settings = {{1, 1}, {1, 2}, {1, 3},
                                                     {1, 4}, {2, 1}, {2, 2}};
  int mismatches = 0, total = 0;
  for (auto [d, L] : settings) {
    for (int t = 0; t < 50; ++t) {
      const GridFunction f = random_grid(d, L, 1000 * d + 10 * L + t);
      const Kappa kappa(1 + t % 2, d, (t % 4 < 2) ? 0.0 : 0.25, exps[t % 3],
                        exps[(t / 3) % 3]);
      ECache cache(f);
      cache.precompute(L, kappa.k, kappa.q);
      const double dp = v_seminorm(f, kappa, L, &cache).value;
      double raw = 0.0;
      enumerate_packings(d, L, [&](const Packing& pi) {
        raw = std::max(raw, gamma_raw(f, pi, kappa, &cache));
      });
      const double brute = finish_p(raw, kappa.p);
      ++total;
      if (dp != brute) ++mismatches;  // bitwise comparison
    }
  }
  const double secs = elapsed(t0);
  char buf[160];
  std::snprintf(buf, sizeof buf, "(%d instances, %d mismatches, %.1fs < 30s)", total,
                mismatches, secs);
  report(1, "dp-exactness", mismatches == 0 && secs < 30.0, buf);
}

// ---------------------------------------------------------------------------
// 2. Isometry at p = q, lambda = 0: |v_seminorm - E_{kq}(f;Q^d)| <= 1e-9.
void criterion_isometry() {
  const Exponent exps[3] = {Exponent::finite(1), Exponent::finite(2), Exponent::infinity()};
  double worst = 0.0;
  for (const Exponent& pq : exps) {
    for (int k = 1; k <= 2; ++k) {
      for (int d = 1; d <= 2; ++d) {
        const int m = d == 1 ? 5 : 3;
        for (int t = 0; t < 50; ++t) {
          const GridFunction f = random_grid(d, m, 7000 + 100 * k + 10 * d + t);
          const Kappa kappa(k, d, 0.0, pq, pq);
          ECache cache(f);
          const double v = v_seminorm(f, kappa, m, &cache).value;
          const double e = cache.error(DyadicCube::root(d), k, pq);
          worst = std::max(worst, std::abs(v - e));
        }
      }
    }
  }
  char buf[120];
  std::snprintf(buf, sizeof buf, "(max |V - E| = %.2e <= 1e-9)", worst);
  report(2, "isometry-oracle", worst <= 1e-9, buf);
}

// ---------------------------------------------------------------------------
// 3. Null space: monomials of degree <= k-1 have seminorm <= 1e-9.
void criterion_null_space() {
  double worst = 0.0;
  for (int d = 1; d <= 2; ++d) {
    for (int k = 1; k <= 3; ++k) {
      const PolyBasis basis = PolyBasis::total_degree(d, k);
      for (const auto& alpha : basis.exponents) {
        std::string spec = "monomial:";
        for (std::size_t i = 0; i < alpha.size(); ++i) {
          spec += (i ? "," : "") + std::to_string(alpha[i]);
        }
        const GridFunction f = make_builtin(spec, d, 3);
        for (const Exponent& q : {Exponent::finite(2), Exponent::infinity()}) {
          const Kappa kappa(k, d, 0.25, Exponent::finite(2), q);
          worst = std::max(worst, v_seminorm(f, kappa, 3).value);
        }
      }
    }
  }
  char buf[120];
  std::snprintf(buf, sizeof buf, "(max seminorm over monomials = %.2e <= 1e-9)", worst);
  report(3, "null-space", worst <= 1e-9, buf);
}

// ---------------------------------------------------------------------------
// 4. var_1d = 2 * interval-packing supremum, relative error <= 4*2^-m, m=10.
void criterion_var_factor2() {
  const int m = 10;
  const double tol = 4.0 * std::ldexp(1.0, -m);
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const char* id = i % 2 == 0 ? "random-step" : "random-smooth";
    const GridFunction f = make_builtin(id, 1, m, 40 + i);
    for (const Exponent& p : {Exponent::finite(1), Exponent::finite(2)}) {
      for (double lambda : {0.0, 0.5 * (1.0 - p.inv())}) {
        const double var = var_1d(f, 1, lambda, p);
        const double pack = var_1d_packing_form(f, 1, lambda, p);
        const double rel = std::abs(var - 2.0 * pack) / std::max(var, 1e-300);
        worst = std::max(worst, rel);
      }
    }
  }
  char buf[120];
  std::snprintf(buf, sizeof buf, "(max relative error = %.2e <= %.2e)", worst, tol);
  report(4, "var-factor-2", worst <= tol, buf);
}

// ---------------------------------------------------------------------------
// 5. Pairing inequality on 1000 random (f, chain) pairs; zero violations.
void criterion_pairing() {
  std::mt19937_64 rng(505);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const std::vector<Packing> pool1 = all_packings(1, 2);
  const std::vector<Packing> pool2 = all_packings(2, 1);
  const Exponent ps[3] = {Exponent::finite(1), Exponent::finite(2), Exponent::infinity()};
  const Exponent qs[2] = {Exponent::finite(2), Exponent::infinity()};
  int violations = 0, checked = 0;
  while (checked < 1000) {
    const int d = 1 + int(rng() % 2);
    const int m = d == 1 ? 4 : 3;
    const int k = 1 + int(rng() % 2);
    const double lambda = (rng() % 2) ? 0.25 : 0.0;
    const Kappa kappa(k, d, lambda, ps[rng() % 3], qs[rng() % 2]);
    const GridFunction f = random_grid(d, m, rng());
    const std::vector<Packing>& pool = d == 1 ? pool1 : pool2;
    const Packing& pi = pool[rng() % pool.size()];
    if (pi.empty()) continue;
    Chain chain;
    for (const auto& cube : pi.cubes) {
      try {
        auto [atom, scale] = make_atom(random_grid(d, m, rng()), cube, kappa);
        (void)scale;
        chain.packing.cubes.push_back(cube);
        chain.atoms.push_back(std::move(atom));
        chain.coeffs.push_back(gauss(rng));
      } catch (const std::domain_error&) {
      }
    }
    if (chain.atoms.empty()) continue;
    const PairingCheck check = check_pairing_inequality(f, chain, kappa);
    if (!check.ok) ++violations;
    if (check.gamma_value > check.seminorm_value * (1 + 1e-9) + 1e-12) ++violations;
    ++checked;
  }
  char buf[120];
  std::snprintf(buf, sizeof buf, "(%d pairs, %d violations)", checked, violations);
  report(5, "pairing-inequality", violations == 0, buf);
}

// ---------------------------------------------------------------------------
// 6. Duality gap at tiny scale: exact dual oracle vs decomposition upper.
void criterion_duality_gap() {
  const auto t0 = Clock::now();
  const Kappa kappa(1, 1, 0.0, Exponent::finite(2), Exponent::finite(2));
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const GridFunction g = random_moment_free(1, 2, 1, 600 + i);
    const GapReport gap = duality_gap(g, kappa, {}, true);
    worst = std::max(worst, gap.relative_gap);
  }
  const double secs = elapsed(t0);
  char buf[120];
  std::snprintf(buf, sizeof buf, "(max relative gap = %.4f <= 0.05, %.1fs < 120s)", worst,
                secs);
  report(6, "duality-gap", worst <= 0.05 && secs < 120.0, buf);
}

// ---------------------------------------------------------------------------
// 7. Mollifier seminorm bound (5% slack) and L2 convergence (>= 4x drop).
void criterion_mollifier() {
  bool ok = true;
  std::string detail;
  double worst_excess = 0.0;
  for (int d = 1; d <= 2; ++d) {
    const int m = 7;
    const GridFunction f = make_builtin("sine", d, m);
    std::vector<GridFunction> mollified;
    std::vector<int> ns = {2, 4, 8};
    for (int n : ns) mollified.push_back(mollify(f, MollifierConfig{n}));

    for (int k = 1; k <= 2; ++k) {
      for (const Exponent& q : {Exponent::finite(2), Exponent::infinity()}) {
        ECache cache_f(f);
        cache_f.precompute(m, k, q);
        std::vector<ECache> caches;
        caches.reserve(ns.size());
        for (const auto& fn : mollified) {
          caches.emplace_back(fn);
          caches.back().precompute(m, k, q);
        }
        for (double lambda : {0.0, 0.25}) {
          for (const Exponent& p :
               {Exponent::finite(1), Exponent::finite(2), Exponent::infinity()}) {
            const Kappa kappa(k, d, lambda, p, q);
            const double base = v_seminorm(f, kappa, m, &cache_f).value;
            for (std::size_t i = 0; i < ns.size(); ++i) {
              const double lambda_n = double(ns[i]) / (ns[i] + 1);
              const double rhs =
                  std::pow(lambda_n, kappa.d * (kappa.lambda - kappa.q.inv())) * base;
              const double lhs = v_seminorm(mollified[i], kappa, m, &caches[i]).value;
              if (lhs > rhs * 1.05) {
                ok = false;
                worst_excess = std::max(worst_excess, lhs / std::max(rhs, 1e-300));
              }
            }
          }
        }
      }
    }
  }
  // The public op agrees with the cached computation on a spot check.
  {
    const GridFunction f1 = make_builtin("sine", 1, 7);
    const BoundCheck spot =
        mollifier_bound_check(f1, Kappa(1, 1, 0.0, Exponent::finite(1), Exponent::infinity()),
                              4, 7);
    ok = ok && spot.ok;
  }
  // Convergence: ||f - f_n||_2 drops at least 4x from n=2 to n=16.
  double drop1 = 0.0, drop2 = 0.0;
  {
    const Kappa k2(1, 1, 0.0, Exponent::finite(2), Exponent::finite(2));
    const auto rows = convergence_study(make_builtin("sine", 1, 7), k2, {2, 4, 8, 16});
    drop1 = rows.front().err_q / rows.back().err_q;
    const Kappa k2d(1, 2, 0.0, Exponent::finite(2), Exponent::finite(2));
    const auto rows2 = convergence_study(make_builtin("sine", 2, 6), k2d, {2, 4, 8, 16});
    drop2 = rows2.front().err_q / rows2.back().err_q;
    ok = ok && drop1 >= 4.0 && drop2 >= 4.0;
  }
  char buf[160];
  std::snprintf(buf, sizeof buf, "(bound slack 5%%; L2 drop x%.1f (1D), x%.1f (2D) >= 4)",
                drop1, drop2);
  report(7, "mollifier-bound", ok, buf);
}

// ---------------------------------------------------------------------------
// 8. Little-space criterion: smooth decays with slope >= (k-s)/d - 0.2,
//    step stays flat (slope <= 0.05).
void criterion_little_space() {
  const GridFunction smooth = make_builtin("sine", 1, 9);
  const Kappa ks(1, 1, 0.0, Exponent::finite(2), Exponent::finite(2));  // s = 0 < k
  ECache cache_s(smooth);
  const auto prof = little_v_profile(smooth, ks, {0, 1, 2, 3, 4, 5}, &cache_s);
  const double target = (ks.k - smoothness(ks)) / ks.d - 0.2;

  const GridFunction step = make_builtin("step", 1, 9);
  const Kappa kf(1, 1, 0.0, Exponent::finite(1), Exponent::infinity());
  ECache cache_f(step);
  const auto flat = little_v_profile(step, kf, {0, 1, 2, 3, 4, 5}, &cache_f);

  const bool ok = prof.loglog_slope >= target && std::abs(flat.loglog_slope) <= 0.05;
  char buf[140];
  std::snprintf(buf, sizeof buf, "(smooth slope %.3f >= %.2f; step slope %.3f <= 0.05)",
                prof.loglog_slope, target, flat.loglog_slope);
  report(8, "little-space", ok, buf);
}

// ---------------------------------------------------------------------------
// 9. Degeneracy at s = k + 1/2: seminorm diverges with max_level.
void criterion_degeneracy() {
  // Tensor sine input; kappa = (k=1, d=1, lambda=1/2, p=1, q=inf) has
  // s = 1.5 = k + 1/2.
  const int m = 10;
  const GridFunction f = sample(
      [](std::span<const double> x) { return std::sin(8.0 * M_PI * x[0]); }, 1, m, 4);
  const Kappa kappa(1, 1, 0.5, Exponent::finite(1), Exponent::infinity());
  ECache cache(f);
  cache.precompute(6, kappa.k, kappa.q);
  std::vector<double> values;
  bool increasing = true;
  for (int L = 2; L <= 6; ++L) {
    const double v = v_seminorm(f, kappa, L, &cache).value;
    if (!values.empty() && v <= values.back()) increasing = false;
    values.push_back(v);
  }
  const double ratio = values.back() / values.front();
  char buf[120];
  std::snprintf(buf, sizeof buf, "(strictly increasing: %s; final/initial = %.2f >= 4)",
                increasing ? "yes" : "no", ratio);
  report(9, "degeneracy", increasing && ratio >= 4.0, buf);
}

// ---------------------------------------------------------------------------
// 10. BMO sandwich per packing: gamma_V <= gamma_BMO <= 2 gamma_V.
void criterion_bmo_sandwich() {
  std::mt19937_64 rng(707);
  const std::vector<Packing> pool1 = all_packings(1, 3);
  const std::vector<Packing> pool2 = all_packings(2, 2);
  int violations = 0, checked = 0;
  while (checked < 200) {
    const int d = 1 + int(rng() % 2);
    const int m = d == 1 ? 3 : 2;
    const Exponent p = (rng() % 2) ? Exponent::finite(2) : Exponent::infinity();
    const double lambda = 1.0 - p.inv();
    const Kappa kappa(1, d, lambda, p, Exponent::finite(1));
    const GridFunction f = random_grid(d, m, rng());
    const std::vector<Packing>& pool = d == 1 ? pool1 : pool2;
    Packing pi = pool[rng() % pool.size()];
    std::erase_if(pi.cubes, [m](const DyadicCube& q) { return q.level > m; });
    if (pi.empty()) continue;
    const double gv = gamma(f, pi, kappa);
    const double gb = gamma_bmo(f, pi, p);
    if (gv > gb * (1 + 1e-9) + 1e-12) ++violations;
    if (gb > 2.0 * gv * (1 + 1e-9) + 1e-12) ++violations;
    ++checked;
  }
  char buf[120];
  std::snprintf(buf, sizeof buf, "(%d random (f,pi), %d violations)", checked, violations);
  report(10, "bmo-sandwich", violations == 0, buf);
}

// ---------------------------------------------------------------------------
// 11. Jackson bound ||f - T_n f||_inf <= d omega_{1,inf}(f;1/n) and axis
//     commutation to 1e-12.
void criterion_jackson() {
  bool bound_ok = true;
  double worst_comm = 0.0;
  for (int d = 1; d <= 2; ++d) {
    const int m = d == 1 ? 8 : 6;
    std::vector<GridFunction> funcs;
    for (int i = 0; i < 18; ++i) funcs.push_back(make_builtin("random-smooth", d, m, 900 + i));
    funcs.push_back(make_builtin("sine", d, m));
    funcs.push_back(make_builtin("linear", d, m));
    for (const auto& f : funcs) {
      for (int n : {4, 8, 16}) {
        const GridFunction tn = jackson_approx(f, n);
        double err = 0.0;
        for (std::int64_t c = 0; c < f.size(); ++c) {
          err = std::max(err, std::abs(f[c] - tn[c]));
        }
        const double omega = modulus(f, 1, Exponent::infinity(), 1.0 / n);
        if (err > d * omega * (1 + 1e-9) + 1e-12) bound_ok = false;
      }
    }
    if (d == 2) {
      const GridFunction f = random_grid(2, m, 999);
      const GridFunction ab = jackson_axis(jackson_axis(f, 8, 0), 8, 1);
      const GridFunction ba = jackson_axis(jackson_axis(f, 8, 1), 8, 0);
      for (std::int64_t c = 0; c < f.size(); ++c) {
        worst_comm = std::max(worst_comm, std::abs(ab[c] - ba[c]));
      }
    }
  }
  char buf[140];
  std::snprintf(buf, sizeof buf, "(bound holds on 40 inputs; commutation gap %.1e <= 1e-12)",
                worst_comm);
  report(11, "jackson-bound", bound_ok && worst_comm <= 1e-12, buf);
}

}  // namespace

int main() {
  const auto t0 = Clock::now();
  criterion_dp_exactness();
  criterion_isometry();
  criterion_null_space();
  criterion_var_factor2();
  criterion_pairing();
  criterion_duality_gap();
  criterion_mollifier();
  criterion_little_space();
  criterion_degeneracy();
  criterion_bmo_sandwich();
  criterion_jackson();
  std::printf("%s  (%d of 11 criteria, %.1fs total)\n", failures == 0 ? "PASS" : "FAIL",
              11 - failures, elapsed(t0));
  return failures == 0 ? 0 : 1;
}
