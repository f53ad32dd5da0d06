#include "bvkit/variation.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace bvkit {

namespace {

// Child ordinal of `q` at depth `t` (1-based) along its root path.
std::uint32_t child_ordinal_at(const DyadicCube& q, int t) {
  std::uint32_t ord = 0;
  const int shift = q.level - t;
  for (int i = 0; i < q.dim(); ++i) {
    ord |= ((q.index[i] >> shift) & 1u) << i;
  }
  return ord;
}

// DFS (pre-order) comparison of antichain members: compare root paths.
bool dfs_less(const DyadicCube& a, const DyadicCube& b) {
  const int depth = std::min(a.level, b.level);
  for (int t = 1; t <= depth; ++t) {
    const std::uint32_t oa = child_ordinal_at(a, t);
    const std::uint32_t ob = child_ordinal_at(b, t);
    if (oa != ob) return oa < ob;
  }
  return a.level < b.level;
}

double term_weight(double error, double volume, const Kappa& kappa) {
  const double w = std::pow(volume, -kappa.lambda) * error;
  return kappa.p.is_inf() ? w : std::pow(w, kappa.p.value());
}

double finish(double raw, const Exponent& p) {
  if (p.is_inf()) return raw;
  const double pv = p.value();
  return pv == 1.0 ? raw : (pv == 2.0 ? std::sqrt(raw) : std::pow(raw, 1.0 / pv));
}

}  // namespace

std::size_t ECache::KeyHash::operator()(const Key& key) const {
  std::size_t h = DyadicCubeHash()(key.cube);
  h ^= std::hash<int>()(key.k) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  h ^= std::hash<double>()(key.q_inf ? -1.0 : key.q_value) + (h << 6) + (h >> 2);
  return h;
}

namespace {

std::size_t flat_cube_index(const DyadicCube& cube) {
  std::size_t flat = 0;
  for (int i = cube.dim() - 1; i >= 0; --i) {
    flat = (flat << cube.level) | cube.index[static_cast<std::size_t>(i)];
  }
  return flat;
}

}  // namespace

double ECache::error(const DyadicCube& cube, int k, const Exponent& q) {
  if (dense_ready_ && k == dense_k_ && q == dense_q_ &&
      cube.level < static_cast<int>(dense_.size())) {
    return dense_[static_cast<std::size_t>(cube.level)][flat_cube_index(cube)];
  }
  Key key{cube, k, q.is_inf(), q.is_inf() ? 0.0 : q.value()};
  auto it = table_.find(key);
  if (it != table_.end()) return it->second;
  const double e = detail::fit_window(*f_, f_->window(cube), k, q, false).error;
  table_.emplace(std::move(key), e);
  return e;
}

void ECache::precompute(int max_level, int k, const Exponent& q) {
  dense_ready_ = false;
  dense_.assign(static_cast<std::size_t>(max_level + 1), {});
  const int d = f_->dim();
  for (int level = 0; level <= max_level; ++level) {
    dense_[static_cast<std::size_t>(level)].resize(std::size_t(1) << (level * d));
  }
  std::function<void(const DyadicCube&)> walk = [&](const DyadicCube& cube) {
    dense_[static_cast<std::size_t>(cube.level)][flat_cube_index(cube)] =
        detail::fit_window(*f_, f_->window(cube), k, q, false).error;
    if (cube.level < max_level) {
      for (const auto& child : cube.children()) walk(child);
    }
  };
  walk(DyadicCube::root(d));
  dense_k_ = k;
  dense_q_ = q;
  dense_ready_ = true;
}

namespace {

double cube_error(const GridFunction& f, const DyadicCube& cube, const Kappa& kappa,
                  ECache* cache) {
  if (cache) return cache->error(cube, kappa.k, kappa.q);
  return detail::fit_window(f, f.window(cube), kappa.k, kappa.q, false).error;
}

// Tree-ordered aggregate over a DFS-sorted antichain slice, matching the
// summation structure of the DP exactly. The node cube is mutated in place
// while descending to avoid per-child allocations in hot oracle loops.
double tree_aggregate(const GridFunction& f, const Kappa& kappa, ECache* cache,
                      DyadicCube& node, const std::vector<const DyadicCube*>& cubes,
                      std::size_t first, std::size_t last) {
  if (last - first == 1 && *cubes[first] == node) {
    return term_weight(cube_error(f, node, kappa, cache), node.volume(), kappa);
  }
  const int d = node.dim();
  const std::uint32_t fan = std::uint32_t(1) << d;
  double acc = 0.0;
  std::size_t pos = first;
  for (std::uint32_t c = 0; c < fan && pos < last; ++c) {
    std::size_t end = pos;
    while (end < last && child_ordinal_at(*cubes[end], node.level + 1) == c) ++end;
    if (end == pos) continue;
    ++node.level;
    for (int i = 0; i < d; ++i) {
      node.index[static_cast<std::size_t>(i)] =
          (node.index[static_cast<std::size_t>(i)] << 1) | ((c >> i) & 1u);
    }
    const double sub = tree_aggregate(f, kappa, cache, node, cubes, pos, end);
    for (int i = 0; i < d; ++i) node.index[static_cast<std::size_t>(i)] >>= 1;
    --node.level;
    acc = kappa.p.is_inf() ? std::max(acc, sub) : acc + sub;
    pos = end;
  }
  return acc;
}

}  // namespace

double gamma_raw(const GridFunction& f, const Packing& pi, const Kappa& kappa,
                 ECache* cache) {
  if (kappa.d != f.dim()) throw std::invalid_argument("gamma: dimension mismatch");
  if (pi.empty()) return 0.0;
  std::vector<const DyadicCube*> cubes;
  cubes.reserve(pi.size());
  for (const auto& q : pi.cubes) cubes.push_back(&q);
  auto less = [](const DyadicCube* a, const DyadicCube* b) { return dfs_less(*a, *b); };
  if (!std::is_sorted(cubes.begin(), cubes.end(), less)) {
    std::sort(cubes.begin(), cubes.end(), less);
  }
  DyadicCube scratch = DyadicCube::root(f.dim());
  return tree_aggregate(f, kappa, cache, scratch, cubes, 0, cubes.size());
}

double gamma(const GridFunction& f, const Packing& pi, const Kappa& kappa, ECache* cache) {
  return finish(gamma_raw(f, pi, kappa, cache), kappa.p);
}

namespace {

struct PackingDp {
  const GridFunction& f;
  int max_level;
  bool p_inf;
  double eps;  // cubes with volume > eps cannot be selected; inf disables
  std::function<double(const DyadicCube&)> term;
  std::unordered_map<DyadicCube, double, DyadicCubeHash> best;

  bool selectable(const DyadicCube& q) const { return q.volume() <= eps; }

  double run(const DyadicCube& q) {
    const double own = selectable(q) ? term(q) : 0.0;
    double combined = 0.0;
    if (q.level < max_level) {
      const std::uint32_t fan = std::uint32_t(1) << q.dim();
      for (std::uint32_t c = 0; c < fan; ++c) {
        const double sub = run(q.child(c));
        combined = p_inf ? std::max(combined, sub) : combined + sub;
      }
    }
    const double value = std::max(own, combined);
    best.emplace(q, value);
    return value;
  }

  void backtrack(const DyadicCube& q, Packing& out) const {
    const double value = best.at(q);
    if (value <= 0.0) return;  // empty packings never enter certificates
    const double own = selectable(q) ? term(q) : 0.0;
    if (own >= value) {
      out.cubes.push_back(q);
      return;
    }
    if (q.level < max_level) {
      const std::uint32_t fan = std::uint32_t(1) << q.dim();
      for (std::uint32_t c = 0; c < fan; ++c) {
        auto it = best.find(q.child(c));
        if (it != best.end() && it->second > 0.0) backtrack(it->first, out);
      }
    }
  }
};

NormReport run_packing_sup(const GridFunction& f, int max_level, bool p_inf, double eps,
                           const std::function<double(const DyadicCube&)>& term,
                           const Exponent& p, const std::string& kind) {
  if (max_level < 0 || max_level > f.resolution()) {
    throw std::invalid_argument(kind + ": max_level must be in [0, m]");
  }
  PackingDp dp{f, max_level, p_inf, eps, term, {}};
  const double raw = dp.run(DyadicCube::root(f.dim()));
  NormReport report;
  report.value = finish(raw, p);
  report.kind = kind;
  dp.backtrack(DyadicCube::root(f.dim()), report.certificate);
  return report;
}

constexpr double kInfEps = std::numeric_limits<double>::infinity();

}  // namespace

NormReport v_seminorm(const GridFunction& f, const Kappa& kappa, int max_level,
                      ECache* cache) {
  if (kappa.d != f.dim()) throw std::invalid_argument("v_seminorm: dimension mismatch");
  auto term = [&f, &kappa, cache](const DyadicCube& q) {
    return term_weight(cube_error(f, q, kappa, cache), q.volume(), kappa);
  };
  NormReport report =
      run_packing_sup(f, max_level, kappa.p.is_inf(), kInfEps, term, kappa.p, "v_seminorm");
  report.meta = {{"k", double(kappa.k)},     {"d", double(kappa.d)},
                 {"lambda", kappa.lambda},   {"p_inv", kappa.p.inv()},
                 {"q_inv", kappa.q.inv()},   {"m", double(f.resolution())},
                 {"max_level", double(max_level)}};
  return report;
}

NormReport v_seminorm_restricted(const GridFunction& f, const Kappa& kappa, double eps,
                                 int max_level, ECache* cache) {
  if (!(eps > 0.0)) throw std::invalid_argument("v_seminorm_restricted: eps must be > 0");
  auto term = [&f, &kappa, cache](const DyadicCube& q) {
    return term_weight(cube_error(f, q, kappa, cache), q.volume(), kappa);
  };
  NormReport report = run_packing_sup(f, max_level, kappa.p.is_inf(), eps, term, kappa.p,
                                      "v_seminorm_restricted");
  report.meta = {{"eps", eps}, {"max_level", double(max_level)}};
  return report;
}

LittleVProfile little_v_profile(const GridFunction& f, const Kappa& kappa,
                                const std::vector<int>& levels, ECache* cache) {
  LittleVProfile profile;
  const int max_level = f.resolution();
  double peak = 0.0;
  for (int level : levels) {
    const double eps = std::ldexp(1.0, -level * f.dim());
    const double value = v_seminorm_restricted(f, kappa, eps, max_level, cache).value;
    profile.points.push_back({eps, value});
    peak = std::max(peak, value);
  }
  // Log-log least squares on the usable rows.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (const auto& pt : profile.points) {
    if (pt.value <= 1e-13 * std::max(1.0, peak)) continue;
    const double x = std::log(pt.eps);
    const double y = std::log(pt.value);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  const double denom = n * sxx - sx * sx;
  profile.loglog_slope = (n >= 2 && std::abs(denom) > 1e-12) ? (n * sxy - sx * sy) / denom : 0.0;
  return profile;
}

double var_1d(const GridFunction& f, int k, double lambda, const Exponent& p) {
  if (f.dim() != 1) throw std::invalid_argument("var_1d: d = 1 only");
  if (k < 1) throw std::invalid_argument("var_1d: k must be >= 1");
  const std::int64_t n = f.cells_per_side();
  const std::int64_t pts = n + 1;
  std::vector<double> value(static_cast<std::size_t>(pts));
  for (std::int64_t i = 0; i < pts; ++i) {
    value[static_cast<std::size_t>(i)] = f[std::min(i, n - 1)];
  }
  std::vector<double> coef(static_cast<std::size_t>(k + 1));
  for (int j = 0; j <= k; ++j) {
    coef[static_cast<std::size_t>(j)] = (((k - j) % 2) ? -1.0 : 1.0) * detail::binomial(k, j);
  }
  const double h = 1.0 / static_cast<double>(n);
  auto edge = [&](std::int64_t i, std::int64_t j) {
    const std::int64_t step = (j - i) / k;
    double acc = 0.0;
    for (int t = 0; t <= k; ++t) acc += coef[static_cast<std::size_t>(t)] * value[i + t * step];
    const double gap = static_cast<double>(j - i) * h;
    return std::abs(acc) / std::pow(gap, lambda);
  };

  if (p.is_inf()) {
    double bestv = 0.0;
    for (std::int64_t j = k; j < pts; j += 1) {
      for (std::int64_t i = j % k; i < j; i += k) bestv = std::max(bestv, edge(i, j));
    }
    return bestv;
  }
  const double pv = p.value();
  std::vector<double> best(static_cast<std::size_t>(pts), 0.0);
  double ans = 0.0;
  for (std::int64_t j = 1; j < pts; ++j) {
    double bj = 0.0;
    for (std::int64_t i = (j % k); i < j; i += k) {
      if ((j - i) % k != 0) continue;
      const double w = std::pow(edge(i, j), pv);
      bj = std::max(bj, best[static_cast<std::size_t>(i)] + w);
    }
    best[static_cast<std::size_t>(j)] = bj;
    ans = std::max(ans, bj);
  }
  return finish(ans, p);
}

double var_1d_packing_form(const GridFunction& f, int k, double lambda, const Exponent& p) {
  if (f.dim() != 1) throw std::invalid_argument("var_1d_packing_form: d = 1 only");
  const std::int64_t n = f.cells_per_side();
  const std::int64_t pts = n + 1;
  const double h = 1.0 / static_cast<double>(n);

  // E_k over the cells touched by the closed interval [x_i, x_j]; the right
  // endpoint reads its cell (clamped at 1), matching the pointwise reads of
  // var_1d.
  auto interval_error = [&](std::int64_t i, std::int64_t j, double& mn, double& mx,
                            bool incremental) -> double {
    const std::int64_t last = std::min(j, n - 1);
    if (k == 1) {
      if (!incremental) {
        mn = mx = f[i];
        for (std::int64_t c = i + 1; c <= last; ++c) {
          mn = std::min(mn, f[c]);
          mx = std::max(mx, f[c]);
        }
      }
      return 0.5 * (mx - mn);
    }
    CellWindow w = f.whole_window();
    w.lo[0] = i;
    w.hi[0] = last + 1;
    return detail::fit_window(f, w, k, Exponent::infinity(), false).error;
  };

  auto weight = [&](double err, std::int64_t i, std::int64_t j) {
    const double len = static_cast<double>(j - i) * h;
    const double w = err / std::pow(len, lambda);
    return p.is_inf() ? w : std::pow(w, p.value());
  };

  if (p.is_inf()) {
    double bestv = 0.0;
    for (std::int64_t i = 0; i < pts - 1; ++i) {
      double mn = f[i], mx = f[i];
      for (std::int64_t j = i + 1; j < pts; ++j) {
        double err;
        if (k == 1) {
          const std::int64_t last = std::min(j, n - 1);
          mn = std::min(mn, f[last]);
          mx = std::max(mx, f[last]);
          err = 0.5 * (mx - mn);
        } else {
          double dummy_mn = 0, dummy_mx = 0;
          err = interval_error(i, j, dummy_mn, dummy_mx, false);
        }
        bestv = std::max(bestv, weight(err, i, j));
      }
    }
    return bestv;
  }

  // Weighted interval packing DP over the right endpoint. For k = 1 the
  // interval error is tracked incrementally while the left endpoint walks
  // down, keeping the whole DP at O(N^2).
  std::vector<double> best(static_cast<std::size_t>(pts), 0.0);
  for (std::int64_t j = 1; j < pts; ++j) {
    double bj = best[static_cast<std::size_t>(j - 1)];
    const std::int64_t last = std::min(j, n - 1);
    double mn = f[last], mx = f[last];
    for (std::int64_t i = j - 1; i >= 0; --i) {
      double err;
      if (k == 1) {
        mn = std::min(mn, f[i]);
        mx = std::max(mx, f[i]);
        err = 0.5 * (mx - mn);
      } else {
        double dummy_mn = 0, dummy_mx = 0;
        err = interval_error(i, j, dummy_mn, dummy_mx, false);
      }
      bj = std::max(bj, best[static_cast<std::size_t>(i)] + weight(err, i, j));
    }
    best[static_cast<std::size_t>(j)] = bj;
  }
  return finish(best[static_cast<std::size_t>(pts - 1)], p);
}

double gamma_bmo(const GridFunction& f, const Packing& pi, const Exponent& p) {
  auto term = [&f, &p](const DyadicCube& q) {
    const CellWindow w = f.window(q);
    double mean = 0.0;
    for_each_cell(f, w, [&](std::int64_t c) { mean += f[c]; });
    const double count = static_cast<double>(w.count());
    mean /= count;
    double dev = 0.0;
    for_each_cell(f, w, [&](std::int64_t c) { dev += std::abs(f[c] - mean); });
    const double mad = dev / count;
    return p.is_inf() ? mad : q.volume() * std::pow(mad, p.value());
  };
  double acc = 0.0;
  for (const auto& q : pi.cubes) {
    const double t = term(q);
    acc = p.is_inf() ? std::max(acc, t) : acc + t;
  }
  return finish(acc, p);
}

NormReport bmo_seminorm(const GridFunction& f, const Exponent& p, int max_level) {
  auto term = [&f, &p](const DyadicCube& q) {
    const CellWindow w = f.window(q);
    double mean = 0.0;
    for_each_cell(f, w, [&](std::int64_t c) { mean += f[c]; });
    const double count = static_cast<double>(w.count());
    mean /= count;
    double dev = 0.0;
    for_each_cell(f, w, [&](std::int64_t c) { dev += std::abs(f[c] - mean); });
    const double mad = dev / count;
    return p.is_inf() ? mad : q.volume() * std::pow(mad, p.value());
  };
  NormReport report =
      run_packing_sup(f, max_level, p.is_inf(), kInfEps, term, p, "bmo_seminorm");
  report.meta = {{"p_inv", p.inv()}, {"max_level", double(max_level)}};
  return report;
}

NormReport morrey_norm(const GridFunction& f, double q, double s, int max_level) {
  if (!(q >= 1.0)) throw std::invalid_argument("morrey: q must be >= 1");
  if (!(s > 0.0) || !(s < f.dim() / q)) {
    throw std::invalid_argument("morrey: need 0 < s < d/q");
  }
  if (max_level < 0 || max_level > f.resolution()) {
    throw std::invalid_argument("morrey: max_level must be in [0, m]");
  }
  NormReport report;
  report.kind = "morrey_norm";
  report.meta = {{"q", q}, {"s", s}, {"max_level", double(max_level)}};
  std::function<void(const DyadicCube&)> visit = [&](const DyadicCube& cube) {
    const CellWindow w = f.window(cube);
    double acc = 0.0;
    for_each_cell(f, w, [&](std::int64_t c) { acc += std::pow(std::abs(f[c]), q); });
    const double avg = acc / static_cast<double>(w.count());
    const double value = std::pow(cube.volume(), s / f.dim()) * std::pow(avg, 1.0 / q);
    if (value > report.value) {
      report.value = value;
      report.certificate.cubes = {cube};
    }
    if (cube.level < max_level) {
      for (const auto& child : cube.children()) visit(child);
    }
  };
  visit(DyadicCube::root(f.dim()));
  return report;
}

double bvk_seminorm(const GridFunction& f, int k) {
  if (k < 1) throw std::invalid_argument("bvk_seminorm: k must be >= 1");
  const int d = f.dim();
  const std::int64_t n = f.cells_per_side();
  const double h = 1.0 / static_cast<double>(n);
  double total = 0.0;

  std::vector<int> alpha(static_cast<std::size_t>(d), 0);
  std::function<void(int, int)> per_alpha = [&](int axis, int budget) {
    if (axis == d - 1) {
      alpha[static_cast<std::size_t>(axis)] = budget;
    } else {
      for (int e = 0; e <= budget; ++e) {
        alpha[static_cast<std::size_t>(axis)] = e;
        per_alpha(axis + 1, budget - e);
      }
      return;
    }
    // Forward-difference mass for this alpha.
    CellWindow w = f.whole_window();
    bool fits = true;
    for (int i = 0; i < d; ++i) {
      w.hi[i] = n - alpha[static_cast<std::size_t>(i)];
      if (w.hi[i] <= 0) fits = false;
    }
    if (!fits) return;
    std::vector<std::vector<double>> coefs(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) {
      const int a = alpha[static_cast<std::size_t>(i)];
      coefs[static_cast<std::size_t>(i)].resize(static_cast<std::size_t>(a + 1));
      for (int j = 0; j <= a; ++j) {
        coefs[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
            (((a - j) % 2) ? -1.0 : 1.0) * detail::binomial(a, j);
      }
    }
    double mass = 0.0;
    for_each_cell(f, w, [&](std::int64_t c) {
      double diff = 0.0;
      std::vector<int> j(static_cast<std::size_t>(d), 0);
      for (;;) {
        double coef = 1.0;
        std::int64_t offset = 0;
        for (int i = 0; i < d; ++i) {
          coef *= coefs[static_cast<std::size_t>(i)][static_cast<std::size_t>(j[i])];
          offset += std::int64_t(j[i]) * (std::int64_t(1) << (f.resolution() * i));
        }
        diff += coef * f[c + offset];
        int axis = 0;
        while (axis < d) {
          if (++j[static_cast<std::size_t>(axis)] <= alpha[static_cast<std::size_t>(axis)]) break;
          j[static_cast<std::size_t>(axis)] = 0;
          ++axis;
        }
        if (axis == d) break;
      }
      mass += std::abs(diff);
    });
    total += mass * std::pow(h, double(d - k));
  };
  per_alpha(0, k);
  return total;
}

}  // namespace bvkit
