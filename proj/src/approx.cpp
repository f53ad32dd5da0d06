#include "bvkit/approx.hpp"

#include <array>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace bvkit {

namespace {

double bump_raw(double t) {
  const double s = 1.0 - t * t;
  return s > 0.0 ? std::exp(-1.0 / s) : 0.0;
}

// Dense cumulative table of the normalized 1D bump, built once. Composite
// Gauss-Legendre per table interval; the profile is smooth, so the table
// resolution dominates the (linear) interpolation error at ~1e-9.
struct BumpTable {
  static constexpr int kIntervals = 8192;
  std::array<double, kIntervals + 1> cdf{};
  double mass = 0.0;

  BumpTable() {
    static const double gx[4] = {-0.8611363115940526, -0.3399810435848563,
                                 0.3399810435848563, 0.8611363115940526};
    static const double gw[4] = {0.3478548451374538, 0.6521451548625461,
                                 0.6521451548625461, 0.3478548451374538};
    const double h = 2.0 / kIntervals;
    cdf[0] = 0.0;
    for (int i = 0; i < kIntervals; ++i) {
      const double a = -1.0 + i * h;
      double acc = 0.0;
      for (int j = 0; j < 4; ++j) acc += gw[j] * bump_raw(a + 0.5 * h * (1.0 + gx[j]));
      cdf[static_cast<std::size_t>(i + 1)] =
          cdf[static_cast<std::size_t>(i)] + acc * 0.5 * h;
    }
    mass = cdf[kIntervals];
    for (auto& x : cdf) x /= mass;
  }

  double operator()(double t) const {
    if (t <= -1.0) return 0.0;
    if (t >= 1.0) return 1.0;
    const double pos = (t + 1.0) / 2.0 * kIntervals;
    const int i = std::min(static_cast<int>(pos), kIntervals - 1);
    const double frac = pos - i;
    return cdf[static_cast<std::size_t>(i)] * (1.0 - frac) +
           cdf[static_cast<std::size_t>(i + 1)] * frac;
  }
};

const BumpTable& bump_table() {
  static const BumpTable table;
  return table;
}

}  // namespace

namespace detail {
double bump_cdf(double t) { return bump_table()(t); }
}  // namespace detail

GridFunction mollify(const GridFunction& f, const MollifierConfig& cfg) {
  if (cfg.n < 1) throw std::invalid_argument("mollify: n must be >= 1");
  if (cfg.supersample < 1) throw std::invalid_argument("mollify: supersample must be >= 1");
  if (cfg.bump != "tensor-exp") throw std::invalid_argument("mollify: unknown bump profile");

  const int d = f.dim();
  const int m = f.resolution();
  const std::int64_t cells = f.cells_per_side();
  const std::int64_t fine = cells * cfg.supersample;
  const double lambda_n = double(cfg.n) / double(cfg.n + 1);
  const double scale = double(cfg.n + 1);
  const auto& cdf = bump_table();

  // Weights of each input cell for each fine evaluation point z_i: the exact
  // mass the scaled kernel puts on that cell.
  struct RowWeights {
    std::int64_t first;
    std::vector<double> w;
  };
  std::vector<RowWeights> weights(static_cast<std::size_t>(fine));
  const double reach = 1.0 / scale;
  for (std::int64_t i = 0; i < fine; ++i) {
    const double xf = (static_cast<double>(i) + 0.5) / static_cast<double>(fine);
    const double z = 0.5 + lambda_n * (xf - 0.5);
    auto lo = static_cast<std::int64_t>(std::floor((z - reach) * cells));
    auto hi = static_cast<std::int64_t>(std::ceil((z + reach) * cells));
    lo = std::max<std::int64_t>(lo, 0);
    hi = std::min(hi, cells);
    RowWeights& row = weights[static_cast<std::size_t>(i)];
    row.first = lo;
    row.w.resize(static_cast<std::size_t>(std::max<std::int64_t>(0, hi - lo)));
    for (std::int64_t c = lo; c < hi; ++c) {
      const double a = static_cast<double>(c) / static_cast<double>(cells);
      const double b = static_cast<double>(c + 1) / static_cast<double>(cells);
      row.w[static_cast<std::size_t>(c - lo)] = cdf(scale * (z - a)) - cdf(scale * (z - b));
    }
  }

  // Axis-by-axis convolution: processed axes live on the fine lattice.
  std::vector<double> data(f.values().begin(), f.values().end());
  std::vector<std::int64_t> dims(static_cast<std::size_t>(d), cells);
  for (int axis = 0; axis < d; ++axis) {
    std::int64_t stride = 1;
    for (int i = 0; i < axis; ++i) stride *= dims[static_cast<std::size_t>(i)];
    std::int64_t outer = 1;
    for (int i = axis + 1; i < d; ++i) outer *= dims[static_cast<std::size_t>(i)];
    const std::int64_t axis_len = dims[static_cast<std::size_t>(axis)];

    std::vector<std::int64_t> new_dims = dims;
    new_dims[static_cast<std::size_t>(axis)] = fine;
    std::int64_t new_total = 1;
    for (auto v : new_dims) new_total *= v;
    std::vector<double> next(static_cast<std::size_t>(new_total), 0.0);

    for (std::int64_t o = 0; o < outer; ++o) {
      for (std::int64_t s = 0; s < stride; ++s) {
        const std::int64_t base_in = o * axis_len * stride + s;
        const std::int64_t base_out = o * fine * stride + s;
        for (std::int64_t i = 0; i < fine; ++i) {
          const RowWeights& row = weights[static_cast<std::size_t>(i)];
          double acc = 0.0;
          for (std::size_t j = 0; j < row.w.size(); ++j) {
            acc += row.w[j] *
                   data[static_cast<std::size_t>(base_in +
                                                 (row.first + static_cast<std::int64_t>(j)) *
                                                     stride)];
          }
          next[static_cast<std::size_t>(base_out + i * stride)] = acc;
        }
      }
    }
    data = std::move(next);
    dims = std::move(new_dims);
  }

  // Box-average the supersample blocks back to the grid resolution.
  const std::int64_t s = cfg.supersample;
  for (int axis = 0; axis < d; ++axis) {
    if (s == 1) break;
    std::int64_t stride = 1;
    for (int i = 0; i < axis; ++i) stride *= cells;  // earlier axes already reduced
    std::int64_t outer = 1;
    for (int i = axis + 1; i < d; ++i) outer *= dims[static_cast<std::size_t>(i)];

    std::vector<std::int64_t> new_dims = dims;
    new_dims[static_cast<std::size_t>(axis)] = cells;
    std::int64_t new_total = 1;
    for (auto v : new_dims) new_total *= v;
    std::vector<double> next(static_cast<std::size_t>(new_total), 0.0);
    for (std::int64_t o = 0; o < outer; ++o) {
      for (std::int64_t st = 0; st < stride; ++st) {
        const std::int64_t base_in = o * fine * stride + st;
        const std::int64_t base_out = o * cells * stride + st;
        for (std::int64_t c = 0; c < cells; ++c) {
          double acc = 0.0;
          for (std::int64_t j = 0; j < s; ++j) {
            acc += data[static_cast<std::size_t>(base_in + (c * s + j) * stride)];
          }
          next[static_cast<std::size_t>(base_out + c * stride)] =
              acc / static_cast<double>(s);
        }
      }
    }
    data = std::move(next);
    dims = std::move(new_dims);
  }

  return GridFunction(d, m, std::move(data));
}

BoundCheck mollifier_bound_check(const GridFunction& f, const Kappa& kappa, int n,
                                 int max_level, double slack) {
  MollifierConfig cfg;
  cfg.n = n;
  const GridFunction fn = mollify(f, cfg);
  const double lambda_n = double(n) / double(n + 1);
  BoundCheck check;
  check.lhs = v_seminorm(fn, kappa, max_level).value;
  const double factor =
      std::pow(lambda_n, kappa.d * (kappa.lambda - kappa.q.inv()));
  check.rhs = factor * v_seminorm(f, kappa, max_level).value;
  check.ok = check.lhs <= check.rhs * (1.0 + slack);
  return check;
}

namespace {

// Fixed smooth witness basis for the weak-star column at q = inf.
std::vector<GridFunction> weak_witnesses(int d, int m) {
  std::vector<GridFunction> out;
  std::vector<double> freq(static_cast<std::size_t>(d), 0.0);
  // Tensor cosine lattice: frequencies 0..2 per axis, then a few sines.
  std::function<void(int)> rec = [&](int axis) {
    if (static_cast<int>(out.size()) >= 32) return;
    if (axis == d) {
      auto fn = [&freq, d](std::span<const double> x) {
        double v = 1.0;
        for (int i = 0; i < d; ++i) v *= std::cos(M_PI * freq[static_cast<std::size_t>(i)] * x[i]);
        return v;
      };
      out.push_back(sample(fn, d, m, 2));
      return;
    }
    for (int j = 0; j <= 2; ++j) {
      freq[static_cast<std::size_t>(axis)] = j;
      rec(axis + 1);
    }
  };
  rec(0);
  for (int j = 1; static_cast<int>(out.size()) < 32; ++j) {
    const int jj = j;
    auto fn = [jj, d](std::span<const double> x) {
      double v = 1.0;
      for (int i = 0; i < d; ++i) v *= std::sin(M_PI * jj * x[i]);
      return v;
    };
    out.push_back(sample(fn, d, m, 2));
  }
  return out;
}

}  // namespace

std::vector<ConvergenceRow> convergence_study(const GridFunction& f, const Kappa& kappa,
                                              const std::vector<int>& n_list) {
  std::vector<ConvergenceRow> rows;
  std::vector<GridFunction> witnesses;
  if (kappa.q.is_inf()) witnesses = weak_witnesses(f.dim(), f.resolution());
  for (int n : n_list) {
    MollifierConfig cfg;
    cfg.n = n;
    const GridFunction fn = mollify(f, cfg);
    ConvergenceRow row;
    row.n = n;
    std::vector<double> diff(f.values().begin(), f.values().end());
    for (std::int64_t c = 0; c < f.size(); ++c) diff[static_cast<std::size_t>(c)] -= fn[c];
    GridFunction delta(f.dim(), f.resolution(), std::move(diff));
    if (kappa.q.is_inf()) {
      double mx = 0.0;
      for (const auto& w : witnesses) mx = std::max(mx, std::abs(pair(delta, w)));
      row.err_q = mx;
    } else {
      row.err_q = lq_norm(delta, kappa.q);
    }
    row.seminorm = v_seminorm(fn, kappa, f.resolution()).value;
    rows.push_back(row);
  }
  return rows;
}

double modulus(const GridFunction& f, int k, const Exponent& q, double t) {
  if (!(t > 0.0) || t > 1.0) throw std::invalid_argument("modulus: t must be in (0,1]");
  if (k < 1) throw std::invalid_argument("modulus: k must be >= 1");
  const int d = f.dim();
  const int m = f.resolution();
  const std::int64_t n = f.cells_per_side();
  const std::int64_t t_cells = static_cast<std::int64_t>(std::floor(t * n + 1e-9));
  if (t_cells == 0) return 0.0;
  const double cellvol = f.cell_volume();
  const double qq = q.is_inf() ? 0.0 : q.value();

  std::vector<double> coef(static_cast<std::size_t>(k + 1));
  for (int j = 0; j <= k; ++j) {
    coef[static_cast<std::size_t>(j)] = (((k - j) % 2) ? -1.0 : 1.0) * detail::binomial(k, j);
  }

  double best = 0.0;
  std::vector<std::int64_t> shift(static_cast<std::size_t>(d), 0);
  std::function<void(int)> sweep = [&](int axis) {
    if (axis == d) {
      bool nonzero = false;
      for (int i = 0; i < d; ++i) nonzero = nonzero || shift[static_cast<std::size_t>(i)] != 0;
      if (!nonzero) return;
      int lead = d - 1;
      while (lead >= 0 && shift[static_cast<std::size_t>(lead)] == 0) --lead;
      if (shift[static_cast<std::size_t>(lead)] < 0) return;  // h and -h agree

      CellWindow w = f.whole_window();
      for (int i = 0; i < d; ++i) {
        const std::int64_t reach = k * shift[static_cast<std::size_t>(i)];
        if (reach >= 0) {
          w.hi[i] = n - reach;
        } else {
          w.lo[i] = -reach;
        }
      }
      if (w.empty()) return;
      std::int64_t stride = 0;
      for (int i = 0; i < d; ++i) {
        stride += shift[static_cast<std::size_t>(i)] * (std::int64_t(1) << (m * i));
      }
      double acc = 0.0, mx = 0.0;
      for_each_cell(f, w, [&](std::int64_t c) {
        double diff = 0.0;
        for (int j = 0; j <= k; ++j) {
          diff += coef[static_cast<std::size_t>(j)] * f[c + j * stride];
        }
        if (q.is_inf()) {
          mx = std::max(mx, std::abs(diff));
        } else if (qq == 1.0) {
          acc += std::abs(diff);
        } else if (qq == 2.0) {
          acc += diff * diff;
        } else {
          acc += std::pow(std::abs(diff), qq);
        }
      });
      double norm;
      if (q.is_inf()) {
        norm = mx;
      } else if (qq == 2.0) {
        norm = std::sqrt(acc * cellvol);
      } else {
        norm = qq == 1.0 ? acc * cellvol : std::pow(acc * cellvol, 1.0 / qq);
      }
      best = std::max(best, norm);
      return;
    }
    for (std::int64_t s = -t_cells; s <= t_cells; ++s) {
      shift[static_cast<std::size_t>(axis)] = s;
      sweep(axis + 1);
    }
    shift[static_cast<std::size_t>(axis)] = 0;
  };
  sweep(0);
  return best;
}

GridFunction jackson_axis(const GridFunction& f, int n, int axis) {
  if (n < 1) throw std::invalid_argument("jackson: n must be >= 1");
  if (axis < 0 || axis >= f.dim()) throw std::invalid_argument("jackson: bad axis");
  const int d = f.dim();
  const int m = f.resolution();
  const std::int64_t cells = f.cells_per_side();

  // Interpolation anchors: centers of the cells containing the nodes j/n.
  std::vector<std::int64_t> node_cell;
  for (int j = 0; j <= n; ++j) {
    auto c = static_cast<std::int64_t>(
        std::floor(static_cast<double>(j) / n * static_cast<double>(cells)));
    c = std::min(c, cells - 1);
    if (node_cell.empty() || node_cell.back() != c) node_cell.push_back(c);
  }
  const std::size_t nodes = node_cell.size();
  std::vector<double> abscissa(nodes);
  for (std::size_t j = 0; j < nodes; ++j) {
    abscissa[j] = (static_cast<double>(node_cell[j]) + 0.5) / static_cast<double>(cells);
  }

  // Per output cell: segment index and barycentric weight.
  std::vector<std::size_t> seg(static_cast<std::size_t>(cells));
  std::vector<double> wt(static_cast<std::size_t>(cells));
  std::size_t cur = 0;
  for (std::int64_t i = 0; i < cells; ++i) {
    const double x = (static_cast<double>(i) + 0.5) / static_cast<double>(cells);
    while (cur + 2 < nodes && x > abscissa[cur + 1]) ++cur;
    if (nodes == 1) {
      seg[static_cast<std::size_t>(i)] = 0;
      wt[static_cast<std::size_t>(i)] = 0.0;
      continue;
    }
    const double a = abscissa[cur], b = abscissa[cur + 1];
    double u = (x - a) / (b - a);
    u = std::clamp(u, 0.0, 1.0);  // constant extension past the end anchors
    seg[static_cast<std::size_t>(i)] = cur;
    wt[static_cast<std::size_t>(i)] = u;
  }

  const std::int64_t stride = std::int64_t(1) << (m * axis);
  std::int64_t outer = 1;
  for (int i = axis + 1; i < d; ++i) outer *= cells;
  std::int64_t inner = 1;
  for (int i = 0; i < axis; ++i) inner *= cells;

  std::vector<double> out(static_cast<std::size_t>(f.size()));
  for (std::int64_t o = 0; o < outer; ++o) {
    for (std::int64_t s = 0; s < inner; ++s) {
      const std::int64_t base = o * cells * stride + s;
      for (std::int64_t i = 0; i < cells; ++i) {
        const std::size_t sg = seg[static_cast<std::size_t>(i)];
        const double u = wt[static_cast<std::size_t>(i)];
        const double va = f[base + node_cell[sg] * stride];
        const double vb =
            nodes == 1 ? va : f[base + node_cell[std::min(sg + 1, nodes - 1)] * stride];
        out[static_cast<std::size_t>(base + i * stride)] = va * (1.0 - u) + vb * u;
      }
    }
  }
  return GridFunction(d, m, std::move(out));
}

GridFunction jackson_approx(const GridFunction& f, int n) {
  GridFunction out = f;
  for (int axis = 0; axis < f.dim(); ++axis) out = jackson_axis(out, n, axis);
  return out;
}

}  // namespace bvkit
