#include "bvkit/polyapprox.hpp"

#include <cmath>
#include <stdexcept>

#include "bvkit/simplex.hpp"

namespace bvkit {

PolyBasis PolyBasis::total_degree(int d, int k) {
  if (d < 1 || k < 1) throw std::invalid_argument("basis: d and k must be >= 1");
  PolyBasis b;
  b.d = d;
  b.k = k;
  std::vector<int> alpha(static_cast<std::size_t>(d), 0);
  // Enumerate multi-indices with |alpha| <= k-1 in graded lexicographic order.
  std::function<void(int, int)> rec = [&](int axis, int budget) {
    if (axis == d) {
      b.exponents.push_back(alpha);
      return;
    }
    for (int e = 0; e <= budget; ++e) {
      alpha[static_cast<std::size_t>(axis)] = e;
      rec(axis + 1, budget - e);
    }
    alpha[static_cast<std::size_t>(axis)] = 0;
  };
  rec(0, k - 1);
  return b;
}

namespace detail {

double binomial(int n, int r) {
  if (r < 0 || r > n) return 0.0;
  double acc = 1.0;
  for (int i = 1; i <= r; ++i) acc = acc * (n - r + i) / i;
  return acc;
}

Eigen::VectorXd window_values(const GridFunction& f, const CellWindow& w) {
  Eigen::VectorXd v(w.count());
  std::int64_t r = 0;
  for_each_cell(f, w, [&](std::int64_t c) { v(r++) = f[c]; });
  return v;
}

Eigen::MatrixXd basis_matrix(const GridFunction& f, const CellWindow& w,
                             const PolyBasis& basis) {
  const int d = f.dim();
  const int kdeg = basis.k - 1;
  // Exact average of u^e over each cell, with u the affine image of the
  // window onto [-1,1] per axis: averages of monomials against piecewise
  // constants are closed-form, so no quadrature error enters.
  std::vector<std::vector<std::vector<double>>> avg(static_cast<std::size_t>(d));
  for (int axis = 0; axis < d; ++axis) {
    const std::int64_t n = w.hi[axis] - w.lo[axis];
    avg[axis].resize(static_cast<std::size_t>(n));
    for (std::int64_t c = 0; c < n; ++c) {
      const double ua = -1.0 + 2.0 * static_cast<double>(c) / static_cast<double>(n);
      const double ub = -1.0 + 2.0 * static_cast<double>(c + 1) / static_cast<double>(n);
      auto& cell = avg[axis][static_cast<std::size_t>(c)];
      cell.resize(static_cast<std::size_t>(kdeg + 1));
      double pa = ua, pb = ub;  // running powers u^{e+1}
      for (int e = 0; e <= kdeg; ++e) {
        cell[static_cast<std::size_t>(e)] = (pb - pa) / ((e + 1) * (ub - ua));
        pa *= ua;
        pb *= ub;
      }
    }
  }

  Eigen::MatrixXd A(w.count(), static_cast<Eigen::Index>(basis.size()));
  std::vector<std::int64_t> multi(static_cast<std::size_t>(d));
  std::int64_t row = 0;
  multi.assign(w.lo.begin(), w.lo.end());
  for (;;) {
    for (std::size_t j = 0; j < basis.size(); ++j) {
      double prod = 1.0;
      for (int axis = 0; axis < d; ++axis) {
        prod *= avg[axis][static_cast<std::size_t>(multi[axis] - w.lo[axis])]
                   [static_cast<std::size_t>(basis.exponents[j][axis])];
      }
      A(row, static_cast<Eigen::Index>(j)) = prod;
    }
    ++row;
    int axis = 0;
    while (axis < d) {
      if (++multi[axis] < w.hi[axis]) break;
      multi[axis] = w.lo[axis];
      ++axis;
    }
    if (axis == d) break;
  }
  return A;
}

namespace {

double residual_norm(const Eigen::VectorXd& r, const Exponent& q, double cellvol) {
  if (q.is_inf()) return r.lpNorm<Eigen::Infinity>();
  const double qq = q.value();
  if (qq == 1.0) return r.lpNorm<1>() * cellvol;
  if (qq == 2.0) return r.norm() * std::sqrt(cellvol);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < r.size(); ++i) acc += std::pow(std::abs(r(i)), qq);
  return std::pow(acc * cellvol, 1.0 / qq);
}

// Least-norm adjustment within the face of LP optima: keeps the strictly
// active equations fixed and minimizes the Euclidean coefficient norm, so
// certificates are deterministic when the minimizer is not unique.
Eigen::VectorXd least_norm_on_face(const Eigen::MatrixXd& active_rows,
                                   const Eigen::VectorXd& active_rhs,
                                   const Eigen::VectorXd& fallback) {
  if (active_rows.rows() == 0) return Eigen::VectorXd::Zero(fallback.size());
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(active_rows);
  return cod.solve(active_rhs);
}

// Fast exact path for k = 1 (constant fits).
bool constant_fit(const Eigen::VectorXd& v, const Exponent& q, double cellvol,
                  bool want_dual, WindowFit* out) {
  const Eigen::Index n = v.size();
  if (q.is_inf()) {
    Eigen::Index imax = 0, imin = 0;
    for (Eigen::Index i = 1; i < n; ++i) {
      if (v(i) > v(imax)) imax = i;
      if (v(i) < v(imin)) imin = i;
    }
    const double c = 0.5 * (v(imax) + v(imin));
    out->coeffs = Eigen::VectorXd::Constant(1, c);
    out->error = 0.5 * (v(imax) - v(imin));
    if (want_dual) {
      out->dual = Eigen::VectorXd::Zero(n);
      if (imax != imin) {
        out->dual(imax) = 0.5;
        out->dual(imin) = -0.5;
      }
    }
    return true;
  }
  if (q.value() == 1.0) {
    std::vector<double> sorted(v.data(), v.data() + n);
    std::sort(sorted.begin(), sorted.end());
    // Median interval; ties broken toward the least |c| inside it.
    const std::size_t half = sorted.size() / 2;
    double lo, hi;
    if (sorted.size() % 2 == 1) {
      lo = hi = sorted[half];
    } else {
      lo = sorted[half - 1];
      hi = sorted[half];
    }
    const double c = std::clamp(0.0, lo, hi);
    double err = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) err += std::abs(v(i) - c);
    out->coeffs = Eigen::VectorXd::Constant(1, c);
    out->error = err * cellvol;
    if (want_dual) {
      out->dual = Eigen::VectorXd::Zero(n);
      double imbalance = 0.0;
      Eigen::Index ties = 0;
      for (Eigen::Index i = 0; i < n; ++i) {
        if (v(i) > c) {
          out->dual(i) = cellvol;
          imbalance += cellvol;
        } else if (v(i) < c) {
          out->dual(i) = -cellvol;
          imbalance -= cellvol;
        } else {
          ++ties;
        }
      }
      if (ties > 0) {
        const double adj = -imbalance / static_cast<double>(ties);
        for (Eigen::Index i = 0; i < n; ++i) {
          if (v(i) == c) out->dual(i) = adj;
        }
      }
    }
    return true;
  }
  return false;
}

}  // namespace

WindowFit fit_window(const GridFunction& f, const CellWindow& w, int k,
                     const Exponent& q, bool want_dual) {
  if (k < 1) throw std::invalid_argument("fit: k must be >= 1");
  if (!q.is_inf() && q.value() < 1.0) throw std::invalid_argument("fit: q must be >= 1");
  if (w.empty()) throw std::invalid_argument("fit: empty window");
  const double cellvol = f.cell_volume();
  const Eigen::VectorXd v = window_values(f, w);

  WindowFit out;
  if (k == 1 && constant_fit(v, q, cellvol, want_dual, &out)) return out;

  const PolyBasis basis = PolyBasis::total_degree(f.dim(), k);
  const Eigen::MatrixXd A = basis_matrix(f, w, basis);

  if (!q.is_inf() && q.value() == 2.0) {
    if (A.rows() < A.cols()) {
      // Underdetermined cube (fewer cells than basis monomials): least-norm fit.
      out.coeffs = Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd>(A).solve(v);
    } else {
      Eigen::MatrixXd gram = A.transpose() * A;
      out.coeffs = gram.ldlt().solve(A.transpose() * v);
    }
    out.error = residual_norm(v - A * out.coeffs, q, cellvol);
    return out;
  }
  if (q.is_inf() || q.value() == 1.0) {
    detail::LpResult lp;
    Eigen::VectorXd weights;
    if (q.is_inf()) {
      lp = minimax_dual(A, v);
      out.coeffs = lp.y.head(A.cols());
    } else {
      weights = Eigen::VectorXd::Constant(v.size(), cellvol);
      lp = l1_dual(A, v, weights);
      out.coeffs = lp.y;
    }
    // Least-norm post-processing over the strictly active equations.
    std::vector<Eigen::Index> active;
    for (Eigen::Index i = 0; i < lp.z.size(); ++i) {
      if (q.is_inf()) {
        if (std::abs(lp.z(i)) > 1e-12) active.push_back(i);
      } else {
        if (std::abs(lp.z(i)) < weights(i) * (1.0 - 1e-9)) active.push_back(i);
      }
    }
    if (!active.empty()) {
      Eigen::MatrixXd rows(static_cast<Eigen::Index>(active.size()), A.cols());
      Eigen::VectorXd rhs(static_cast<Eigen::Index>(active.size()));
      for (std::size_t i = 0; i < active.size(); ++i) {
        rows.row(static_cast<Eigen::Index>(i)) = A.row(active[i]);
        double t = 0.0;
        if (q.is_inf()) t = (lp.z(active[i]) > 0 ? 1.0 : -1.0) * lp.objective;
        rhs(static_cast<Eigen::Index>(i)) = v(active[i]) - t;
      }
      Eigen::VectorXd adjusted = least_norm_on_face(rows, rhs, out.coeffs);
      const double base = residual_norm(v - A * out.coeffs, q, cellvol);
      const double cand = residual_norm(v - A * adjusted, q, cellvol);
      if (cand <= base * (1.0 + 1e-10) + 1e-14) out.coeffs = adjusted;
    }
    out.error = residual_norm(v - A * out.coeffs, q, cellvol);
    if (want_dual) out.dual = lp.z;
    return out;
  }

  // General finite q by iteratively reweighted least squares.
  const double qq = q.value();
  Eigen::VectorXd c = (A.transpose() * A).ldlt().solve(A.transpose() * v);
  double prev = residual_norm(v - A * c, q, cellvol);
  for (int iter = 0; iter < 200; ++iter) {
    Eigen::VectorXd r = v - A * c;
    Eigen::VectorXd wts(r.size());
    for (Eigen::Index i = 0; i < r.size(); ++i) {
      wts(i) = std::pow(std::max(std::abs(r(i)), 1e-12), qq - 2.0);
    }
    Eigen::MatrixXd WA = wts.asDiagonal() * A;
    Eigen::VectorXd cn = (A.transpose() * WA).ldlt().solve(WA.transpose() * v);
    c = 0.5 * (c + cn);  // damped update
    const double now = residual_norm(v - A * c, q, cellvol);
    if (std::abs(now - prev) <= 1e-8 * std::max(1.0, prev)) {
      prev = now;
      break;
    }
    prev = now;
  }
  out.coeffs = c;
  out.error = prev;
  return out;
}

}  // namespace detail

LocalFit local_approx_error(const GridFunction& f, const DyadicCube& Q, int k,
                            const Exponent& q) {
  const CellWindow w = f.window(Q);
  detail::WindowFit fit = detail::fit_window(f, w, k, q, false);

  const PolyBasis basis = PolyBasis::total_degree(f.dim(), k);
  Eigen::VectorXd coeffs = fit.coeffs;
  const Eigen::MatrixXd A = detail::basis_matrix(f, w, basis);
  const Eigen::VectorXd r = detail::window_values(f, w) - A * coeffs;

  std::vector<double> res(static_cast<std::size_t>(f.size()), 0.0);
  std::int64_t row = 0;
  for_each_cell(f, w, [&](std::int64_t c) { res[static_cast<std::size_t>(c)] = r(row++); });

  LocalFit out{fit.error, std::move(coeffs), GridFunction(f.dim(), f.resolution(), std::move(res))};
  return out;
}

Oscillation k_oscillation(const GridFunction& f, const DyadicCube& Q, int k,
                          const Exponent& q) {
  if (k < 1) throw std::invalid_argument("oscillation: k must be >= 1");
  const CellWindow w = f.window(Q);
  const int d = f.dim();
  const int m = f.resolution();
  const double cellvol = f.cell_volume();
  const double qq = q.is_inf() ? 0.0 : q.value();

  std::vector<double> coef(static_cast<std::size_t>(k + 1));
  for (int j = 0; j <= k; ++j) {
    coef[static_cast<std::size_t>(j)] = (((k - j) % 2) ? -1.0 : 1.0) * detail::binomial(k, j);
  }

  std::vector<std::int64_t> extent(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) extent[i] = w.hi[i] - w.lo[i];

  Oscillation best{0.0, false};
  std::vector<std::int64_t> shift(static_cast<std::size_t>(d), 0);
  // Enumerate lattice shifts t with the full k-step stencil inside the
  // window; t and -t give the same norm, so only lexicographically positive
  // shifts are visited.
  std::function<void(int)> sweep = [&](int axis) {
    if (axis == d) {
      bool nonzero = false;
      for (int i = 0; i < d; ++i) nonzero = nonzero || shift[i] != 0;
      if (!nonzero) return;
      int lead = d - 1;
      while (lead >= 0 && shift[static_cast<std::size_t>(lead)] == 0) --lead;
      if (shift[static_cast<std::size_t>(lead)] < 0) return;

      CellWindow sub = w;
      for (int i = 0; i < d; ++i) {
        const std::int64_t reach = k * shift[i];
        if (reach >= 0) {
          sub.hi[i] = w.hi[i] - reach;
        } else {
          sub.lo[i] = w.lo[i] - reach;
        }
      }
      if (sub.empty()) return;
      best.any_shift = true;

      std::int64_t stride = 0;
      for (int i = 0; i < d; ++i) stride += shift[i] * (std::int64_t(1) << (m * i));

      double acc = 0.0, mx = 0.0;
      for_each_cell(f, sub, [&](std::int64_t c) {
        double diff = 0.0;
        for (int j = 0; j <= k; ++j) diff += coef[static_cast<std::size_t>(j)] * f[c + j * stride];
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
      best.value = std::max(best.value, norm);
      return;
    }
    const std::int64_t span = (extent[axis] - 1) / k;
    for (std::int64_t t = -span; t <= span; ++t) {
      shift[static_cast<std::size_t>(axis)] = t;
      sweep(axis + 1);
    }
    shift[static_cast<std::size_t>(axis)] = 0;
  };
  sweep(0);
  return best;
}

std::optional<double> whitney_ratio(const GridFunction& f, const DyadicCube& Q, int k,
                                    const Exponent& q) {
  const Oscillation osc = k_oscillation(f, Q, k, q);
  if (!osc.any_shift || osc.value <= 0.0) return std::nullopt;
  const LocalFit fit = local_approx_error(f, Q, k, q);
  return fit.error / osc.value;
}

double delta_k(const GridFunction& f, double a, double b, int k) {
  if (f.dim() != 1) throw std::invalid_argument("delta_k: d = 1 only");
  if (!(a < b)) throw std::invalid_argument("delta_k: need a < b");
  const double n = static_cast<double>(f.cells_per_side());
  const double h = (b - a) / k;
  for (int j = 0; j <= k; ++j) {
    const double xj = (a + j * h) * n;
    if (std::abs(xj - std::round(xj)) > 1e-9) {
      throw std::invalid_argument("delta_k: nodes are not grid-resolvable");
    }
  }
  double acc = 0.0;
  for (int j = 0; j <= k; ++j) {
    const double x = a + j * h;
    const double coeff = (((k - j) % 2) ? -1.0 : 1.0) * detail::binomial(k, j);
    acc += coeff * f.at_point(std::span<const double>(&x, 1));
  }
  return std::abs(acc);
}

}  // namespace bvkit
