#include "bvkit/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace bvkit {

std::int64_t CellWindow::count() const {
  std::int64_t n = 1;
  for (int i = 0; i < dim(); ++i) n *= std::max<std::int64_t>(0, hi[i] - lo[i]);
  return n;
}

bool CellWindow::empty() const { return count() == 0; }

GridFunction::GridFunction(int d, int m, std::vector<double> values)
    : d_(d), m_(m), values_(std::move(values)) {
  if (d < 1 || d > 10) throw std::invalid_argument("grid dimension out of range");
  if (m < 0 || m * d > 30) throw std::invalid_argument("grid resolution out of range");
  const std::int64_t expect = std::int64_t(1) << (m * d);
  if (static_cast<std::int64_t>(values_.size()) != expect) {
    throw std::invalid_argument("grid values length must be 2^(m*d)");
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw std::invalid_argument("grid values must be finite");
  }
}

GridFunction GridFunction::constant(int d, int m, double c) {
  const std::int64_t n = std::int64_t(1) << (m * d);
  return GridFunction(d, m, std::vector<double>(static_cast<std::size_t>(n), c));
}

double GridFunction::cell_volume() const { return std::ldexp(1.0, -m_ * d_); }

std::int64_t GridFunction::flat_index(std::span<const std::int64_t> multi) const {
  std::int64_t flat = 0;
  for (int i = d_ - 1; i >= 0; --i) flat = (flat << m_) | multi[i];
  return flat;
}

double GridFunction::at_point(std::span<const double> x) const {
  const std::int64_t n = cells_per_side();
  std::int64_t flat = 0;
  for (int i = d_ - 1; i >= 0; --i) {
    auto c = static_cast<std::int64_t>(std::floor(x[i] * static_cast<double>(n)));
    c = std::min(std::max<std::int64_t>(c, 0), n - 1);
    flat = (flat << m_) | c;
  }
  return values_[static_cast<std::size_t>(flat)];
}

GridFunction GridFunction::refine(int extra_levels) const {
  if (extra_levels < 0) throw std::invalid_argument("refine: extra_levels must be >= 0");
  if (extra_levels == 0) return *this;
  const int mf = m_ + extra_levels;
  const std::int64_t nf = std::int64_t(1) << mf;
  std::vector<double> out(static_cast<std::size_t>(std::int64_t(1) << (mf * d_)));
  std::vector<std::int64_t> multi(static_cast<std::size_t>(d_), 0);
  for (std::int64_t flat = 0; flat < static_cast<std::int64_t>(out.size()); ++flat) {
    std::int64_t rest = flat, coarse = 0;
    for (int i = 0; i < d_; ++i) {
      multi[i] = rest & (nf - 1);
      rest >>= mf;
    }
    for (int i = d_ - 1; i >= 0; --i) coarse = (coarse << m_) | (multi[i] >> extra_levels);
    out[static_cast<std::size_t>(flat)] = values_[static_cast<std::size_t>(coarse)];
  }
  return GridFunction(d_, mf, std::move(out));
}

CellWindow GridFunction::window(const DyadicCube& cube) const {
  if (cube.dim() != d_) throw std::invalid_argument("cube dimension mismatch");
  if (cube.level > m_) throw std::invalid_argument("cube finer than grid resolution");
  CellWindow w;
  w.m = m_;
  const int shift = m_ - cube.level;
  w.lo.resize(static_cast<std::size_t>(d_));
  w.hi.resize(static_cast<std::size_t>(d_));
  for (int i = 0; i < d_; ++i) {
    w.lo[i] = std::int64_t(cube.index[i]) << shift;
    w.hi[i] = std::int64_t(cube.index[i] + 1) << shift;
  }
  return w;
}

CellWindow GridFunction::whole_window() const {
  CellWindow w;
  w.m = m_;
  w.lo.assign(static_cast<std::size_t>(d_), 0);
  w.hi.assign(static_cast<std::size_t>(d_), cells_per_side());
  return w;
}

void for_each_cell(const GridFunction& f, const CellWindow& w,
                   const std::function<void(std::int64_t)>& body) {
  if (w.empty()) return;
  const int d = f.dim();
  const int m = f.resolution();
  std::vector<std::int64_t> multi(w.lo.begin(), w.lo.end());
  for (;;) {
    std::int64_t flat = 0;
    for (int i = d - 1; i >= 0; --i) flat = (flat << m) | multi[i];
    body(flat);
    int axis = 0;
    while (axis < d) {
      if (++multi[axis] < w.hi[axis]) break;
      multi[axis] = w.lo[axis];
      ++axis;
    }
    if (axis == d) return;
  }
}

double lq_norm_window(const GridFunction& f, const Exponent& q, const CellWindow& w) {
  if (!q.is_inf() && q.value() < 1.0) throw std::invalid_argument("lq_norm: q must be >= 1");
  if (q.is_inf()) {
    double mx = 0.0;
    for_each_cell(f, w, [&](std::int64_t c) { mx = std::max(mx, std::abs(f[c])); });
    return mx;
  }
  const double qq = q.value();
  const double vol = f.cell_volume();
  double acc = 0.0;
  if (qq == 1.0) {
    for_each_cell(f, w, [&](std::int64_t c) { acc += std::abs(f[c]); });
    return acc * vol;
  }
  if (qq == 2.0) {
    for_each_cell(f, w, [&](std::int64_t c) { acc += f[c] * f[c]; });
    return std::sqrt(acc * vol);
  }
  for_each_cell(f, w, [&](std::int64_t c) { acc += std::pow(std::abs(f[c]), qq); });
  return std::pow(acc * vol, 1.0 / qq);
}

double lq_norm(const GridFunction& f, const Exponent& q, const Region& region) {
  const CellWindow w = region.cube ? f.window(*region.cube) : f.whole_window();
  return lq_norm_window(f, q, w);
}

double pair(const GridFunction& f, const GridFunction& g) {
  if (f.dim() != g.dim() || f.resolution() != g.resolution()) {
    throw std::invalid_argument("pair: shape mismatch (resample by refine() first)");
  }
  double acc = 0.0;
  auto fv = f.values();
  auto gv = g.values();
  for (std::size_t i = 0; i < fv.size(); ++i) acc += fv[i] * gv[i];
  return acc * f.cell_volume();
}

double cell_average(const GridFunction& f, const DyadicCube& cube) {
  const CellWindow w = f.window(cube);
  double acc = 0.0;
  for_each_cell(f, w, [&](std::int64_t c) { acc += f[c]; });
  return acc / static_cast<double>(w.count());
}

GridFunction sample(const std::function<double(std::span<const double>)>& fn, int d, int m,
                    int supersample) {
  if (supersample < 1) throw std::invalid_argument("sample: supersample must be >= 1");
  const std::int64_t n = std::int64_t(1) << m;
  const std::int64_t total = std::int64_t(1) << (m * d);
  const double h = 1.0 / static_cast<double>(n);
  std::vector<double> out(static_cast<std::size_t>(total));
  std::vector<std::int64_t> multi(static_cast<std::size_t>(d), 0);
  std::vector<std::int64_t> sub(static_cast<std::size_t>(d), 0);
  std::vector<double> x(static_cast<std::size_t>(d), 0.0);
  const std::int64_t s = supersample;
  for (std::int64_t flat = 0; flat < total; ++flat) {
    std::int64_t rest = flat;
    for (int i = 0; i < d; ++i) {
      multi[i] = rest & (n - 1);
      rest >>= m;
    }
    double acc = 0.0;
    std::fill(sub.begin(), sub.end(), 0);
    for (;;) {
      for (int i = 0; i < d; ++i) {
        x[i] = (static_cast<double>(multi[i]) +
                (2.0 * static_cast<double>(sub[i]) + 1.0) / (2.0 * static_cast<double>(s))) *
               h;
      }
      acc += fn(x);
      int axis = 0;
      while (axis < d) {
        if (++sub[axis] < s) break;
        sub[axis] = 0;
        ++axis;
      }
      if (axis == d) break;
    }
    double cnt = 1.0;
    for (int i = 0; i < d; ++i) cnt *= static_cast<double>(s);
    out[static_cast<std::size_t>(flat)] = acc / cnt;
  }
  return GridFunction(d, m, std::move(out));
}

}  // namespace bvkit
