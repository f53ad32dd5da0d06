#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "bvkit/dyadic.hpp"
#include "bvkit/params.hpp"

namespace bvkit {

/// Rectangular block of cells at resolution m: per-axis half-open index
/// ranges [lo[i], hi[i]). This is how every operation addresses subsets of
/// the grid; a DyadicCube resolves to one such window.
struct CellWindow {
  int m = 0;
  std::vector<std::int64_t> lo;
  std::vector<std::int64_t> hi;

  int dim() const { return static_cast<int>(lo.size()); }
  std::int64_t count() const;
  bool empty() const;
};

/// Piecewise-constant function on the uniform dyadic grid over [0,1]^d with
/// 2^m cells per side. Cell (i_0,...,i_{d-1}) spans
/// [i_j*2^-m, (i_j+1)*2^-m) per axis; axis 0 is the fastest-varying index.
/// Values are immutable after construction, so instances are freely
/// shareable across threads.
class GridFunction {
 public:
  GridFunction(int d, int m, std::vector<double> values);

  static GridFunction constant(int d, int m, double c);

  int dim() const { return d_; }
  int resolution() const { return m_; }
  std::int64_t cells_per_side() const { return std::int64_t(1) << m_; }
  std::int64_t size() const { return static_cast<std::int64_t>(values_.size()); }
  double cell_volume() const;

  std::span<const double> values() const { return values_; }
  double operator[](std::int64_t flat) const { return values_[static_cast<std::size_t>(flat)]; }

  std::int64_t flat_index(std::span<const std::int64_t> multi) const;

  /// Value at a point of [0,1]^d; coordinates equal to 1 read the last cell.
  double at_point(std::span<const double> x) const;

  /// Refinement by cell duplication (coarse -> fine); preserves the function
  /// exactly, hence every L_q norm and pairing.
  GridFunction refine(int extra_levels) const;

  /// Window of cells covered by a dyadic cube; the cube must be at level
  /// <= m.
  CellWindow window(const DyadicCube& cube) const;
  CellWindow whole_window() const;

 private:
  int d_;
  int m_;
  std::vector<double> values_;
};

/// Either the whole domain or one dyadic cube.
struct Region {
  std::optional<DyadicCube> cube;

  static Region whole() { return Region{}; }
  static Region in(DyadicCube q) { return Region{std::move(q)}; }
};

/// Exact L_q norm of the piecewise-constant representative over the region;
/// q = inf gives the max of |values|.
double lq_norm(const GridFunction& f, const Exponent& q, const Region& region = Region::whole());

double lq_norm_window(const GridFunction& f, const Exponent& q, const CellWindow& w);

/// Exact integral of f*g over [0,1]^d. Shapes must match; no resampling.
double pair(const GridFunction& f, const GridFunction& g);

/// Mean of f over a dyadic cube (level <= m).
double cell_average(const GridFunction& f, const DyadicCube& cube);

/// Projects a scalar field to the grid: each cell value is the average of
/// fn over a supersample^d sub-lattice of points inside the cell.
GridFunction sample(const std::function<double(std::span<const double>)>& fn, int d, int m,
                    int supersample);

/// Iterates all cells of a window, passing the flat index.
void for_each_cell(const GridFunction& f, const CellWindow& w,
                   const std::function<void(std::int64_t)>& body);

}  // namespace bvkit
