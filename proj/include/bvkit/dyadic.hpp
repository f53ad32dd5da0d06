#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace bvkit {

/// Dyadic subcube of [0,1]^d: level ell >= 0 and a per-axis index in
/// [0, 2^ell). Axis i spans [index[i]*2^-ell, (index[i]+1)*2^-ell].
struct DyadicCube {
  int level = 0;
  std::vector<std::uint32_t> index;  // size d

  DyadicCube() = default;
  DyadicCube(int level_, std::vector<std::uint32_t> index_);

  static DyadicCube root(int d);

  int dim() const { return static_cast<int>(index.size()); }
  double side() const;
  double volume() const;
  double lower(int axis) const;
  double upper(int axis) const;

  /// The 2^d subcubes of level+1 partitioning this cube, in child order
  /// (axis-0 bit fastest).
  std::vector<DyadicCube> children() const;

  /// Child by ordinal in [0, 2^d); bit i of `child` selects the upper half
  /// along axis i.
  DyadicCube child(std::uint32_t ordinal) const;

  /// True iff `other` is contained in this cube (descendant or equal).
  bool contains(const DyadicCube& other) const;

  bool operator==(const DyadicCube& o) const {
    return level == o.level && index == o.index;
  }
};

struct DyadicCubeHash {
  std::size_t operator()(const DyadicCube& q) const;
};

/// A finite antichain of dyadic cubes (pairwise nonoverlapping interiors).
struct Packing {
  std::vector<DyadicCube> cubes;

  bool empty() const { return cubes.empty(); }
  std::size_t size() const { return cubes.size(); }
};

/// Mesh |pi| = sup of cube volumes; 0 for the empty packing by convention.
double mesh(const Packing& pi);

/// True iff the cubes form an antichain of the dyadic tree.
bool is_packing(const std::vector<DyadicCube>& cubes);

/// Visits every antichain of the depth-`max_level` 2^d-ary tree exactly
/// once, including the empty one. The Packing passed to the visitor is in
/// depth-first cube order and only valid during the call.
/// Guard: 2^(d*max_level) <= 4096 leaves, else throws.
void enumerate_packings(int d, int max_level,
                        const std::function<void(const Packing&)>& visit);

/// Materialized variant of enumerate_packings (same guard).
std::vector<Packing> all_packings(int d, int max_level);

/// Number of antichains A(L) = 1 + A(L-1)^(2^d), A(0) = 2.
/// Saturates at int64 max on overflow.
std::int64_t count_packings(int d, int max_level);

}  // namespace bvkit
