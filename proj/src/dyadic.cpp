#include "bvkit/dyadic.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace bvkit {

DyadicCube::DyadicCube(int level_, std::vector<std::uint32_t> index_)
    : level(level_), index(std::move(index_)) {
  if (level < 0 || level > 30) throw std::invalid_argument("cube level out of range");
  const std::uint32_t limit = std::uint32_t(1) << level;
  for (std::uint32_t i : index) {
    if (i >= limit) throw std::invalid_argument("cube index out of range for level");
  }
  if (index.empty()) throw std::invalid_argument("cube dimension must be >= 1");
}

DyadicCube DyadicCube::root(int d) {
  return DyadicCube(0, std::vector<std::uint32_t>(static_cast<std::size_t>(d), 0));
}

double DyadicCube::side() const { return std::ldexp(1.0, -level); }

double DyadicCube::volume() const { return std::ldexp(1.0, -level * dim()); }

double DyadicCube::lower(int axis) const {
  return std::ldexp(static_cast<double>(index[axis]), -level);
}

double DyadicCube::upper(int axis) const {
  return std::ldexp(static_cast<double>(index[axis]) + 1.0, -level);
}

DyadicCube DyadicCube::child(std::uint32_t ordinal) const {
  DyadicCube c;
  c.level = level + 1;
  c.index.resize(index.size());
  for (int i = 0; i < dim(); ++i) {
    c.index[i] = (index[i] << 1) | ((ordinal >> i) & 1u);
  }
  return c;
}

std::vector<DyadicCube> DyadicCube::children() const {
  const std::uint32_t n = std::uint32_t(1) << dim();
  std::vector<DyadicCube> out;
  out.reserve(n);
  for (std::uint32_t c = 0; c < n; ++c) out.push_back(child(c));
  return out;
}

bool DyadicCube::contains(const DyadicCube& other) const {
  if (other.dim() != dim() || other.level < level) return false;
  const int shift = other.level - level;
  for (int i = 0; i < dim(); ++i) {
    if ((other.index[i] >> shift) != index[i]) return false;
  }
  return true;
}

std::size_t DyadicCubeHash::operator()(const DyadicCube& q) const {
  std::size_t h = std::hash<int>()(q.level);
  for (std::uint32_t i : q.index) {
    h ^= std::hash<std::uint32_t>()(i) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h;
}

double mesh(const Packing& pi) {
  double m = 0.0;
  for (const auto& q : pi.cubes) m = std::max(m, q.volume());
  return m;
}

bool is_packing(const std::vector<DyadicCube>& cubes) {
  for (std::size_t i = 0; i < cubes.size(); ++i) {
    for (std::size_t j = 0; j < cubes.size(); ++j) {
      if (i != j && cubes[i].contains(cubes[j])) return false;
    }
  }
  return true;
}

namespace {

void check_guard(int d, int max_level) {
  if (d < 1) throw std::invalid_argument("dimension must be >= 1");
  if (max_level < 0) throw std::invalid_argument("max_level must be >= 0");
  double leaves = std::pow(2.0, double(d) * max_level);
  if (leaves > 4096.0) {
    throw std::invalid_argument("enumerate_packings: tree exceeds 4096 leaves");
  }
}

struct Enumerator {
  int max_level;
  Packing acc;
  DyadicCube scratch;  // current subtree root, mutated in place
  const std::function<void(const Packing&)>* visit;

  void push_child(std::uint32_t c) {
    ++scratch.level;
    for (std::size_t i = 0; i < scratch.index.size(); ++i) {
      scratch.index[i] = (scratch.index[i] << 1) | ((c >> i) & 1u);
    }
  }
  void pop_child() {
    for (std::size_t i = 0; i < scratch.index.size(); ++i) scratch.index[i] >>= 1;
    --scratch.level;
  }

  // Enumerates antichains of the subtree at `scratch`, invoking next() once
  // per choice with acc extended accordingly. Continuations may mutate
  // scratch as long as they restore it.
  void subtree(const std::function<void()>& next) {
    acc.cubes.push_back(scratch);
    next();
    acc.cubes.pop_back();
    if (scratch.level == max_level) {
      next();  // empty antichain of a leaf subtree
    } else {
      product(0, next);
    }
  }

  // Cross product of child antichains (includes the all-empty combination).
  void product(std::uint32_t child_ord, const std::function<void()>& next) {
    if (child_ord == (std::uint32_t(1) << scratch.dim())) {
      next();
      return;
    }
    push_child(child_ord);
    subtree([this, child_ord, &next] {
      pop_child();
      product(child_ord + 1, next);
      push_child(child_ord);  // restore for the caller's unwinding
    });
    pop_child();
  }
};

}  // namespace

void enumerate_packings(int d, int max_level,
                        const std::function<void(const Packing&)>& visit) {
  check_guard(d, max_level);
  Enumerator en{max_level, Packing{}, DyadicCube::root(d), &visit};
  en.subtree([&en] { (*en.visit)(en.acc); });
}

std::vector<Packing> all_packings(int d, int max_level) {
  std::vector<Packing> out;
  enumerate_packings(d, max_level, [&out](const Packing& p) { out.push_back(p); });
  return out;
}

std::int64_t count_packings(int d, int max_level) {
  check_guard(d, max_level);
  const int fan = 1 << d;
  std::int64_t a = 2;
  for (int l = 0; l < max_level; ++l) {
    std::int64_t prod = 1;
    for (int i = 0; i < fan; ++i) {
      if (a != 0 && prod > std::numeric_limits<std::int64_t>::max() / a) {
        return std::numeric_limits<std::int64_t>::max();
      }
      prod *= a;
    }
    if (prod == std::numeric_limits<std::int64_t>::max()) return prod;
    a = prod + 1;
  }
  return a;
}

}  // namespace bvkit
