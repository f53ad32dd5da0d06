#include <doctest.h>

#include <stdexcept>
#include <algorithm>

#include <set>

#include "bvkit/dyadic.hpp"

using namespace bvkit;

TEST_CASE("children partition the parent") {
  const auto root1 = DyadicCube::root(1);
  auto kids = root1.children();
  REQUIRE(kids.size() == 2);
  CHECK(kids[0].lower(0) == 0.0);
  CHECK(kids[0].upper(0) == 0.5);
  CHECK(kids[1].lower(0) == 0.5);
  CHECK(kids[1].upper(0) == 1.0);

  const auto root2 = DyadicCube::root(2);
  CHECK(root2.children().size() == 4);

  auto sub = kids[0].children();
  CHECK(sub[0].upper(0) == 0.25);
  CHECK(sub[1].lower(0) == 0.25);
}

TEST_CASE("mesh and is_packing") {
  const auto root = DyadicCube::root(1);
  auto kids = root.children();
  CHECK(mesh(Packing{{root}}) == 1.0);
  CHECK(mesh(Packing{{kids[0], kids[1]}}) == 0.5);
  CHECK(mesh(Packing{}) == 0.0);

  CHECK_FALSE(is_packing({root, kids[0]}));
  CHECK(is_packing({kids[0], kids[1]}));
  CHECK(is_packing({root}));
}

TEST_CASE("enumerate_packings counts match the antichain recurrence") {
  // A(L) = 1 + A(L-1)^(2^d), A(0) = 2.
  CHECK(count_packings(1, 1) == 5);
  CHECK(count_packings(1, 2) == 26);
  CHECK(count_packings(2, 1) == 17);

  for (auto [d, L] : std::vector<std::pair<int, int>>{{1, 1}, {1, 2}, {1, 3}, {2, 1}, {2, 2}}) {
    std::int64_t seen = 0;
    bool saw_empty = false;
    enumerate_packings(d, L, [&](const Packing& pi) {
      ++seen;
      saw_empty = saw_empty || pi.empty();
      REQUIRE(is_packing(pi.cubes));
    });
    CHECK(seen == count_packings(d, L));
    CHECK(saw_empty);
  }
}

TEST_CASE("enumerate_packings emits each antichain once") {
  std::set<std::vector<std::pair<int, std::uint32_t>>> seen;
  enumerate_packings(1, 2, [&](const Packing& pi) {
    std::vector<std::pair<int, std::uint32_t>> key;
    for (const auto& q : pi.cubes) key.emplace_back(q.level, q.index[0]);
    std::sort(key.begin(), key.end());
    CHECK(seen.insert(key).second);
  });
  CHECK(seen.size() == 26);
}

TEST_CASE("enumeration guard") {
  CHECK_THROWS_AS(enumerate_packings(2, 7, [](const Packing&) {}), std::invalid_argument);
}

TEST_CASE("containment") {
  const auto root = DyadicCube::root(2);
  const auto kid = root.child(3);
  CHECK(root.contains(kid));
  CHECK(root.contains(root));
  CHECK_FALSE(kid.contains(root));
  CHECK_FALSE(kid.contains(root.child(0)));
}
