#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "bvkit/builtins.hpp"
#include "bvkit/io.hpp"

using namespace bvkit;

namespace {

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("bvkit_test_" + std::to_string(std::random_device{}()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
};

}  // namespace

TEST_CASE("grid binary round trip with sidecar") {
  TempDir tmp;
  const GridFunction f = make_builtin("random-smooth", 2, 4, 5);
  const auto file = tmp.path / "f.gfbin";
  save_grid(f, file);
  const GridFunction g = load_grid(file);
  REQUIRE(g.dim() == 2);
  REQUIRE(g.resolution() == 4);
  for (std::int64_t c = 0; c < f.size(); ++c) CHECK(g[c] == f[c]);

  // Sidecar parses and matches.
  std::ifstream side(file.string() + ".json");
  json j;
  side >> j;
  CHECK(j.at("d") == 2);
  CHECK(j.at("m") == 4);
  CHECK(j.at("count") == f.size());

  CHECK_THROWS(load_grid(tmp.path / "missing.gfbin"));
}

TEST_CASE("csv import, d = 1") {
  TempDir tmp;
  const auto file = tmp.path / "v.csv";
  {
    std::ofstream os(file);
    os << "0.5\n-1.25\n3\n0\n";
  }
  const GridFunction f = load_csv_1d(file);
  CHECK(f.resolution() == 2);
  CHECK(f[1] == -1.25);

  {
    std::ofstream os(file);
    os << "1,2,3\n";
  }
  CHECK_THROWS(load_csv_1d(file));
}

TEST_CASE("packing json round trip") {
  Packing pi{{DyadicCube(2, {1}), DyadicCube(1, {1})}};
  const json j = to_json(pi);
  const Packing back = packing_from_json(j);
  REQUIRE(back.size() == 2);
  CHECK(back.cubes[0] == pi.cubes[0]);
  CHECK(back.cubes[1] == pi.cubes[1]);

  // Non-antichain rejected.
  json bad = json::array();
  bad.push_back(to_json(DyadicCube::root(1)));
  bad.push_back(to_json(DyadicCube(1, {0})));
  CHECK_THROWS_AS(packing_from_json(bad), std::invalid_argument);
}

TEST_CASE("atomic writes leave no partial files") {
  TempDir tmp;
  const auto file = tmp.path / "out.csv";
  write_text_atomic(file, "a,b\n1,2\n");
  std::ifstream is(file);
  std::string line;
  std::getline(is, line);
  CHECK(line == "a,b");
  CHECK_FALSE(std::filesystem::exists(file.string() + ".tmp"));
}

TEST_CASE("builtins") {
  CHECK(make_builtin("const", 2, 3)[0] == 1.0);
  const GridFunction lin = make_builtin("linear", 1, 3);
  CHECK(lin[0] == doctest::Approx(1.0 / 16.0));

  // Monomial projections are exact cell averages.
  const GridFunction sq = make_builtin("monomial:2", 1, 2);
  CHECK(sq[0] == doctest::Approx((std::pow(0.25, 3) - 0.0) / (3 * 0.25)).epsilon(1e-14));

  // Step is 0 left of 1/3 and 1 right of it.
  const GridFunction st = make_builtin("step", 1, 4);
  CHECK(st[0] == 0.0);
  CHECK(st[15] == 1.0);

  // Seeded ids are reproducible.
  const GridFunction r1 = make_builtin("random-smooth", 1, 4, 33);
  const GridFunction r2 = make_builtin("random-smooth", 1, 4, 33);
  const GridFunction r3 = make_builtin("random-smooth", 1, 4, 34);
  bool same = true, differs = false;
  for (std::int64_t c = 0; c < r1.size(); ++c) {
    same = same && r1[c] == r2[c];
    differs = differs || r1[c] != r3[c];
  }
  CHECK(same);
  CHECK(differs);

  CHECK_THROWS_AS(make_builtin("nope", 1, 3), std::invalid_argument);
}

TEST_CASE("svg emitter produces a polyline") {
  const std::string svg = svg_polyline({1, 2, 4}, {1, 0.5, 0.25}, "decay", true);
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("polyline") != std::string::npos);
}
