#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <vector>

#include "sonar/config.hpp"
#include "sonar/errors.hpp"
#include "sonar/library.hpp"

using namespace sonar;

namespace {

// Small handcrafted index (no solves) for persistence and query tests.
LibraryIndex synthetic_index() {
  LibraryIndex idx;
  idx.grid.alpha_min = 0.3;
  idx.grid.alpha_max = 0.5;
  idx.grid.n_alpha = 2;
  idx.build_metadata = "synthetic";
  auto add = [&](std::uint32_t id, Material m, double alpha, double base) {
    TemplateRecord r;
    r.id = id;
    r.params.material = m;
    r.params.geometry = {1.0 + id, 0.5, 2.5, 0.01};
    r.alpha = alpha;
    r.backscatter = {base, base + 0.1, base + 0.2, base + 0.3};
    idx.records.push_back(r);
  };
  add(0, Material::Sand, 0.3, 0.5);
  add(2, Material::Clay, 0.3, 0.7);
  add(1, Material::Sand, 0.5, 0.9);
  idx.records.back().provenance = Provenance::TransitionExtract;
  idx.records.back().left = Material::Sand;
  idx.records.back().right = Material::Clay;
  idx.records.back().side = Side::Right;
  return idx;
}

ParamGrid tiny_grid(const Scenario& sc) {
  ParamGrid g = sc.grid;
  g.n_alpha = 1;
  g.materials = {Material::Sand};
  g.n_mg1 = 1;
  g.n_mg2 = 1;
  g.n_mg3 = 1;
  // Segment-periodic ripple (integer cycles per segment) so the periodicity
  // identities between the two central segments hold exactly.
  g.mg1_min = 1.0;
  g.mg3_min = 3.0;
  g.transitions = {};
  return g;
}

std::string read_all(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  REQUIRE(f.good());
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

void write_all(const std::string& path, const std::string& bytes) {
  std::ofstream f(path, std::ios::binary);
  f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

}  // namespace

TEST_CASE("grid value and enumeration") {
  CHECK(ParamGrid::grid_value(2.0, 6.0, 1, 0) == 2.0);
  CHECK(ParamGrid::grid_value(2.0, 6.0, 3, 0) == 2.0);
  CHECK(ParamGrid::grid_value(2.0, 6.0, 3, 1) == 4.0);
  CHECK(ParamGrid::grid_value(2.0, 6.0, 3, 2) == 6.0);

  ParamGrid g;
  g.n_alpha = 3;
  CHECK(g.alphas().size() == 3);
  CHECK(g.alphas().front() == doctest::Approx(M_PI / 12));
  CHECK(g.alphas().back() == doctest::Approx(M_PI / 3));
  g.n_mg1 = 2;
  g.n_mg2 = 2;
  g.n_mg3 = 3;
  const auto geoms = g.geometries();
  CHECK(geoms.size() == 12);
  CHECK(geoms[0].mg1 == 10.0);
  CHECK(geoms[0].mg2 == 0.5);
  CHECK(geoms[0].mg3 == 25.0);
  CHECK(geoms[1].mg3 == 27.5);  // mg3 varies fastest
  for (const auto& geo : geoms) CHECK(geo.amplitude == 0.01);
}

TEST_CASE("minimal build produces the two central-segment twins") {
  Scenario sc = desk_scenario();
  const auto lib = build_library(tiny_grid(sc), sc.exp, sc.domain, sc.solve);
  REQUIRE(lib.records.size() == 2);
  CHECK(lib.records[0].id == 0);
  CHECK(lib.records[1].id == 1);
  for (const auto& r : lib.records) {
    CHECK(r.provenance == Provenance::PurePeriodic);
    CHECK(r.params.material == Material::Sand);
    CHECK(r.backscatter.size() ==
          static_cast<std::size_t>(sc.domain.samples_per_segment));
    for (double v : r.backscatter) {
      CHECK(v >= 0.0);
      CHECK(v <= lib.magnitude_cap * sc.exp.source_strength);
    }
  }
  // Periodicity: the two central segments of one periodic solve are twins.
  double max_diff = 0;
  for (std::size_t i = 0; i < lib.records[0].backscatter.size(); ++i)
    max_diff = std::max(max_diff, std::abs(lib.records[0].backscatter[i] -
                                           lib.records[1].backscatter[i]));
  CHECK(max_diff < 1e-9);

  // Determinism: rebuilding reproduces the records.
  const auto again = build_library(tiny_grid(sc), sc.exp, sc.domain, sc.solve);
  for (std::size_t r = 0; r < 2; ++r)
    for (std::size_t i = 0; i < lib.records[r].backscatter.size(); ++i)
      CHECK(std::abs(again.records[r].backscatter[i] - lib.records[r].backscatter[i]) <
            1e-9);
}

TEST_CASE("transition build labels sides with their own material") {
  Scenario sc = desk_scenario();
  ParamGrid g = tiny_grid(sc);
  g.materials = {};
  g.transitions = {{Material::Sand, Material::Clay}};
  const auto lib = build_library(g, sc.exp, sc.domain, sc.solve);
  REQUIRE(lib.records.size() == 2);
  CHECK(lib.records[0].provenance == Provenance::TransitionExtract);
  CHECK(lib.records[0].params.material == Material::Sand);
  CHECK(lib.records[0].side == Side::Left);
  CHECK(lib.records[1].params.material == Material::Clay);
  CHECK(lib.records[1].side == Side::Right);
  CHECK(lib.records[0].left == Material::Sand);
  CHECK(lib.records[0].right == Material::Clay);
}

TEST_CASE("record count scales with the grid") {
  Scenario sc = desk_scenario();
  ParamGrid g = tiny_grid(sc);
  g.materials = {Material::Sand, Material::Clay};
  g.n_mg1 = 2;
  g.transitions = {{Material::Sand, Material::Clay}};
  const auto lib = build_library(g, sc.exp, sc.domain, sc.solve);
  // 2 records per task: (2 materials x 2 geometries + 1 transition x 2
  // geometries) x 1 angle = 6 tasks.
  CHECK(lib.records.size() == 12);
  ParamGrid empty = tiny_grid(sc);
  empty.materials = {};
  empty.transitions = {};
  CHECK_THROWS_AS(build_library(empty, sc.exp, sc.domain, sc.solve, 1),
                  std::invalid_argument);
}

TEST_CASE("save/load round trip is lossless and byte-stable") {
  const auto idx = synthetic_index();
  const std::string p1 = "test_lib_a.bin", p2 = "test_lib_b.bin";
  save_library(idx, p1);
  save_library(idx, p2);
  CHECK(read_all(p1) == read_all(p2));

  const auto back = load_library(p1);
  REQUIRE(back.records.size() == idx.records.size());
  for (std::size_t i = 0; i < idx.records.size(); ++i) {
    CHECK(back.records[i].id == idx.records[i].id);
    CHECK(back.records[i].params.material == idx.records[i].params.material);
    CHECK(back.records[i].params.geometry == idx.records[i].params.geometry);
    CHECK(back.records[i].alpha == idx.records[i].alpha);
    CHECK(back.records[i].backscatter == idx.records[i].backscatter);
    CHECK(back.records[i].provenance == idx.records[i].provenance);
  }
  CHECK(back.records[2].left == Material::Sand);
  CHECK(back.records[2].right == Material::Clay);
  CHECK(back.records[2].side == Side::Right);
  CHECK(back.build_metadata == "synthetic");
  CHECK(back.grid.n_alpha == 2);
  std::remove(p1.c_str());
  std::remove(p2.c_str());
}

TEST_CASE("empty library round trips") {
  LibraryIndex empty;
  const std::string path = "test_lib_empty.bin";
  save_library(empty, path);
  CHECK(load_library(path).records.empty());
  std::remove(path.c_str());
}

TEST_CASE("corrupt files are rejected") {
  const auto idx = synthetic_index();
  const std::string path = "test_lib_corrupt.bin";
  save_library(idx, path);
  const std::string good = read_all(path);

  std::string bad_magic = good;
  bad_magic[0] = 'X';
  write_all(path, bad_magic);
  CHECK_THROWS_AS(load_library(path), DataFormatError);

  std::string bad_payload = good;
  bad_payload[bad_payload.size() - 12] ^= 0x5A;  // flip a payload byte: CRC must catch it
  write_all(path, bad_payload);
  CHECK_THROWS_AS(load_library(path), DataFormatError);

  write_all(path, good.substr(0, good.size() / 2));  // truncation
  CHECK_THROWS_AS(load_library(path), DataFormatError);

  std::remove(path.c_str());
  CHECK_THROWS_AS(load_library("no_such_file.bin"), DataFormatError);
}

TEST_CASE("query snaps to the nearest grid angle and filters deterministically") {
  const auto idx = synthetic_index();
  // Nearest to 0.34 is 0.3: two records, ordered by id.
  auto r = query(idx, std::nullopt, 0.34);
  REQUIRE(r.size() == 2);
  CHECK(r[0]->id == 0);
  CHECK(r[1]->id == 2);
  // Exact tie 0.4: the earlier grid angle (0.3) wins.
  r = query(idx, std::nullopt, 0.4);
  REQUIRE(r.size() == 2);
  CHECK(r[0]->alpha == doctest::Approx(0.3));
  // Material filter.
  r = query(idx, Material::Clay, 0.3);
  REQUIRE(r.size() == 1);
  CHECK(r[0]->id == 2);
  // Nearest to 0.49 is 0.5.
  r = query(idx, std::nullopt, 0.49);
  REQUIRE(r.size() == 1);
  CHECK(r[0]->id == 1);
  // Empty library.
  CHECK(query(LibraryIndex{}, std::nullopt, 0.3).empty());
}
