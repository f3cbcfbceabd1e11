#include <doctest.h>

#include <cmath>
#include <vector>

#include "sonar/config.hpp"
#include "sonar/experiments.hpp"
#include "sonar/library.hpp"
#include "sonar/solver.hpp"

using namespace sonar;

namespace {

// Library grid pinned to a single geometry point (grids collapse when
// n = 1; lo = hi is implied by grid_value's n == 1 -> lo rule).
ParamGrid point_grid(const Scenario& sc, const GeoParams& g,
                     std::vector<Material> mats,
                     std::vector<std::pair<Material, Material>> trans) {
  ParamGrid grid = sc.grid;
  grid.n_alpha = 1;
  grid.alpha_min = sc.exp.incident_angle;
  grid.alpha_max = sc.exp.incident_angle;
  grid.n_mg1 = 1;
  grid.mg1_min = g.mg1;
  grid.n_mg2 = 1;
  grid.mg2_min = g.mg2;
  grid.n_mg3 = 1;
  grid.mg3_min = g.mg3;
  grid.materials = std::move(mats);
  grid.transitions = std::move(trans);
  return grid;
}

double rel_l2(const std::vector<double>& a, const std::vector<double>& b) {
  double num = 0, den = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += (a[i] - b[i]) * (a[i] - b[i]);
    den += b[i] * b[i];
  }
  return std::sqrt(num / den);
}

}  // namespace

TEST_CASE("model A worked examples") {
  const auto m = model_a();
  CHECK(m.width == 20.0);
  CHECK(m.material_at(1.0) == Material::Sand);
  CHECK(m.material_at(3.0) == Material::Rock);
  CHECK(m.material_at(6.0) == Material::Clay);
  CHECK(m.material_at(15.0) == Material::Sand);
  const auto g = m.geometry_of_x(7.3);
  CHECK(g.mg1 == 15.0);
  CHECK(g.mg2 == 1.0);
  CHECK(g.mg3 == 26.0);
  CHECK(m.junctions() == std::vector<double>{2.0, 5.0, 8.0});
}

TEST_CASE("model B worked examples") {
  const auto m = model_b();
  CHECK(m.material_at(2.0) == Material::Sand);
  CHECK(m.material_at(6.0) == Material::Rock);
  CHECK(m.material_at(15.0) == Material::Clay);
  CHECK(m.geometry_of_x(10.0).mg3 == doctest::Approx(25.5));
  CHECK(m.geometry_of_x(0.0).mg2 == doctest::Approx(1.0));
  CHECK(m.geometry_of_x(12.0).mg2 == doctest::Approx(1.0 + 0.5 - 0.6));
  CHECK(m.geometry_of_x(2.0).mg1 == doctest::Approx(14.0));
  CHECK(m.geometry_of_x(7.0).mg1 == doctest::Approx(14.0 + 0.2 * 7 - 1.0));
  CHECK(m.geometry_of_x(11.0).mg1 == doctest::Approx(15.0));
}

TEST_CASE("object placement") {
  const auto a2 = with_object(model_a(), 2.0);
  REQUIRE(a2.object.has_value());
  CHECK(a2.object->first == doctest::Approx(12.0));
  CHECK(a2.object->second == doctest::Approx(14.0));
  const auto b4 = with_object(model_b(), 4.0);
  CHECK(b4.object->first == doctest::Approx(0.0));
  CHECK(b4.object->second == doctest::Approx(4.0));
  const auto none = with_object(model_a(), 0.0);
  CHECK(!none.object.has_value());
  CHECK_THROWS(with_object(model_a(), -1.0));
}

TEST_CASE("geometry rescaling multiplies the spatial frequencies only") {
  const auto m = rescale_geometry(model_b(), 0.1);
  const auto orig = model_b().geometry_of_x(7.0);
  const auto scaled = m.geometry_of_x(7.0);
  CHECK(scaled.mg1 == doctest::Approx(0.1 * orig.mg1));
  CHECK(scaled.mg3 == doctest::Approx(0.1 * orig.mg3));
  CHECK(scaled.mg2 == doctest::Approx(orig.mg2));
  CHECK(scaled.amplitude == doctest::Approx(orig.amplitude));
}

TEST_CASE("derived seeds are deterministic and well spread") {
  CHECK(derive_seed(42, 0) == derive_seed(42, 0));
  CHECK(derive_seed(42, 0) != derive_seed(42, 1));
  CHECK(derive_seed(42, 0) != derive_seed(43, 0));
}

TEST_CASE("noise injection") {
  BackscatterSignal base;
  base.values.assign(10240, 1.0);
  base.x_coords.assign(10240, 0.0);

  const auto same = add_noise(base, 0.0, 7);
  CHECK(same.values == base.values);

  const auto n1 = add_noise(base, 0.05, 7);
  const auto n2 = add_noise(base, 0.05, 7);
  CHECK(n1.values == n2.values);
  const auto n3 = add_noise(base, 0.05, 8);
  CHECK(n1.values != n3.values);

  double mean = 0;
  for (std::size_t i = 0; i < base.values.size(); ++i) mean += n1.values[i] - 1.0;
  mean /= static_cast<double>(base.values.size());
  double var = 0;
  for (std::size_t i = 0; i < base.values.size(); ++i) {
    const double d = n1.values[i] - 1.0 - mean;
    var += d * d;
  }
  var /= static_cast<double>(base.values.size() - 1);
  // RMS of the signal is 1, so the noise std should be 0.05 +- 0.005.
  CHECK(std::abs(std::sqrt(var) - 0.05) < 0.005);
  CHECK_THROWS(add_noise(base, -0.1, 7));
}

TEST_CASE("one-segment model reproduces the template solve") {
  Scenario sc = desk_scenario();
  GeoParams g{1.0, 1.0, 2.5, 0.01};
  SeabedModel m;
  m.width = sc.domain.segment_width;
  m.materials = {{0.0, m.width, Material::Sand}};
  m.geometry_of_x = [g](double) { return g; };

  const auto sig = simulate_seabed(m, sc.exp, sc.domain, sc.solve);
  REQUIRE(sig.values.size() == static_cast<std::size_t>(sc.domain.samples_per_segment));

  const auto lib = build_library(point_grid(sc, g, {Material::Sand}, {}), sc.exp,
                                 sc.domain, sc.solve);
  double max_diff = 0;
  for (std::size_t i = 0; i < sig.values.size(); ++i)
    max_diff = std::max(max_diff, std::abs(sig.values[i] - lib.records[0].backscatter[i]));
  CHECK(max_diff < 1e-9);
}

TEST_CASE("segmented and full-domain simulations agree on homogeneous sand") {
  Scenario sc = desk_scenario();
  // Segment-periodic ripple: segmented solves tile the full-domain solution.
  GeoParams g{1.0, 1.0, 3.0, 0.01};
  SeabedModel m;
  m.width = 2.0 * sc.domain.segment_width;
  m.materials = {{0.0, m.width, Material::Sand}};
  m.geometry_of_x = [g](double) { return g; };

  const auto seg = simulate_seabed(m, sc.exp, sc.domain, sc.solve, FidelityMode::Segmented);
  const auto full = simulate_seabed(m, sc.exp, sc.domain, sc.solve, FidelityMode::FullDomain);
  REQUIRE(seg.values.size() == full.values.size());
  CHECK(rel_l2(seg.values, full.values) < 0.05);
}

TEST_CASE("noiseless evaluation on a library-exact seabed is perfect") {
  Scenario sc = desk_scenario();
  GeoParams g{1.0, 1.0, 2.5, 0.01};
  SeabedModel m;
  m.width = 4.0;
  m.materials = {{0.0, 2.0, Material::Sand}, {2.0, 4.0, Material::Clay}};
  m.geometry_of_x = [g](double) { return g; };

  const auto lib = build_library(
      point_grid(sc, g, {Material::Sand, Material::Clay}, {{Material::Sand, Material::Clay}}),
      sc.exp, sc.domain, sc.solve);
  const auto report = evaluate(2, m, {0.0}, lib, sc.match, sc.exp, sc.domain, sc.solve,
                               0.0, 1234, FidelityMode::Segmented);
  CHECK(report.material_accuracy == doctest::Approx(1.0));
  for (const auto& [type, rate] : report.false_alarm_rates) {
    INFO("transition ", type);
    CHECK(rate == doctest::Approx(0.0));
  }
  REQUIRE(report.false_alarm_rates.size() == 1);  // one sand-clay junction type
  for (int c = 0; c < 3; ++c) CHECK(report.geometry_errors[c] == doctest::Approx(0.0));
  for (double e : report.per_segment_mg2_abs_error) CHECK(e == doctest::Approx(0.0));
  CHECK(report.detection_rates.empty());

  // Reproducibility: the same master seed gives an identical report.
  const auto again = evaluate(2, m, {0.0}, lib, sc.match, sc.exp, sc.domain, sc.solve,
                              0.0, 1234, FidelityMode::Segmented);
  CHECK(again.material_accuracy == report.material_accuracy);
  CHECK(again.per_segment_mg2_abs_error == report.per_segment_mg2_abs_error);
}

TEST_CASE("trial report JSON round trip") {
  TrialReport r;
  r.false_alarm_rates = {{"sand-clay", 0.25}, {"clay-rock", 0.0}};
  r.detection_rates = {{2.0, 1.0}, {0.5, 0.1}};
  r.geometry_errors[0] = 0.01;
  r.geometry_errors[1] = 0.5;
  r.geometry_errors[2] = 0.0;
  r.material_accuracy = 0.97;
  r.n_trials = 20;
  r.seed = 99;
  r.noise_level = 0.05;
  r.per_segment_mg2_abs_error = {0.0, 0.5, 0.0};

  nlohmann::json j;
  to_json(j, r);
  TrialReport back;
  from_json(j, back);
  CHECK(back.false_alarm_rates == r.false_alarm_rates);
  CHECK(back.detection_rates == r.detection_rates);
  for (int c = 0; c < 3; ++c) CHECK(back.geometry_errors[c] == r.geometry_errors[c]);
  CHECK(back.material_accuracy == r.material_accuracy);
  CHECK(back.n_trials == r.n_trials);
  CHECK(back.seed == r.seed);
  CHECK(back.noise_level == r.noise_level);
  CHECK(back.per_segment_mg2_abs_error == r.per_segment_mg2_abs_error);
}
