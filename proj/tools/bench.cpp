// Compares the serial reference paths against the OpenMP-parallel ones for
// the three parallel maps: library build, profile extraction, and Monte
// Carlo evaluation. Also verifies that both paths produce identical results.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "sonar/config.hpp"
#include "sonar/experiments.hpp"
#include "sonar/library.hpp"
#include "sonar/matcher.hpp"
#include "sonar/microlocal.hpp"
#include "sonar/parallel.hpp"
#include "sonar/solver.hpp"

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

int main() {
  using namespace sonar;
  Scenario sc = desk_scenario();
  const int nthreads = resolve_threads(0);
  std::printf("benchmark: serial reference vs OpenMP (%d threads)\n\n", nthreads);

  // Small but representative grid: 2 materials x 4 geometries x 1 angle + 1
  // transition pair.
  ParamGrid grid = sc.grid;
  grid.materials = {Material::Sand, Material::Clay};
  grid.n_mg1 = 2;
  grid.n_mg2 = 1;
  grid.n_mg3 = 2;
  grid.transitions = {{Material::Sand, Material::Clay}};

  auto t0 = std::chrono::steady_clock::now();
  const auto lib_serial = build_library(grid, sc.exp, sc.domain, sc.solve, 1);
  const double ts_build = seconds_since(t0);
  t0 = std::chrono::steady_clock::now();
  const auto lib_par = build_library(grid, sc.exp, sc.domain, sc.solve, nthreads);
  const double tp_build = seconds_since(t0);
  double build_diff = 0;
  for (std::size_t i = 0; i < lib_serial.records.size(); ++i)
    build_diff = std::max(build_diff, max_abs_diff(lib_serial.records[i].backscatter,
                                                   lib_par.records[i].backscatter));
  std::printf("library build (%zu records): serial %.2fs, parallel %.2fs, speedup %.2fx, "
              "max diff %.1e\n",
              lib_serial.records.size(), ts_build, tp_build, ts_build / tp_build,
              build_diff);

  // Profile extraction over one solve.
  SeafloorParams params;
  params.geometry = lib_serial.records.front().params.geometry;
  const auto sol = solve_template(params, sc.exp, sc.domain, sc.solve);
  t0 = std::chrono::steady_clock::now();
  const auto prof_serial = backscatter_profile(sol.scattered, sc.exp, sc.domain, kDefaultR0,
                                               kDefaultEpsilonReg, 2, 1.0, 1);
  const double ts_prof = seconds_since(t0);
  t0 = std::chrono::steady_clock::now();
  const auto prof_par = backscatter_profile(sol.scattered, sc.exp, sc.domain, kDefaultR0,
                                            kDefaultEpsilonReg, 2, 1.0, nthreads);
  const double tp_prof = seconds_since(t0);
  std::printf("profile extraction (%zu points):  serial %.2fs, parallel %.2fs, speedup "
              "%.2fx, max diff %.1e\n",
              prof_serial.values.size(), ts_prof, tp_prof, ts_prof / tp_prof,
              max_abs_diff(prof_serial.values, prof_par.values));

  // Monte Carlo evaluation on a short synthetic seabed.
  SeabedModel model;
  model.width = 6.0;
  model.materials = {{0, 3, Material::Sand}, {3, 6, Material::Clay}};
  GeoParams g = params.geometry;
  model.geometry_of_x = [g](double) { return g; };
  t0 = std::chrono::steady_clock::now();
  const auto rep_serial = evaluate(8, model, {0.0}, lib_serial, sc.match, sc.exp, sc.domain,
                                   sc.solve, 0.05, 42, FidelityMode::Segmented, 1);
  const double ts_eval = seconds_since(t0);
  t0 = std::chrono::steady_clock::now();
  const auto rep_par = evaluate(8, model, {0.0}, lib_serial, sc.match, sc.exp, sc.domain,
                                sc.solve, 0.05, 42, FidelityMode::Segmented, nthreads);
  const double tp_eval = seconds_since(t0);
  std::printf("evaluation (8 trials):            serial %.2fs, parallel %.2fs, speedup "
              "%.2fx, accuracy diff %.1e\n",
              ts_eval, tp_eval, ts_eval / tp_eval,
              std::abs(rep_serial.material_accuracy - rep_par.material_accuracy));

  const bool ok = build_diff == 0.0 &&
                  max_abs_diff(prof_serial.values, prof_par.values) == 0.0 &&
                  rep_serial.material_accuracy == rep_par.material_accuracy;
  std::printf("\nserial/parallel agreement: %s\n", ok ? "exact" : "MISMATCH");
  return ok ? 0 : 1;
}
