// Acceptance gate: one pass/fail line per criterion, nonzero exit when any
// criterion fails. All checks run the reduced-frequency desk scenario.
#include <array>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "sonar/config.hpp"
#include "sonar/experiments.hpp"
#include "sonar/io.hpp"
#include "sonar/library.hpp"
#include "sonar/matcher.hpp"
#include "sonar/microlocal.hpp"
#include "sonar/solver.hpp"
#include "sonar/wavelet.hpp"

using namespace sonar;

namespace {

int g_failures = 0;

void report(int index, const char* name, bool ok, const std::string& detail) {
  std::printf("[%d] %-28s %s  (%s)\n", index, name, ok ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// |R| measured as the ratio of microlocally estimated scattered and incident
// amplitudes through the identical sampling pipeline (shared interpolation
// bias cancels in the ratio).
double measured_reflection(const SolveResult& sol, const ExperimentParams& e,
                          const DomainSpec& d) {
  const double keff = effective_wavenumber(e.wavenumber(), sol.h, e.incident_angle);
  const int L = truncation_order(kDefaultR0);
  const std::array<double, 2> center{0.5 * sol.width, d.receiver_line_height};
  const auto ds = sample_circle(sol.scattered, center, keff, kDefaultR0, L);
  const double a_scat = total_amplitude(decompose(ds, kDefaultR0, kDefaultEpsilonReg));
  const auto inc = discrete_incident_field(sol, e);
  const auto di = sample_circle(inc, center, keff, kDefaultR0, L);
  const double a_inc = total_amplitude(decompose(di, kDefaultR0, kDefaultEpsilonReg));
  return a_scat / a_inc;
}

double rayleigh_magnitude(const ExperimentParams& e, Material mat) {
  const auto p = material_properties(mat);
  const double om = e.omega();
  const cplx k1(om / e.water_speed, 0.0);
  const cplx k2(om / p.sound_speed, attenuation_to_neper(e.sediment_attenuation_db));
  const double kx = k1.real() * std::cos(e.incident_angle);
  cplx k1y = std::sqrt(k1 * k1 - kx * kx);
  cplx k2y = std::sqrt(k2 * k2 - kx * kx);
  if (k2y.imag() < 0) k2y = -k2y;
  const cplx z1 = e.water_density / k1y, z2 = p.density / k2y;
  return std::abs((z2 - z1) / (z2 + z1));
}

void criterion_rayleigh(const Scenario& sc) {
  SeafloorParams flat;
  flat.geometry = GeoParams::flat();
  double worst = 0;
  double worst_time = 0;
  std::string detail;
  // Normal incidence against the closed-form 0.3669, then the four grazing
  // angles against the oblique formula.
  for (double alpha : {M_PI / 2, M_PI / 12, M_PI / 6, M_PI / 4, M_PI / 3}) {
    ExperimentParams e = sc.exp;
    e.incident_angle = alpha;
    const auto t0 = std::chrono::steady_clock::now();
    const auto sol = solve_template(flat, e, sc.domain, sc.solve);
    worst_time = std::max(worst_time, seconds_since(t0));
    const double got = measured_reflection(sol, e, sc.domain);
    const double want = (alpha == M_PI / 2) ? 0.3669 : rayleigh_magnitude(e, Material::Sand);
    worst = std::max(worst, std::abs(got - want) / want);
  }
  char buf[128];
  std::snprintf(buf, sizeof(buf), "worst rel err %.2f%% (tol 5%%), slowest solve %.1fs",
                100 * worst, worst_time);
  report(1, "Rayleigh oracle", worst < 0.05 && worst_time < 60.0, buf);
}

void criterion_plane_waves() {
  const auto t0 = std::chrono::steady_clock::now();
  const double r0 = kDefaultR0;
  const int L = truncation_order(r0);
  std::mt19937_64 rng(20260823);
  std::uniform_real_distribution<double> uang(0.0, 2.0 * M_PI), uamp(0.1, 2.0);
  double two_bin_energy = 0, total_energy = 0, worst_amp = 0;
  for (int t = 0; t < 50; ++t) {
    const double beta0 = uang(rng), amp = uamp(rng);
    std::vector<cplx> samples(static_cast<std::size_t>(L));
    for (int l = 0; l < L; ++l) {
      const double bl = 2.0 * M_PI * l / L;
      samples[static_cast<std::size_t>(l)] =
          amp * std::exp(cplx(0.0, r0 * std::cos(bl - beta0)));
    }
    const auto dec = decompose(samples, r0, kDefaultEpsilonReg);
    const int l0 = static_cast<int>(std::floor(beta0 / (2.0 * M_PI / L))) % L;
    const int l1 = (l0 + 1) % L;
    for (double a : dec.amplitudes) total_energy += a * a;
    two_bin_energy += dec.amplitudes[static_cast<std::size_t>(l0)] *
                          dec.amplitudes[static_cast<std::size_t>(l0)] +
                      dec.amplitudes[static_cast<std::size_t>(l1)] *
                          dec.amplitudes[static_cast<std::size_t>(l1)];
    worst_amp = std::max(worst_amp, std::abs(total_amplitude(dec) - amp) / amp);
  }
  const double mass = two_bin_energy / total_energy;
  const double dt = seconds_since(t0);
  char buf[128];
  std::snprintf(buf, sizeof(buf),
                "two-bin mass %.1f%% (need 90%%), worst amp err %.2f%%, %.2fs", 100 * mass,
                100 * worst_amp, dt);
  report(2, "Plane-wave recovery", mass >= 0.90 && worst_amp < 0.05 && dt < 1.0, buf);
}

void criterion_wavelet() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst_parseval = 0, worst_rt = 0;
  for (int t = 0; t < 1000; ++t) {
    std::vector<double> s(512);
    for (auto& v : s) v = u(rng);
    const auto c = dwt_multilevel(s, 5);
    double sig = 0, coef = 0;
    for (double v : s) sig += v * v;
    for (double v : c.approx) coef += v * v;
    for (const auto& d : c.details)
      for (double v : d) coef += v * v;
    worst_parseval = std::max(worst_parseval,
                              std::abs(std::sqrt(coef) - std::sqrt(sig)) / std::sqrt(sig));
    const auto back = idwt_multilevel(c);
    for (std::size_t i = 0; i < s.size(); ++i)
      worst_rt = std::max(worst_rt, std::abs(back[i] - s[i]));
  }
  const auto hand = dwt_multilevel({1, 2, 3, 4}, 2);
  const bool hand_ok = std::abs(hand.approx[0] - 5.0) < 1e-12 &&
                       std::abs(hand.detail(2)[0] + 2.0) < 1e-12 &&
                       std::abs(hand.detail(1)[0] + 1.0 / std::sqrt(2.0)) < 1e-12 &&
                       std::abs(hand.detail(1)[1] + 1.0 / std::sqrt(2.0)) < 1e-12;
  const double dt = seconds_since(t0);
  char buf[128];
  std::snprintf(buf, sizeof(buf), "Parseval %.1e, round trip %.1e, %.2fs", worst_parseval,
                worst_rt, dt);
  report(3, "Wavelet suite", worst_parseval < 1e-12 && worst_rt < 1e-12 && hand_ok && dt < 1.0,
         buf);
}

void criterion_matcher(const Scenario& sc, const LibraryIndex& lib) {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<std::size_t> pick(0, lib.records.size() - 1);
  std::vector<std::size_t> truth;
  std::vector<double> signal;
  for (int i = 0; i < 20; ++i) {
    const std::size_t r = pick(rng);
    truth.push_back(r);
    signal.insert(signal.end(), lib.records[r].backscatter.begin(),
                  lib.records[r].backscatter.end());
  }
  const auto res = classify(signal, lib, sc.match, sc.domain, sc.exp.incident_angle);
  bool ok = res.matches.size() == truth.size() && res.prediction.size() == signal.size();
  int wrong = 0;
  for (std::size_t i = 0; ok && i < truth.size(); ++i) {
    if (!(res.matches[i].chosen == lib.records[truth[i]].params)) ++wrong;
    for (std::size_t c = 1; c < res.matches[i].candidate_counts.size(); ++c)
      if (res.matches[i].candidate_counts[c] > res.matches[i].candidate_counts[c - 1])
        ok = false;  // nesting violated
  }
  double max_pred = 0;
  for (std::size_t i = 0; ok && i < signal.size(); ++i)
    max_pred = std::max(max_pred, std::abs(res.prediction[i] - signal[i]));
  const double dt = seconds_since(t0);
  char buf[128];
  std::snprintf(buf, sizeof(buf),
                "%d/20 exact params, prediction diff %.1e, %zu templates, %.1fs", 20 - wrong,
                max_pred, lib.records.size(), dt);
  report(4, "Matcher self-consistency", ok && wrong == 0 && max_pred == 0.0 && dt < 10.0,
         buf);
}

void criterion_noise(const Scenario& sc, const LibraryIndex& lib) {
  const SeabedModel model = rescale_geometry(model_a(), sc.geometry_scale);
  const auto rep = evaluate(20, model, {2.0 * sc.domain.segment_width,
                                        0.5 * sc.domain.segment_width},
                            lib, sc.match, sc.exp, sc.domain, sc.solve, 0.05, 424242,
                            FidelityMode::Segmented);
  const double acc = rep.material_accuracy;
  const double det2 = rep.detection_rates.at(2.0 * sc.domain.segment_width);
  const double det05 = rep.detection_rates.at(0.5 * sc.domain.segment_width);
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "accuracy %.1f%% (need 90%%), detection 2ds %.0f%% (need 80%%), 0.5ds %.0f%%",
                100 * acc, 100 * det2, 100 * det05);
  report(5, "Noise robustness", acc >= 0.90 && det2 >= 0.80 && det05 < det2, buf);
}

void criterion_enriched(const Scenario& sc, const LibraryIndex& enriched) {
  // Clay-rock seabed with the desk Model A geometry.
  SeabedModel model;
  model.width = 6.0;
  model.materials = {{0.0, 3.0, Material::Clay}, {3.0, 6.0, Material::Rock}};
  const GeoParams g = rescale_geometry(model_a(), sc.geometry_scale).geometry_of_x(0.0);
  model.geometry_of_x = [g](double) { return g; };

  // The pure library is the enriched one with the transition extracts removed.
  LibraryIndex pure = enriched;
  std::erase_if(pure.records, [](const TemplateRecord& r) {
    return r.provenance == Provenance::TransitionExtract;
  });
  pure.grid.transitions = {};

  const auto rep_pure = evaluate(20, model, {0.0}, pure, sc.match, sc.exp, sc.domain,
                                 sc.solve, 0.05, 777, FidelityMode::Segmented);
  const auto rep_enriched = evaluate(20, model, {0.0}, enriched, sc.match, sc.exp,
                                     sc.domain, sc.solve, 0.05, 777,
                                     FidelityMode::Segmented);
  double fa_pure = 0, fa_enriched = 0;
  for (const auto& [type, rate] : rep_pure.false_alarm_rates) fa_pure += rate;
  for (const auto& [type, rate] : rep_enriched.false_alarm_rates) fa_enriched += rate;
  char buf[128];
  std::snprintf(buf, sizeof(buf), "clay-rock FA: pure %.1f%%, enriched %.1f%%", 100 * fa_pure,
                100 * fa_enriched);
  report(6, "Enriched-library effect", fa_enriched < fa_pure, buf);
}

void criterion_geometry(const Scenario& sc, const LibraryIndex& lib) {
  const SeabedModel model = rescale_geometry(model_a(), sc.geometry_scale);
  const auto rep = evaluate(1, model, {0.0}, lib, sc.match, sc.exp, sc.domain, sc.solve,
                            0.0, 1, FidelityMode::Segmented);
  bool bimodal = true;
  for (double e : rep.per_segment_mg2_abs_error)
    if (!(std::abs(e) < 1e-12 || std::abs(e - 0.5) < 1e-12)) bimodal = false;
  // One step of the library grid resolution, relative to the truth
  // magnitudes (E_i are relative errors).
  const double step1 = (sc.grid.mg1_max - sc.grid.mg1_min) / (sc.grid.n_mg1 - 1);
  const double step3 = (sc.grid.mg3_max - sc.grid.mg3_min) / (sc.grid.n_mg3 - 1);
  const GeoParams truth = model.geometry_of_x(0.0);
  const bool e1_ok = rep.geometry_errors[0] <= step1 / truth.mg1 + 1e-12;
  const bool e3_ok = rep.geometry_errors[2] <= step3 / truth.mg3 + 1e-12;
  char buf[128];
  std::snprintf(buf, sizeof(buf), "E1 %.2e, E3 %.2e, mg2 estimates bimodal: %s",
                rep.geometry_errors[0], rep.geometry_errors[2], bimodal ? "yes" : "no");
  report(7, "Geometry-error structure", bimodal && e1_ok && e3_ok, buf);
}

void criterion_determinism(const Scenario& sc, const LibraryIndex& lib) {
  // Identical seeds must give byte-identical signal and report payloads.
  SeabedModel model;
  model.width = 3.0;
  model.materials = {{0.0, 3.0, Material::Sand}};
  const GeoParams g = rescale_geometry(model_a(), sc.geometry_scale).geometry_of_x(0.0);
  model.geometry_of_x = [g](double) { return g; };

  auto run_once = [&](const std::string& tag) {
    const auto base = simulate_seabed(model, sc.exp, sc.domain, sc.solve);
    const auto noisy = add_noise(base, 0.05, 31337);
    const std::string sig_path = "acceptance_signal_" + tag + ".csv";
    write_signal_csv(sig_path, noisy);
    const auto rep = evaluate(3, model, {0.0}, lib, sc.match, sc.exp, sc.domain, sc.solve,
                              0.05, 31337, FidelityMode::Segmented);
    nlohmann::json j;
    to_json(j, rep);
    std::ifstream f(sig_path, std::ios::binary);
    std::string bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    std::remove(sig_path.c_str());
    return bytes + "\n" + j.dump();
  };
  const std::string a = run_once("a");
  const std::string b = run_once("b");
  char buf[128];
  std::snprintf(buf, sizeof(buf), "payloads %s (%zu bytes)",
                a == b ? "byte-identical" : "DIFFER", a.size());
  report(8, "Determinism", a == b, buf);
}

LibraryIndex shared_library(const Scenario& sc) {
  const std::string cache = "acceptance_library.bin";
  const std::size_t expected =
      2 * (sc.grid.alphas().size() *
           (sc.grid.materials.size() + sc.grid.transitions.size()) *
           sc.grid.geometries().size());
  try {
    auto lib = load_library(cache);
    if (lib.records.size() == expected) {
      std::fprintf(stderr, "using cached library (%zu records)\n", lib.records.size());
      return lib;
    }
  } catch (const std::exception&) {
    // fall through to a fresh build
  }
  std::fprintf(stderr, "building desk library (%zu records)...\n", expected);
  auto lib = build_library(sc.grid, sc.exp, sc.domain, sc.solve);
  save_library(lib, cache);
  return lib;
}

}  // namespace

int main() {
  const Scenario sc = desk_scenario();
  criterion_rayleigh(sc);
  criterion_plane_waves();
  criterion_wavelet();
  const LibraryIndex lib = shared_library(sc);
  criterion_matcher(sc, lib);
  criterion_noise(sc, lib);
  criterion_enriched(sc, lib);
  criterion_geometry(sc, lib);
  criterion_determinism(sc, lib);
  if (g_failures) std::printf("%d criterion(s) FAILED\n", g_failures);
  else std::printf("all acceptance criteria passed\n");
  return g_failures ? 1 : 0;
}
