#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "sonar/config.hpp"
#include "sonar/errors.hpp"
#include "sonar/experiments.hpp"
#include "sonar/io.hpp"
#include "sonar/library.hpp"
#include "sonar/matcher.hpp"
#include "sonar/microlocal.hpp"
#include "sonar/parallel.hpp"
#include "sonar/solver.hpp"

namespace {

using nlohmann::json;

sonar::SeabedModel make_model(const std::string& name, const sonar::Scenario& sc) {
  sonar::SeabedModel m;
  if (name == "a")
    m = sonar::model_a();
  else if (name == "b")
    m = sonar::model_b();
  else
    throw sonar::DataFormatError("unknown model: " + name + " (expected 'a' or 'b')");
  return sonar::rescale_geometry(m, sc.geometry_scale);
}

sonar::FidelityMode parse_mode(const std::string& mode) {
  if (mode == "segmented") return sonar::FidelityMode::Segmented;
  if (mode == "full") return sonar::FidelityMode::FullDomain;
  throw sonar::DataFormatError("unknown fidelity mode: " + mode);
}

std::size_t expected_record_count(const sonar::ParamGrid& grid) {
  const std::size_t geoms = static_cast<std::size_t>(grid.n_mg1) * grid.n_mg2 * grid.n_mg3;
  const std::size_t alphas = static_cast<std::size_t>(grid.n_alpha);
  return 2 * alphas * geoms * (grid.materials.size() + grid.transitions.size());
}

int cmd_build_library(const std::string& config_path, const std::string& out,
                      bool resume, int threads, bool quiet) {
  sonar::Scenario sc =
      config_path.empty() ? sonar::desk_scenario() : sonar::load_scenario(config_path);
  if (sc.grid.mg2_max > 1.0)
    std::cerr << "warning: mg2 range exceeds 1 (allowed, outside the standard grid)\n";

  if (resume && std::filesystem::exists(out)) {
    try {
      const auto existing = sonar::load_library(out);
      if (existing.records.size() == expected_record_count(sc.grid)) {
        if (!quiet)
          std::cout << "library complete (" << existing.records.size()
                    << " records); nothing to do\n";
        return 0;
      }
    } catch (const sonar::DataFormatError&) {
      // fall through and rebuild
    }
  }

  const auto t0 = std::chrono::steady_clock::now();
  sonar::BuildProgress progress = nullptr;
  if (!quiet)
    progress = [](std::size_t done, std::size_t total) {
      if (done % 50 == 0 || done == total)
        std::cout << "  solved " << done << "/" << total << " grid points\n";
    };
  auto lib = sonar::build_library(sc.grid, sc.exp, sc.domain, sc.solve, threads, progress);
  lib.build_metadata = "seafloor-acoustics template library; scenario=" + sc.name;
  sonar::save_library(lib, out);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!quiet)
    std::cout << "built " << lib.records.size() << " templates in " << secs << " s -> "
              << out << "\n";
  return 0;
}

int cmd_simulate(const std::string& config_path, const std::string& model_name,
                 double object_width, double noise, std::uint64_t seed,
                 const std::string& mode, const std::string& out, int threads) {
  sonar::Scenario sc =
      config_path.empty() ? sonar::desk_scenario() : sonar::load_scenario(config_path);
  const auto model = sonar::with_object(make_model(model_name, sc), object_width);
  auto sig = sonar::simulate_seabed(model, sc.exp, sc.domain, sc.solve, parse_mode(mode),
                                    threads);
  if (noise > 0) sig = sonar::add_noise(sig, noise, seed);
  sonar::write_signal_csv(out, sig);
  std::cout << "wrote " << sig.values.size() << " samples (" << mode << " mode) -> " << out
            << "\n";
  return 0;
}

int cmd_classify(const std::string& library_path, const std::string& signal_path,
                 const std::string& out, int threads) {
  const auto lib = sonar::load_library(library_path);
  const auto sig = sonar::read_signal_csv(signal_path);
  sonar::MatchConfig cfg;
  const auto result = sonar::classify(sig.values, lib, cfg, lib.domain,
                                      lib.exp.incident_angle, threads);
  json j;
  j["segments"] = json::array();
  for (const auto& m : result.matches) {
    json seg;
    seg["index"] = m.segment_index;
    seg["material"] = sonar::material_name(m.chosen.material);
    seg["mg1"] = m.chosen.geometry.mg1;
    seg["mg2"] = m.chosen.geometry.mg2;
    seg["mg3"] = m.chosen.geometry.mg3;
    seg["stop_level"] = m.stop_level;
    seg["misfit"] = m.final_misfit;
    seg["template_id"] = m.template_id;
    j["segments"].push_back(seg);
  }
  j["prediction"] = result.prediction;
  std::ofstream f(out);
  if (!f) throw sonar::DataFormatError("cannot open for writing: " + out);
  f << j.dump(2) << "\n";
  std::cout << "classified " << result.matches.size() << " segments -> " << out << "\n";
  return 0;
}

int cmd_evaluate(const std::string& config_path, const std::string& library_path,
                 const std::string& model_name, int trials,
                 const std::vector<double>& widths, double noise, std::uint64_t seed,
                 const std::string& mode, const std::string& report_path, int threads) {
  sonar::Scenario sc =
      config_path.empty() ? sonar::desk_scenario() : sonar::load_scenario(config_path);
  const auto lib = sonar::load_library(library_path);
  const auto model = make_model(model_name, sc);
  const auto report =
      sonar::evaluate(trials, model, widths.empty() ? std::vector<double>{0.0} : widths,
                      lib, sc.match, sc.exp, sc.domain, sc.solve, noise, seed,
                      parse_mode(mode), threads);
  json j = report;
  std::ofstream f(report_path);
  if (!f) throw sonar::DataFormatError("cannot open for writing: " + report_path);
  f << j.dump(2) << "\n";
  std::cout << "evaluated " << trials << " trials x " << (widths.empty() ? 1 : widths.size())
            << " widths -> " << report_path << "\n";
  return 0;
}

void write_polyline_svg(const std::string& path,
                        const std::vector<std::vector<double>>& series,
                        const std::vector<std::string>& colors, const std::string& title) {
  const int W = 960, H = 360, pad = 40;
  double lo = 1e300, hi = -1e300;
  std::size_t n = 0;
  for (const auto& s : series)
    for (const double v : s) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
      n = std::max(n, s.size());
    }
  if (n == 0) throw sonar::DataFormatError("no data to plot");
  if (hi - lo < 1e-12) hi = lo + 1.0;
  std::ofstream f(path);
  if (!f) throw sonar::DataFormatError("cannot open for writing: " + path);
  f << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W << "' height='" << H
    << "'>\n<rect width='100%' height='100%' fill='white'/>\n<text x='10' y='20'>"
    << title << "</text>\n";
  for (std::size_t si = 0; si < series.size(); ++si) {
    const auto& s = series[si];
    f << "<polyline fill='none' stroke='" << colors[si % colors.size()]
      << "' stroke-width='1' points='";
    for (std::size_t i = 0; i < s.size(); ++i) {
      const double x = pad + (W - 2.0 * pad) * static_cast<double>(i) /
                                 static_cast<double>(std::max<std::size_t>(n - 1, 1));
      const double y = H - pad - (H - 2.0 * pad) * (s[i] - lo) / (hi - lo);
      f << x << "," << y << " ";
    }
    f << "'/>\n";
  }
  f << "</svg>\n";
}

int cmd_report(const std::string& report_path, const std::string& signal_path,
               const std::string& classification_path, const std::string& out_dir) {
  std::ifstream f(report_path);
  if (!f) throw sonar::DataFormatError("cannot open: " + report_path);
  json j;
  try {
    f >> j;
  } catch (const json::exception& e) {
    throw sonar::DataFormatError(std::string("malformed report JSON: ") + e.what());
  }
  sonar::TrialReport report;
  try {
    sonar::from_json(j, report);
  } catch (const json::exception& e) {
    throw sonar::DataFormatError(std::string("invalid report fields: ") + e.what());
  }
  std::filesystem::create_directories(out_dir);

  {  // metrics.csv: one metric per row
    std::ofstream m(out_dir + "/metrics.csv");
    m << "metric,key,value\n";
    for (const auto& [type, rate] : report.false_alarm_rates)
      m << "false_alarm_rate," << type << "," << rate << "\n";
    for (const auto& [w, rate] : report.detection_rates)
      m << "detection_rate," << w << "," << rate << "\n";
    for (int c = 0; c < 3; ++c)
      m << "geometry_error,E" << (c + 1) << "," << report.geometry_errors[c] << "\n";
    m << "material_accuracy,," << report.material_accuracy << "\n";
  }

  {  // mg2 error histogram (CSV + SVG)
    constexpr int kBins = 20;
    double hi = 0;
    for (const double e : report.per_segment_mg2_abs_error) hi = std::max(hi, e);
    if (hi <= 0) hi = 1.0;
    std::vector<double> counts(kBins, 0.0);
    for (const double e : report.per_segment_mg2_abs_error) {
      int b = static_cast<int>(e / hi * kBins);
      counts[std::min(b, kBins - 1)] += 1.0;
    }
    std::ofstream h(out_dir + "/mg2_error_hist.csv");
    h << "bin_low,bin_high,count\n";
    for (int b = 0; b < kBins; ++b)
      h << b * hi / kBins << "," << (b + 1) * hi / kBins << "," << counts[b] << "\n";
    write_polyline_svg(out_dir + "/mg2_error_hist.svg", {counts}, {"steelblue"},
                       "mg2 absolute error histogram");
  }

  if (!signal_path.empty() && !classification_path.empty()) {
    const auto truth = sonar::read_signal_csv(signal_path);
    std::ifstream cf(classification_path);
    if (!cf) throw sonar::DataFormatError("cannot open: " + classification_path);
    json cj;
    try {
      cf >> cj;
    } catch (const json::exception& e) {
      throw sonar::DataFormatError(std::string("malformed classification JSON: ") + e.what());
    }
    const auto prediction = cj.at("prediction").get<std::vector<double>>();
    write_polyline_svg(out_dir + "/overlay.svg", {truth.values, prediction},
                       {"black", "crimson"}, "backscatter: truth (black) vs prediction (red)");
    std::ofstream o(out_dir + "/overlay.csv");
    o << "x,truth,prediction\n";
    const std::size_t n = std::min(truth.values.size(), prediction.size());
    for (std::size_t i = 0; i < n; ++i)
      o << truth.x_coords[i] << "," << truth.values[i] << "," << prediction[i] << "\n";
  }
  std::cout << "report artifacts written to " << out_dir << "\n";
  return 0;
}

int cmd_polar(const std::string& config_path, const std::string& material,
              const std::string& out, double x_obs, const std::string& field_dump) {
  sonar::Scenario sc =
      config_path.empty() ? sonar::desk_scenario() : sonar::load_scenario(config_path);
  sonar::SeafloorParams params;
  params.material = sonar::material_from_name(material);
  params.geometry.mg1 = sc.grid.mg1_max;
  params.geometry.mg2 = sc.grid.mg2_max;
  params.geometry.mg3 = sc.grid.mg3_min;
  const auto sol = sonar::solve_template(params, sc.exp, sc.domain, sc.solve);
  const double keff = sonar::effective_wavenumber(sc.exp.wavenumber(), sol.scattered.dx,
                                                  sc.exp.incident_angle);
  const int L = sonar::truncation_order(sonar::kDefaultR0);
  const auto samples =
      sonar::sample_circle(sol.scattered, {x_obs, sc.domain.receiver_line_height}, keff,
                           sonar::kDefaultR0, L);
  const auto dec = sonar::decompose(samples, sonar::kDefaultR0, sonar::kDefaultEpsilonReg);
  sonar::write_polar_csv(out, dec);
  if (!field_dump.empty()) sonar::write_field(field_dump, sol.scattered);
  std::cout << "wrote polar decomposition at x=" << x_obs << " -> " << out << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Seafloor acoustic template toolkit: Helmholtz backscatter simulation, "
               "template library construction, and wavelet-matching classification"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads,
                 "worker threads (0 = SEAFLOOR_THREADS env or hardware default)");

  std::string config_path, out, library_path, signal_path, model_name = "a";
  std::string mode = "segmented", report_path, classification_path, out_dir = "report";
  std::string material = "sand", field_dump;
  double object_width = 0, noise = 0, x_obs = 2.0;
  std::uint64_t seed = 1;
  int trials = 20;
  std::vector<double> widths;
  bool resume = false, quiet = false;

  auto* build = app.add_subcommand("build-library", "solve the parameter grid and store templates");
  build->add_option("--config", config_path, "scenario config JSON (default: desk preset)");
  build->add_option("--out", out, "output library file")->required();
  build->add_flag("--resume", resume, "skip the build when the output file is already complete");
  build->add_flag("--quiet", quiet, "suppress progress output");

  auto* sim = app.add_subcommand("simulate", "synthesize ground-truth backscatter for a seabed model");
  sim->add_option("--config", config_path, "scenario config JSON (default: desk preset)");
  sim->add_option("--model", model_name, "seabed model: a | b")->required();
  sim->add_option("--object-width", object_width, "buried object width in meters (0 = none)");
  sim->add_option("--noise", noise, "Gaussian noise level as a fraction of signal RMS");
  sim->add_option("--seed", seed, "noise RNG seed");
  sim->add_option("--mode", mode, "fidelity: segmented | full");
  sim->add_option("--out", out, "output signal CSV")->required();

  auto* cls = app.add_subcommand("classify", "invert a backscatter signal against a library");
  cls->add_option("--library", library_path, "template library file")->required();
  cls->add_option("--signal", signal_path, "input signal CSV")->required();
  cls->add_option("--out", out, "output classification JSON")->required();

  auto* eval = app.add_subcommand("evaluate", "Monte Carlo detection/false-alarm metrics");
  eval->add_option("--config", config_path, "scenario config JSON (default: desk preset)");
  eval->add_option("--library", library_path, "template library file")->required();
  eval->add_option("--model", model_name, "seabed model: a | b")->required();
  eval->add_option("--trials", trials, "noise realizations per object width");
  eval->add_option("--widths", widths, "object widths to test (meters)");
  eval->add_option("--noise", noise, "noise level");
  eval->add_option("--seed", seed, "master RNG seed");
  eval->add_option("--mode", mode, "fidelity: segmented | full");
  eval->add_option("--report", report_path, "output report JSON")->required();

  auto* rep = app.add_subcommand("report", "emit plots and CSV summaries from a report");
  rep->add_option("--report", report_path, "input report JSON")->required();
  rep->add_option("--signal", signal_path, "truth signal CSV for the overlay plot");
  rep->add_option("--classification", classification_path,
                  "classification JSON for the overlay plot");
  rep->add_option("--out-dir", out_dir, "output directory");

  auto* pol = app.add_subcommand("polar", "dump a plane-wave decomposition as polar CSV");
  pol->add_option("--config", config_path, "scenario config JSON (default: desk preset)");
  pol->add_option("--material", material, "seafloor material");
  pol->add_option("--x", x_obs, "observation x on the receiver line");
  pol->add_option("--out", out, "output polar CSV")->required();
  pol->add_option("--dump-field", field_dump, "optional binary dump of the scattered field");

  CLI11_PARSE(app, argc, argv);

  try {
    if (build->parsed()) return cmd_build_library(config_path, out, resume, threads, quiet);
    if (sim->parsed())
      return cmd_simulate(config_path, model_name, object_width, noise, seed, mode, out,
                          threads);
    if (cls->parsed()) return cmd_classify(library_path, signal_path, out, threads);
    if (eval->parsed())
      return cmd_evaluate(config_path, library_path, model_name, trials, widths, noise,
                          seed, mode, report_path, threads);
    if (rep->parsed()) return cmd_report(report_path, signal_path, classification_path, out_dir);
    if (pol->parsed()) return cmd_polar(config_path, material, out, x_obs, field_dump);
  } catch (const sonar::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const sonar::DataFormatError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
