#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sonar/core.hpp"
#include "sonar/library.hpp"
#include "sonar/matcher.hpp"
#include "sonar/microlocal.hpp"
#include "sonar/solver.hpp"

namespace sonar {

/// Piecewise ground-truth seabed description over [0, width).
struct SeabedModel {
  struct MatRegion {
    double x0, x1;
    Material material;
  };

  double width = 20.0;
  std::vector<MatRegion> materials;
  std::function<GeoParams(double)> geometry_of_x;
  std::optional<std::pair<double, double>> object;  // metal object x-interval
  double object_eps = 0.02;
  double object_anchor = 14.0;  // right edge of the standard object domain

  Material material_at(double x) const;
  /// x-positions in (0, width) where the material or object coverage changes.
  std::vector<double> junctions() const;
};

SeabedModel model_a();
SeabedModel model_b();

/// Adds the standard buried-object domain: [14 - t_w, 14] for Model A
/// geometry-constant models, [4 - t_w, 4] otherwise, spanning depths
/// [-h_s, -0.02]. t_w = 0 leaves the model unchanged.
SeabedModel with_object(const SeabedModel& model, double t_w);

/// Multiplies the spatial frequencies mg1, mg3 by `factor` (used to move the
/// full-scale models to the reduced-frequency scenario).
SeabedModel rescale_geometry(const SeabedModel& model, double factor);

enum class FidelityMode { Segmented, FullDomain };

/// Ground-truth backscatter over the whole model. Segmented mode solves each
/// segment on its own periodic template domain (embedded double-width domain
/// for segments touching a material or object junction, placed so that
/// on-grid segments reproduce library templates exactly); FullDomain mode
/// runs one periodic solve over the entire model width.
BackscatterSignal simulate_seabed(const SeabedModel& model, const ExperimentParams& exp,
                                  const DomainSpec& d, const SolveSpec& s,
                                  FidelityMode mode = FidelityMode::Segmented,
                                  int threads = 0);

/// b = d + xi with xi i.i.d. N(0, (level * RMS(d))^2), reproducible per seed.
BackscatterSignal add_noise(const BackscatterSignal& d, double level, std::uint64_t seed);

struct TrialReport {
  std::map<std::string, double> false_alarm_rates;  // per transition type
  std::map<double, double> detection_rates;         // per object width
  double geometry_errors[3] = {0, 0, 0};            // E1, E2, E3
  double material_accuracy = 0;  // non-object segments labeled correctly
  int n_trials = 0;
  std::uint64_t seed = 0;
  double noise_level = 0;
  std::vector<double> per_segment_mg2_abs_error;  // pooled across trials
};

/// Monte Carlo evaluation: for each object width, simulates the model,
/// classifies `trials` independently-noised realizations, and accumulates
/// detection/false-alarm/geometry metrics. threads: 0 = auto.
TrialReport evaluate(int trials, const SeabedModel& model, const std::vector<double>& widths,
                     const LibraryIndex& lib, const MatchConfig& cfg,
                     const ExperimentParams& exp, const DomainSpec& d, const SolveSpec& s,
                     double noise_level, std::uint64_t seed,
                     FidelityMode mode = FidelityMode::Segmented, int threads = 0);

/// Per-trial derived seed (splitmix64 step), exposed for reproducibility
/// tests.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

void to_json(nlohmann::json& j, const TrialReport& r);
void from_json(const nlohmann::json& j, TrialReport& r);

}  // namespace sonar
