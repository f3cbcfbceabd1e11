#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sonar/core.hpp"
#include "sonar/microlocal.hpp"
#include "sonar/solver.hpp"

namespace sonar {

enum class Provenance : std::uint8_t { PurePeriodic, TransitionExtract };
enum class Side : std::uint8_t { Left, Right };

struct TemplateRecord {
  std::uint32_t id = 0;
  SeafloorParams params;  // material/geometry of the segment the record models
  double alpha = 0;
  std::vector<double> backscatter;  // length samples_per_segment
  Provenance provenance = Provenance::PurePeriodic;
  // TransitionExtract only:
  Material left = Material::Sand;
  Material right = Material::Sand;
  Side side = Side::Left;
};

struct ParamGrid {
  double alpha_min = M_PI / 12, alpha_max = M_PI / 3;
  int n_alpha = 30;
  double mg1_min = 10.0, mg1_max = 15.0;
  int n_mg1 = 20;
  double mg2_min = 0.5, mg2_max = 1.0;
  int n_mg2 = 2;
  double mg3_min = 25.0, mg3_max = 30.0;
  int n_mg3 = 20;
  std::vector<Material> materials{Material::Sand, Material::Clay, Material::Rock,
                                  Material::Metal};
  std::vector<std::pair<Material, Material>> transitions;

  std::vector<double> alphas() const;
  std::vector<GeoParams> geometries() const;
  /// Grid value i of n over [lo, hi]; n == 1 collapses to lo.
  static double grid_value(double lo, double hi, int n, int i);
};

struct LibraryIndex {
  std::vector<TemplateRecord> records;
  ParamGrid grid;
  ExperimentParams exp;
  DomainSpec domain;
  SolveSpec solve;
  std::string build_metadata;

  /// Guard cap on template magnitudes (multiples of source strength).
  double magnitude_cap = 10.0;
};

using BuildProgress = std::function<void(std::size_t done, std::size_t total)>;

/// Solves every grid point on the enlarged periodic domain and stores the
/// two central segments of each solve as PurePeriodic records; each
/// configured transition pair is solved once per geometry on the embedded
/// double-width domain and its two central segments stored as
/// TransitionExtract records labeled with their own side's material.
/// threads: 0 = auto, 1 = serial reference.
LibraryIndex build_library(const ParamGrid& grid, const ExperimentParams& exp,
                           const DomainSpec& d, const SolveSpec& s, int threads = 0,
                           const BuildProgress& progress = nullptr);

void save_library(const LibraryIndex& index, const std::string& path);
LibraryIndex load_library(const std::string& path);

/// Records at the grid angle nearest to `angle` (smaller index wins ties),
/// optionally filtered by material, ordered by id.
std::vector<const TemplateRecord*> query(const LibraryIndex& index,
                                         std::optional<Material> material, double angle);

}  // namespace sonar
