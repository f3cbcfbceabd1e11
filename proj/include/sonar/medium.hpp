#pragma once

#include <optional>
#include <vector>

#include "sonar/core.hpp"

namespace sonar {

struct MediumSample {
  double density;         // kg/m^3
  double speed;           // m/s
  double attenuation_db;  // dB/m
};

/// Coefficient map for a solve domain: water above the rippled interface,
/// sediment below, piecewise in x by seafloor region, with an optional
/// explicit buried-object x-interval. All coordinates are local to the
/// solve domain.
class MediumMap {
 public:
  struct Region {
    double x0, x1;  // [x0, x1)
    SeafloorParams params;
  };

  MediumMap(std::vector<Region> regions, ExperimentParams exp);

  /// Rectangular metal object spanning [x_lo, x_hi] x [-h_s, -eps_f],
  /// independent of the per-region material.
  void set_object(double x_lo, double x_hi, double eps_f);

  MediumSample at(double x, double y) const;

  /// Interface height at x using the owning region's geometry, quantized to
  /// 1e-9 m so material assignment is bit-stable across segment-shifted
  /// evaluations.
  double interface_at(double x) const;

  const ExperimentParams& experiment() const { return exp_; }
  const std::vector<Region>& regions() const { return regions_; }
  double min_sediment_speed() const;

 private:
  const Region& region_of(double x) const;

  std::vector<Region> regions_;
  ExperimentParams exp_;
  std::optional<std::pair<double, double>> object_x_;
  double object_eps_ = 0.02;
};

/// Single-region medium covering all x.
MediumMap build_medium(const SeafloorParams& params, const ExperimentParams& exp,
                       const DomainSpec& d);

}  // namespace sonar
