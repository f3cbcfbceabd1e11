#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

namespace sonar {

/// Sediment label. Metal denotes a sand layer containing a buried metal
/// object, not a homogeneous metal halfspace.
enum class Material : std::uint8_t { Sand, Clay, Rock, Metal };

const char* material_name(Material m);
Material material_from_name(const std::string& name);

struct GeoacousticProps {
  double density;         // kg/m^3
  double sound_speed;     // m/s
  double attenuation_db;  // dB per meter
};

/// Density and sound speed per material; attenuation defaults to 10 dB/m
/// for all sediments.
GeoacousticProps material_properties(Material m);

/// Interface geometry: spatial frequencies mg1, mg3 (cycles/m) and the
/// aspect ratio mg2 of the component sinusoids. `amplitude` is fixed at
/// 0.01 m for library geometry; the zero-amplitude override exists only
/// to enable flat-interface analytic oracles.
struct GeoParams {
  double mg1 = 15.0;
  double mg2 = 1.0;
  double mg3 = 26.0;
  double amplitude = 0.01;

  static GeoParams flat() { return {0.0, 0.0, 0.0, 0.0}; }
  bool operator==(const GeoParams&) const = default;
};

/// f(x) = amplitude * (sin(2 pi mg1 x) + mg2 sin(2 pi mg3 x))
double interface_height(double x, const GeoParams& g);

struct ExperimentParams {
  double frequency = 20000.0;            // Hz
  double incident_angle = M_PI / 6.0;    // grazing angle alpha, radians
  double source_strength = 1.0;          // P0
  double water_density = 1030.0;         // rho0, kg/m^3
  double water_speed = 1500.0;           // c0, m/s
  double receiver_depth = 0.5;           // H, meters above the mean interface
  double sediment_attenuation_db = 10.0; // gamma, dB/m

  double omega() const { return 2.0 * M_PI * frequency; }
  // k = omega / c0, derived, never stored.
  double wavenumber() const { return omega() / water_speed; }
};

/// dB/m -> nepers/m, applied as the imaginary part of the wavenumber.
inline double attenuation_to_neper(double db_per_m) {
  return db_per_m * std::log(10.0) / 20.0;
}

struct SeafloorParams {
  Material material = Material::Sand;
  GeoParams geometry;
  double object_depth = 0.02;  // eps_f, only meaningful for Metal

  bool operator==(const SeafloorParams&) const = default;
};

struct DomainSpec {
  double segment_width = 1.0;       // Delta s
  double sediment_depth = 2.0;      // h_s
  double water_height = 1.0;        // h_w
  int samples_per_segment = 512;    // 2^N1
  double receiver_line_height = 0.5;

  bool valid() const;
};

bool is_power_of_two(int n);

/// n_segments * samples_per_segment equispaced x coordinates covering
/// [0, n_segments * segment_width), left-closed.
std::vector<double> measurement_grid(const DomainSpec& d, int n_segments);

}  // namespace sonar
