#include "sonar/core.hpp"

#include <omp.h>

#include <cstdlib>
#include <stdexcept>

#include "sonar/parallel.hpp"

namespace sonar {

const char* material_name(Material m) {
  switch (m) {
    case Material::Sand: return "sand";
    case Material::Clay: return "clay";
    case Material::Rock: return "rock";
    case Material::Metal: return "metal";
  }
  return "unknown";
}

Material material_from_name(const std::string& name) {
  if (name == "sand") return Material::Sand;
  if (name == "clay") return Material::Clay;
  if (name == "rock") return Material::Rock;
  if (name == "metal") return Material::Metal;
  throw std::invalid_argument("unknown material name: " + name);
}

GeoacousticProps material_properties(Material m) {
  switch (m) {
    case Material::Sand: return {2000.0, 1668.0, 10.0};
    case Material::Clay: return {1170.0, 1518.9, 10.0};
    case Material::Rock: return {2870.0, 6000.0, 10.0};
    case Material::Metal: return {8050.0, 6100.0, 10.0};
  }
  throw std::invalid_argument("invalid material");
}

double interface_height(double x, const GeoParams& g) {
  return g.amplitude *
         (std::sin(2.0 * M_PI * g.mg1 * x) + g.mg2 * std::sin(2.0 * M_PI * g.mg3 * x));
}

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

bool DomainSpec::valid() const {
  return segment_width > 0 && sediment_depth > 0 && water_height > 0 &&
         is_power_of_two(samples_per_segment) && receiver_line_height > 0;
}

std::vector<double> measurement_grid(const DomainSpec& d, int n_segments) {
  if (n_segments < 1) throw std::invalid_argument("n_segments must be >= 1");
  const int n = n_segments * d.samples_per_segment;
  const double dx = d.segment_width / d.samples_per_segment;
  std::vector<double> xs(n);
  for (int j = 0; j < n; ++j) xs[j] = j * dx;
  return xs;
}

int resolve_threads(int requested) {
  if (requested >= 1) return requested;
  if (const char* env = std::getenv("SEAFLOOR_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  return omp_get_max_threads();
}

}  // namespace sonar
