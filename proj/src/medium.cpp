#include "sonar/medium.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sonar {

MediumMap::MediumMap(std::vector<Region> regions, ExperimentParams exp)
    : regions_(std::move(regions)), exp_(exp) {
  if (regions_.empty()) throw std::invalid_argument("medium needs at least one region");
  for (const auto& r : regions_) {
    if (r.x1 <= r.x0) throw std::invalid_argument("empty medium region");
    if (r.params.material == Material::Metal && r.params.object_depth <= 0)
      throw std::invalid_argument("Metal material requires positive object depth");
  }
}

void MediumMap::set_object(double x_lo, double x_hi, double eps_f) {
  if (x_hi <= x_lo || eps_f <= 0) throw std::invalid_argument("invalid object extent");
  object_x_ = {x_lo, x_hi};
  object_eps_ = eps_f;
}

const MediumMap::Region& MediumMap::region_of(double x) const {
  for (const auto& r : regions_)
    if (x >= r.x0 && x < r.x1) return r;
  // Clamp to the nearest end region for queries at/past the domain edge.
  return x < regions_.front().x0 ? regions_.front() : regions_.back();
}

double MediumMap::interface_at(double x) const {
  const double f = interface_height(x, region_of(x).params.geometry);
  return std::round(f * 1e9) / 1e9;
}

MediumSample MediumMap::at(double x, double y) const {
  if (y > interface_at(x))
    return {exp_.water_density, exp_.water_speed, 0.0};
  const auto& r = region_of(x);
  Material m = r.params.material;
  if (m == Material::Metal)
    m = (y > -r.params.object_depth) ? Material::Sand : Material::Metal;
  // Half-open in x so an object edge on a grid line belongs to one side only.
  if (object_x_ && x >= object_x_->first && x < object_x_->second && y <= -object_eps_)
    m = Material::Metal;
  const auto props = material_properties(m);
  return {props.density, props.sound_speed, exp_.sediment_attenuation_db};
}

double MediumMap::min_sediment_speed() const {
  double v = std::numeric_limits<double>::max();
  auto consider = [&](Material m) {
    v = std::min(v, material_properties(m).sound_speed);
    if (m == Material::Metal) v = std::min(v, material_properties(Material::Sand).sound_speed);
  };
  for (const auto& r : regions_) consider(r.params.material);
  if (object_x_) consider(Material::Metal);
  return v;
}

MediumMap build_medium(const SeafloorParams& params, const ExperimentParams& exp,
                       const DomainSpec& d) {
  (void)d;
  const double big = 1e30;
  return MediumMap({{-big, big, params}}, exp);
}

}  // namespace sonar
