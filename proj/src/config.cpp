#include "sonar/config.hpp"

#include <fstream>

#include "sonar/errors.hpp"

namespace sonar {

Scenario desk_scenario() {
  Scenario sc;
  sc.name = "desk";
  sc.exp.frequency = 2000.0;
  sc.exp.incident_angle = M_PI / 6.0;
  sc.exp.receiver_depth = 1.5;
  sc.domain.segment_width = 1.0;
  sc.domain.sediment_depth = 2.0;
  sc.domain.water_height = 3.0;
  sc.domain.samples_per_segment = 512;
  sc.domain.receiver_line_height = 1.5;
  sc.solve.pml_thickness = 1.0;
  sc.grid.alpha_min = sc.grid.alpha_max = M_PI / 6.0;
  sc.grid.n_alpha = 1;
  sc.grid.mg1_min = 1.0;
  sc.grid.mg1_max = 1.5;
  sc.grid.n_mg1 = 6;
  sc.grid.mg2_min = 0.5;
  sc.grid.mg2_max = 1.0;
  sc.grid.n_mg2 = 2;
  sc.grid.mg3_min = 2.5;
  sc.grid.mg3_max = 3.0;
  sc.grid.n_mg3 = 6;
  sc.grid.transitions = {
      {Material::Sand, Material::Clay},  {Material::Clay, Material::Sand},
      {Material::Clay, Material::Rock},  {Material::Rock, Material::Clay},
      {Material::Sand, Material::Rock},  {Material::Rock, Material::Sand},
      {Material::Sand, Material::Metal}, {Material::Metal, Material::Sand},
  };
  sc.geometry_scale = 0.1;
  return sc;
}

Scenario fullscale_scenario() {
  Scenario sc;
  sc.name = "fullscale";
  sc.exp.frequency = 20000.0;
  sc.exp.incident_angle = M_PI / 6.0;
  sc.exp.receiver_depth = 0.5;
  sc.domain.water_height = 1.0;
  sc.domain.receiver_line_height = 0.5;
  sc.solve.pml_thickness = 0.1;
  sc.grid.transitions = {
      {Material::Sand, Material::Clay},
      {Material::Clay, Material::Sand},
      {Material::Clay, Material::Rock},
      {Material::Sand, Material::Metal},
  };
  sc.geometry_scale = 1.0;
  return sc;
}

Scenario scenario_by_name(const std::string& name) {
  if (name == "desk") return desk_scenario();
  if (name == "fullscale") return fullscale_scenario();
  throw DataFormatError("unknown scenario preset: " + name);
}

using nlohmann::json;

namespace {
template <typename T>
void maybe(const json& j, const char* key, T& out) {
  if (j.contains(key)) j.at(key).get_to(out);
}
}  // namespace

void to_json(json& j, const ExperimentParams& v) {
  j = json{{"frequency", v.frequency},
           {"incident_angle", v.incident_angle},
           {"source_strength", v.source_strength},
           {"water_density", v.water_density},
           {"water_speed", v.water_speed},
           {"receiver_depth", v.receiver_depth},
           {"sediment_attenuation_db", v.sediment_attenuation_db}};
}
void from_json(const json& j, ExperimentParams& v) {
  maybe(j, "frequency", v.frequency);
  maybe(j, "incident_angle", v.incident_angle);
  maybe(j, "source_strength", v.source_strength);
  maybe(j, "water_density", v.water_density);
  maybe(j, "water_speed", v.water_speed);
  maybe(j, "receiver_depth", v.receiver_depth);
  maybe(j, "sediment_attenuation_db", v.sediment_attenuation_db);
}

void to_json(json& j, const DomainSpec& v) {
  j = json{{"segment_width", v.segment_width},
           {"sediment_depth", v.sediment_depth},
           {"water_height", v.water_height},
           {"samples_per_segment", v.samples_per_segment},
           {"receiver_line_height", v.receiver_line_height}};
}
void from_json(const json& j, DomainSpec& v) {
  maybe(j, "segment_width", v.segment_width);
  maybe(j, "sediment_depth", v.sediment_depth);
  maybe(j, "water_height", v.water_height);
  maybe(j, "samples_per_segment", v.samples_per_segment);
  maybe(j, "receiver_line_height", v.receiver_line_height);
}

void to_json(json& j, const SolveSpec& v) {
  j = json{{"points_per_wavelength_water", v.points_per_wavelength_water},
           {"points_per_wavelength_sediment", v.points_per_wavelength_sediment},
           {"pml_thickness", v.pml_thickness},
           {"domain_width_factor", v.domain_width_factor},
           {"boundary", v.boundary == BoundaryMode::Periodic ? "periodic" : "embedded"},
           {"pml_strength", v.pml_strength},
           {"bottom_pml", v.bottom_pml},
           {"injection_offset", v.injection_offset}};
}
void from_json(const json& j, SolveSpec& v) {
  maybe(j, "points_per_wavelength_water", v.points_per_wavelength_water);
  maybe(j, "points_per_wavelength_sediment", v.points_per_wavelength_sediment);
  maybe(j, "pml_thickness", v.pml_thickness);
  maybe(j, "domain_width_factor", v.domain_width_factor);
  if (j.contains("boundary")) {
    const auto b = j.at("boundary").get<std::string>();
    if (b == "periodic")
      v.boundary = BoundaryMode::Periodic;
    else if (b == "embedded")
      v.boundary = BoundaryMode::EmbeddedTransition;
    else
      throw DataFormatError("unknown boundary mode: " + b);
  }
  maybe(j, "pml_strength", v.pml_strength);
  maybe(j, "bottom_pml", v.bottom_pml);
  maybe(j, "injection_offset", v.injection_offset);
}

void to_json(json& j, const GeoParams& v) {
  j = json{{"mg1", v.mg1}, {"mg2", v.mg2}, {"mg3", v.mg3}, {"amplitude", v.amplitude}};
}
void from_json(const json& j, GeoParams& v) {
  maybe(j, "mg1", v.mg1);
  maybe(j, "mg2", v.mg2);
  maybe(j, "mg3", v.mg3);
  maybe(j, "amplitude", v.amplitude);
}

void to_json(json& j, const SeafloorParams& v) {
  j = json{{"material", material_name(v.material)},
           {"geometry", v.geometry},
           {"object_depth", v.object_depth}};
}
void from_json(const json& j, SeafloorParams& v) {
  if (j.contains("material")) v.material = material_from_name(j.at("material"));
  maybe(j, "geometry", v.geometry);
  maybe(j, "object_depth", v.object_depth);
}

void to_json(json& j, const ParamGrid& v) {
  json mats = json::array();
  for (auto m : v.materials) mats.push_back(material_name(m));
  json trans = json::array();
  for (const auto& [l, r] : v.transitions)
    trans.push_back(json::array({material_name(l), material_name(r)}));
  j = json{{"alpha_min", v.alpha_min}, {"alpha_max", v.alpha_max}, {"n_alpha", v.n_alpha},
           {"mg1_min", v.mg1_min},     {"mg1_max", v.mg1_max},     {"n_mg1", v.n_mg1},
           {"mg2_min", v.mg2_min},     {"mg2_max", v.mg2_max},     {"n_mg2", v.n_mg2},
           {"mg3_min", v.mg3_min},     {"mg3_max", v.mg3_max},     {"n_mg3", v.n_mg3},
           {"materials", mats},        {"transitions", trans}};
}
void from_json(const json& j, ParamGrid& v) {
  maybe(j, "alpha_min", v.alpha_min);
  maybe(j, "alpha_max", v.alpha_max);
  maybe(j, "n_alpha", v.n_alpha);
  maybe(j, "mg1_min", v.mg1_min);
  maybe(j, "mg1_max", v.mg1_max);
  maybe(j, "n_mg1", v.n_mg1);
  maybe(j, "mg2_min", v.mg2_min);
  maybe(j, "mg2_max", v.mg2_max);
  maybe(j, "n_mg2", v.n_mg2);
  maybe(j, "mg3_min", v.mg3_min);
  maybe(j, "mg3_max", v.mg3_max);
  maybe(j, "n_mg3", v.n_mg3);
  if (j.contains("materials")) {
    v.materials.clear();
    for (const auto& m : j.at("materials")) v.materials.push_back(material_from_name(m));
  }
  if (j.contains("transitions")) {
    v.transitions.clear();
    for (const auto& t : j.at("transitions"))
      v.transitions.emplace_back(material_from_name(t.at(0)), material_from_name(t.at(1)));
  }
}

void to_json(json& j, const MatchConfig& v) {
  j = json{{"epsilon_tol", v.epsilon_tol},
           {"delta_penalty", v.delta_penalty},
           {"lmax", v.lmax}};
}
void from_json(const json& j, MatchConfig& v) {
  maybe(j, "epsilon_tol", v.epsilon_tol);
  maybe(j, "delta_penalty", v.delta_penalty);
  maybe(j, "lmax", v.lmax);
}

void to_json(json& j, const Scenario& v) {
  j = json{{"name", v.name},       {"experiment", v.exp},   {"domain", v.domain},
           {"solver", v.solve},    {"grid", v.grid},        {"match", v.match},
           {"geometry_scale", v.geometry_scale}};
}
void from_json(const json& j, Scenario& v) {
  maybe(j, "name", v.name);
  maybe(j, "experiment", v.exp);
  maybe(j, "domain", v.domain);
  maybe(j, "solver", v.solve);
  maybe(j, "grid", v.grid);
  maybe(j, "match", v.match);
  maybe(j, "geometry_scale", v.geometry_scale);
}

Scenario load_scenario(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw DataFormatError("cannot open config: " + path);
  json j;
  try {
    f >> j;
  } catch (const json::exception& e) {
    throw DataFormatError("malformed config JSON in " + path + ": " + e.what());
  }
  Scenario sc = desk_scenario();
  if (j.contains("preset")) sc = scenario_by_name(j.at("preset").get<std::string>());
  try {
    from_json(j, sc);
  } catch (const json::exception& e) {
    throw DataFormatError("invalid config values in " + path + ": " + e.what());
  }
  return sc;
}

}  // namespace sonar
