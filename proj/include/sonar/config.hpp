#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "sonar/core.hpp"
#include "sonar/library.hpp"
#include "sonar/matcher.hpp"
#include "sonar/solver.hpp"

namespace sonar {

/// A complete, self-consistent parameter bundle: physics, domain, solver,
/// library grid, and matcher settings, plus the factor by which synthetic
/// seabed-model geometry frequencies are rescaled to this scenario's
/// wavelength (1 at full scale).
struct Scenario {
  std::string name = "desk";
  ExperimentParams exp;
  DomainSpec domain;
  SolveSpec solve;
  ParamGrid grid;
  MatchConfig match;
  double geometry_scale = 1.0;
};

/// Reduced-frequency preset (2 kHz): solves run in milliseconds and the
/// geometry grid is rescaled by 10x in wavelength units.
Scenario desk_scenario();

/// Full-scale preset (20 kHz, production-sized grid); hours of compute for
/// a complete library build.
Scenario fullscale_scenario();

void to_json(nlohmann::json& j, const ExperimentParams& v);
void from_json(const nlohmann::json& j, ExperimentParams& v);
void to_json(nlohmann::json& j, const DomainSpec& v);
void from_json(const nlohmann::json& j, DomainSpec& v);
void to_json(nlohmann::json& j, const SolveSpec& v);
void from_json(const nlohmann::json& j, SolveSpec& v);
void to_json(nlohmann::json& j, const GeoParams& v);
void from_json(const nlohmann::json& j, GeoParams& v);
void to_json(nlohmann::json& j, const SeafloorParams& v);
void from_json(const nlohmann::json& j, SeafloorParams& v);
void to_json(nlohmann::json& j, const ParamGrid& v);
void from_json(const nlohmann::json& j, ParamGrid& v);
void to_json(nlohmann::json& j, const MatchConfig& v);
void from_json(const nlohmann::json& j, MatchConfig& v);
void to_json(nlohmann::json& j, const Scenario& v);
void from_json(const nlohmann::json& j, Scenario& v);

/// Loads a scenario from a JSON config file. The file may name a preset
/// ("preset": "desk" | "fullscale") and override any subset of fields.
Scenario load_scenario(const std::string& path);
Scenario scenario_by_name(const std::string& name);

}  // namespace sonar
