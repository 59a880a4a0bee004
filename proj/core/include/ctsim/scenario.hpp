#pragma once

#include <array>
#include <string>
#include <vector>

#include "json.hpp"

#include "ctsim/field.hpp"
#include "ctsim/grid.hpp"
#include "ctsim/potential.hpp"

namespace ctsim {

// Initial-state recipe: a named preset or a sampled-array file.
struct InitialSpec {
  enum class Preset { gaussian, plane_wave, random, bound_state, file };
  Preset preset = Preset::gaussian;
  double width = 1.0;
  double amplitude = 1.0;
  std::array<double, 3> center{0, 0, 0};
  std::array<double, 3> momentum{0, 0, 0};
  int component = 0;
  double band_fraction = 0.5;
  unsigned long long seed = 1;
  int channel = 0;  // bound_state preset: which potential
  int mode = 0;     // bound_state preset: which eigenvalue (ascending)
  bool normalize = false;
  std::string path;  // file preset
};

// One diagnostics request; options are validated at load and consumed by the
// command that runs the probe.
struct DiagnosticEntry {
  std::string name;
  nlohmann::json options;
};

struct OutputSpec {
  std::string csv = "out";   // path prefix for CSV series
  std::string json = "out";  // path prefix for JSON reports
};

struct ScenarioConfig {
  std::string name;
  Grid grid;
  HamiltonianSpec model;
  InitialSpec initial;
  double T = 1.0;
  double dt = 0.01;
  std::vector<DiagnosticEntry> diagnostics;
  OutputSpec output;
  bool wraparound_ok = true;
  nlohmann::json raw;  // canonical parsed document (for hashing)
};

// Strict parse: unknown keys anywhere are rejected with the offending path.
ScenarioConfig parse_scenario(const nlohmann::json& doc, const std::string& name);
ScenarioConfig load_scenario(const std::string& path);

// The diagnostics entry with the given name, or null if absent.
const DiagnosticEntry* find_diagnostic(const ScenarioConfig& sc, const std::string& name);

// Builds the initial state for every preset except bound_state (which needs
// the spectral solve and is assembled by the caller).
Field make_initial(const ScenarioConfig& sc);

} // namespace ctsim
