#pragma once

#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "ctsim/channels.hpp"
#include "ctsim/diagnostics.hpp"
#include "ctsim/propagate.hpp"
#include "ctsim/spectral.hpp"

namespace ctsim {

// Locale-independent float formatting: up to 17 significant digits, '.'
// decimal separator, round-trip exact.
std::string format_double(double v);

// CSV with a header row, ',' separators, '\n' line endings.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

// Norm history: t followed by per-component l1, l2, linf, l2plusLinf columns.
void write_trajectory_csv(const std::string& path, const Trajectory& traj);

void write_series_csv(const std::string& path, const std::vector<double>& times,
                      const std::vector<double>& values, const std::string& value_name = "value");

nlohmann::json to_json(const AdmissibilityReport& rep);
nlohmann::json to_json(const BoundStateBasis& basis);
nlohmann::json to_json(const DecayReport& rep);
nlohmann::json to_json(const SmoothingReport& rep);
nlohmann::json to_json(const CancellationReport& rep);
nlohmann::json to_json(const CompletenessReport& rep);
nlohmann::json to_json(const LinfDecayReport& rep);
nlohmann::json to_json(const ProjectionDecaySeries& series);

void save_report(const nlohmann::json& doc, const std::string& path);

// FNV-1a hash of the canonical (sorted-key, compact) document dump.
std::string config_hash(const nlohmann::json& doc);

struct RunManifest {
  std::string scenario_path;
  std::string hash;
  std::string version;
  std::vector<std::pair<std::string, double>> phases;  // name, seconds
  std::vector<std::string> outputs;
};

nlohmann::json to_json(const RunManifest& manifest);

} // namespace ctsim
