#include "ctsim/io.hpp"

#include <charconv>
#include <fstream>

#include "ctsim/errors.hpp"
#include "ctsim/version.hpp"

namespace ctsim {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);  // binary: '\n' endings everywhere
  if (!out) throw ConfigError("cannot open output file: " + path);
  return out;
}

nlohmann::json complex_json(const cplx& z) {
  return nlohmann::json{{"re", z.real()}, {"im", z.imag()}};
}

} // namespace

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  auto out = open_out(path);
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) out << ',';
    out << header[i];
  }
  out << '\n';
  for (const auto& row : rows) {
    if (row.size() != header.size()) throw ConfigError("CSV row width differs from header");
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      out << format_double(row[i]);
    }
    out << '\n';
  }
}

void write_trajectory_csv(const std::string& path, const Trajectory& traj) {
  std::vector<std::string> header{"t"};
  const std::size_t ncomp = traj.norms.empty() ? 0 : traj.norms.front().comp.size();
  for (std::size_t c = 0; c < ncomp; ++c) {
    const std::string suffix = ncomp > 1 ? "_" + std::to_string(c) : "";
    header.push_back("l1" + suffix);
    header.push_back("l2" + suffix);
    header.push_back("linf" + suffix);
    header.push_back("l2plusLinf" + suffix);
  }
  std::vector<std::vector<double>> rows;
  for (const auto& row : traj.norms) {
    std::vector<double> r{row.t};
    for (const auto& c : row.comp) {
      r.push_back(c.l1);
      r.push_back(c.l2);
      r.push_back(c.linf);
      r.push_back(c.l2pluslinf);
    }
    rows.push_back(std::move(r));
  }
  write_csv(path, header, rows);
}

void write_series_csv(const std::string& path, const std::vector<double>& times,
                      const std::vector<double>& values, const std::string& value_name) {
  if (times.size() != values.size()) throw ConfigError("series and times differ in length");
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < times.size(); ++i) rows.push_back({times[i], values[i]});
  write_csv(path, {"t", value_name}, rows);
}

nlohmann::json to_json(const AdmissibilityReport& rep) {
  nlohmann::json modes = nlohmann::json::array();
  for (const auto& m : rep.modes)
    modes.push_back({{"value", complex_json(m.value)},
                     {"realness_defect", m.realness_defect},
                     {"inside_window", m.inside_window},
                     {"embedded", m.embedded},
                     {"localized", m.localized},
                     {"dual_localized", m.dual_localized},
                     {"jordan_terminated", m.jordan_terminated}});
  return nlohmann::json{{"mu", rep.mu},
                        {"epsilon0", rep.epsilon0},
                        {"window_tol", rep.window_tol},
                        {"modes", modes},
                        {"kernel_dim", rep.kernel_dim},
                        {"kernel2_dim", rep.kernel2_dim},
                        {"kernel3_dim", rep.kernel3_dim},
                        {"jordan_zero_terminated", rep.jordan_zero_terminated},
                        {"jordan_nonzero_terminated", rep.jordan_nonzero_terminated},
                        {"stability_probe", rep.stability_probe_value},
                        {"admissible", rep.admissible},
                        {"resonance_check", rep.resonance_check}};
}

nlohmann::json to_json(const BoundStateBasis& basis) {
  nlohmann::json vals = nlohmann::json::array();
  for (std::size_t i = 0; i < basis.size(); ++i)
    vals.push_back({{"value", complex_json(basis.eigenvalues[i])},
                    {"generalized", static_cast<bool>(basis.generalized[i])}});
  return nlohmann::json{{"count", basis.size()},
                        {"self_adjoint", basis.self_adjoint},
                        {"eigenvalues", vals}};
}

nlohmann::json to_json(const DecayReport& rep) {
  return nlohmann::json{{"kind", rep.kind},
                        {"dim", rep.dim},
                        {"window", {rep.t_a, rep.t_b}},
                        {"exponent", rep.exponent},
                        {"log_c", rep.log_c},
                        {"residual", rep.residual},
                        {"theoretical", rep.theoretical},
                        {"sup_value", rep.sup_value},
                        {"pass", rep.pass},
                        {"degenerate", rep.degenerate}};
}

nlohmann::json to_json(const SmoothingReport& rep) {
  return nlohmann::json{{"M", rep.m_values},
                        {"values", rep.values},
                        {"T", rep.T},
                        {"R", rep.R},
                        {"slope", rep.slope},
                        {"slope_valid", rep.slope_valid}};
}

nlohmann::json to_json(const CancellationReport& rep) {
  return nlohmann::json{
      {"max_ratio", rep.max_ratio}, {"vhat_l1", rep.vhat_l1}, {"per_s", rep.per_s}};
}

nlohmann::json to_json(const CompletenessReport& rep) {
  nlohmann::json coeffs = nlohmann::json::array();
  for (const auto& c : rep.coefficients)
    coeffs.push_back({{"channel", c.channel},
                      {"mode", c.mode},
                      {"value", complex_json(c.value)},
                      {"drift", c.drift},
                      {"stabilized", c.stabilized}});
  nlohmann::json images = nlohmann::json::array();
  for (const auto& img : rep.images)
    images.push_back({{"cauchy_defect", img.cauchy_defect},
                      {"l1_norm", img.l1_norm},
                      {"phase_defect", img.phase_defect},
                      {"converged", img.converged}});
  return nlohmann::json{{"coefficients", coeffs},
                        {"images", images},
                        {"phi_drift", rep.phi_drift},
                        {"stabilized", rep.stabilized},
                        {"remainder_final",
                         rep.remainder.empty() ? 0.0 : rep.remainder.back()}};
}

nlohmann::json to_json(const LinfDecayReport& rep) {
  return nlohmann::json{
      {"fit", to_json(rep.fit)}, {"vhat_l1_sup", rep.vhat_l1_sup}, {"decaying", rep.decaying}};
}

nlohmann::json to_json(const ProjectionDecaySeries& series) {
  return nlohmann::json{{"channel", series.channel},
                        {"rate", series.rate},
                        {"log_c", series.log_c},
                        {"residual", series.residual},
                        {"degenerate", series.degenerate}};
}

void save_report(const nlohmann::json& doc, const std::string& path) {
  auto out = open_out(path);
  out << doc.dump(2) << '\n';
}

std::string config_hash(const nlohmann::json& doc) {
  const std::string canon = doc.dump();  // nlohmann objects iterate in sorted key order
  unsigned long long h = 1469598103934665603ULL;
  for (unsigned char c : canon) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  const char* digits = "0123456789abcdef";
  for (int i = 15; i >= 0; --i) {
    buf[i] = digits[h & 0xF];
    h >>= 4;
  }
  buf[16] = '\0';
  return std::string(buf);
}

nlohmann::json to_json(const RunManifest& manifest) {
  nlohmann::json phases = nlohmann::json::array();
  for (const auto& p : manifest.phases)
    phases.push_back({{"phase", p.first}, {"seconds", p.second}});
  return nlohmann::json{{"scenario", manifest.scenario_path},
                        {"config_hash", manifest.hash},
                        {"version", manifest.version},
                        {"phases", phases},
                        {"outputs", manifest.outputs}};
}

} // namespace ctsim
