#include "ctsim/scenario.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <set>

#include "ctsim/errors.hpp"
#include "ctsim/norms.hpp"
#include "ctsim/rng.hpp"

namespace ctsim {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ConfigError("scenario." + where + ": " + what);
}

void check_keys(const json& j, const std::string& where, const std::set<std::string>& allowed) {
  if (!j.is_object()) fail(where, "expected an object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key())) fail(where, "unknown key \"" + it.key() + "\"");
}

const json& require(const json& j, const std::string& where, const std::string& key) {
  if (!j.contains(key)) fail(where, "missing required field \"" + key + "\"");
  return j.at(key);
}

double num(const json& j, const std::string& where) {
  if (!j.is_number()) fail(where, "expected a number");
  return j.get<double>();
}

std::array<double, 3> vec3(const json& j, const std::string& where, int dim) {
  std::array<double, 3> out{0, 0, 0};
  if (!j.is_array() || j.empty() || j.size() > 3) fail(where, "expected an array of 1..3 numbers");
  if (static_cast<int>(j.size()) > dim) fail(where, "more entries than grid dimensions");
  for (std::size_t i = 0; i < j.size(); ++i) out[i] = num(j[i], where);
  return out;
}

PotentialShape parse_shape(const json& j, const std::string& where) {
  const std::string s = j.is_string() ? j.get<std::string>() : "";
  if (s == "gaussian") return PotentialShape::gaussian;
  if (s == "sech2") return PotentialShape::sech2;
  if (s == "compact_bump") return PotentialShape::compact_bump;
  fail(where, "shape must be one of gaussian | sech2 | compact_bump");
}

EnvelopeSpec parse_envelope(const json& j, const std::string& where) {
  check_keys(j, where, {"type", "rate", "t0", "sigma"});
  EnvelopeSpec env;
  const std::string type = require(j, where, "type").get<std::string>();
  if (type == "constant")
    env.type = EnvelopeSpec::Type::constant;
  else if (type == "exp_decay")
    env.type = EnvelopeSpec::Type::exp_decay;
  else if (type == "gaussian")
    env.type = EnvelopeSpec::Type::gaussian;
  else
    fail(where + ".type", "must be constant | exp_decay | gaussian");
  if (j.contains("rate")) env.rate = num(j.at("rate"), where + ".rate");
  if (j.contains("t0")) env.t0 = num(j.at("t0"), where + ".t0");
  if (j.contains("sigma")) env.sigma = num(j.at("sigma"), where + ".sigma");
  return env;
}

PotentialSpec parse_potential(const json& j, const std::string& where, int dim) {
  check_keys(j, where,
             {"shape", "amplitude", "width", "center", "velocity", "alpha", "gamma",
              "W_amplitude"});
  PotentialSpec p;
  p.shape = parse_shape(require(j, where, "shape"), where + ".shape");
  p.amplitude = num(require(j, where, "amplitude"), where + ".amplitude");
  p.width = num(require(j, where, "width"), where + ".width");
  if (j.contains("center")) p.center = vec3(j.at("center"), where + ".center", dim);
  if (j.contains("velocity")) p.velocity = vec3(j.at("velocity"), where + ".velocity", dim);
  if (j.contains("alpha")) p.alpha = num(j.at("alpha"), where + ".alpha");
  if (j.contains("gamma")) p.gamma = num(j.at("gamma"), where + ".gamma");
  if (j.contains("W_amplitude")) p.w_amplitude = num(j.at("W_amplitude"), where + ".W_amplitude");
  return p;
}

InitialSpec parse_initial(const json& j, int dim) {
  const std::string where = "initial";
  check_keys(j, where,
             {"preset", "width", "amplitude", "center", "momentum", "component", "band_fraction",
              "seed", "channel", "mode", "normalize", "path"});
  InitialSpec init;
  const std::string preset = require(j, where, "preset").get<std::string>();
  if (preset == "gaussian")
    init.preset = InitialSpec::Preset::gaussian;
  else if (preset == "plane_wave")
    init.preset = InitialSpec::Preset::plane_wave;
  else if (preset == "random")
    init.preset = InitialSpec::Preset::random;
  else if (preset == "bound_state")
    init.preset = InitialSpec::Preset::bound_state;
  else if (preset == "file")
    init.preset = InitialSpec::Preset::file;
  else
    fail(where + ".preset", "must be gaussian | plane_wave | random | bound_state | file");
  if (j.contains("width")) init.width = num(j.at("width"), where + ".width");
  if (j.contains("amplitude")) init.amplitude = num(j.at("amplitude"), where + ".amplitude");
  if (j.contains("center")) init.center = vec3(j.at("center"), where + ".center", dim);
  if (j.contains("momentum")) init.momentum = vec3(j.at("momentum"), where + ".momentum", dim);
  if (j.contains("component")) init.component = j.at("component").get<int>();
  if (j.contains("band_fraction"))
    init.band_fraction = num(j.at("band_fraction"), where + ".band_fraction");
  if (j.contains("seed")) init.seed = j.at("seed").get<unsigned long long>();
  if (j.contains("channel")) init.channel = j.at("channel").get<int>();
  if (j.contains("mode")) init.mode = j.at("mode").get<int>();
  if (j.contains("normalize")) init.normalize = j.at("normalize").get<bool>();
  if (j.contains("path")) init.path = j.at("path").get<std::string>();
  if (init.preset == InitialSpec::Preset::file && init.path.empty())
    fail(where + ".path", "file preset needs a path");
  return init;
}

const std::set<std::string>& diagnostic_keys(const std::string& name) {
  static const std::map<std::string, std::set<std::string>> table = {
      {"norms", {"name", "stride", "split", "states"}},
      {"decay", {"name", "t_a", "t_b", "norm", "theoretical", "tol"}},
      {"kato", {"name", "T", "R", "M", "dt"}},
      {"channels", {"name", "delta", "t0"}},
      {"complete", {"name", "T", "dt"}},
      {"translaw", {"name", "t", "dt"}},
      {"inhom", {"name", "forcing"}},
      {"cancellation", {"name", "s_list", "p", "samples"}},
      {"local-decay", {"name", "eps", "times", "dt"}},
      {"matrix-check", {"name", "window_tol"}},
      {"eig", {"name", "max_count", "tol"}},
  };
  const auto it = table.find(name);
  if (it == table.end()) fail("diagnostics", "unknown diagnostic \"" + name + "\"");
  return it->second;
}

} // namespace

ScenarioConfig parse_scenario(const json& doc, const std::string& name) {
  check_keys(doc, "", {"grid", "model", "initial", "time", "diagnostics", "output"});
  ScenarioConfig sc;
  sc.name = name;
  sc.raw = doc;

  const json& jg = require(doc, "", "grid");
  check_keys(jg, "grid", {"dim", "n", "length"});
  const int dim = require(jg, "grid", "dim").get<int>();
  const int n = require(jg, "grid", "n").get<int>();
  const double length = num(require(jg, "grid", "length"), "grid.length");
  sc.grid = make_grid(dim, n, length);

  const json& jm = require(doc, "", "model");
  check_keys(jm, "model", {"kind", "mu", "potentials", "perturbation"});
  const std::string kind = require(jm, "model", "kind").get<std::string>();
  if (kind != "scalar" && kind != "matrix") fail("model.kind", "must be scalar | matrix");
  const double mu = jm.contains("mu") ? num(jm.at("mu"), "model.mu") : 0.0;
  std::vector<PotentialSpec> pots;
  if (jm.contains("potentials")) {
    const json& jp = jm.at("potentials");
    if (!jp.is_array()) fail("model.potentials", "expected an array");
    for (std::size_t i = 0; i < jp.size(); ++i)
      pots.push_back(
          parse_potential(jp[i], "model.potentials[" + std::to_string(i) + "]", dim));
  }
  std::optional<PerturbationSpec> pert;
  if (jm.contains("perturbation")) {
    const json& jq = jm.at("perturbation");
    check_keys(jq, "model.perturbation",
               {"shape", "amplitude", "width", "center", "envelope"});
    PerturbationSpec ps;
    ps.profile.shape = parse_shape(require(jq, "model.perturbation", "shape"),
                                   "model.perturbation.shape");
    ps.profile.amplitude =
        num(require(jq, "model.perturbation", "amplitude"), "model.perturbation.amplitude");
    ps.profile.width = num(require(jq, "model.perturbation", "width"),
                           "model.perturbation.width");
    if (jq.contains("center"))
      ps.profile.center = vec3(jq.at("center"), "model.perturbation.center", dim);
    if (jq.contains("envelope"))
      ps.envelope = parse_envelope(jq.at("envelope"), "model.perturbation.envelope");
    pert = ps;
  }
  sc.model = build_hamiltonian(kind == "scalar" ? ModelKind::scalar : ModelKind::matrix, mu, pots,
                               pert);

  sc.initial = parse_initial(require(doc, "", "initial"), dim);

  const json& jt = require(doc, "", "time");
  check_keys(jt, "time", {"T", "dt"});
  sc.T = num(require(jt, "time", "T"), "time.T");
  sc.dt = num(require(jt, "time", "dt"), "time.dt");
  if (sc.T <= 0 || sc.dt <= 0 || sc.dt > sc.T) fail("time", "need 0 < dt <= T");

  if (doc.contains("diagnostics")) {
    const json& jd = doc.at("diagnostics");
    if (!jd.is_array()) fail("diagnostics", "expected an array");
    for (std::size_t i = 0; i < jd.size(); ++i) {
      const std::string where = "diagnostics[" + std::to_string(i) + "]";
      const json& entry = jd[i];
      DiagnosticEntry de;
      if (entry.is_string()) {
        de.name = entry.get<std::string>();
        diagnostic_keys(de.name);
        de.options = json::object();
      } else {
        de.name = require(entry, where, "name").get<std::string>();
        check_keys(entry, where, diagnostic_keys(de.name));
        de.options = entry;
      }
      sc.diagnostics.push_back(std::move(de));
    }
  }

  if (doc.contains("output")) {
    const json& jo = doc.at("output");
    check_keys(jo, "output", {"csv", "json"});
    if (jo.contains("csv")) sc.output.csv = jo.at("csv").get<std::string>();
    if (jo.contains("json")) sc.output.json = jo.at("json").get<std::string>();
  }

  sc.wraparound_ok = wraparound_guard_ok(sc.model, sc.grid, sc.T);
  return sc;
}

ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario file: " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("scenario JSON parse error: " + std::string(e.what()));
  }
  std::string name = path;
  const auto slash = name.find_last_of('/');
  if (slash != std::string::npos) name = name.substr(slash + 1);
  const auto dot = name.rfind(".json");
  if (dot != std::string::npos) name = name.substr(0, dot);
  return parse_scenario(doc, name);
}

const DiagnosticEntry* find_diagnostic(const ScenarioConfig& sc, const std::string& name) {
  for (const auto& d : sc.diagnostics)
    if (d.name == name) return &d;
  return nullptr;
}

Field make_initial(const ScenarioConfig& sc) {
  const int components = sc.model.components();
  Field f(sc.grid, components);
  switch (sc.initial.preset) {
    case InitialSpec::Preset::gaussian:
      f = gaussian_packet(sc.grid, sc.initial.width, sc.initial.center, sc.initial.momentum,
                          components, sc.initial.component, sc.initial.amplitude);
      break;
    case InitialSpec::Preset::plane_wave:
      f = plane_wave(sc.grid, sc.initial.momentum, components, sc.initial.component);
      if (sc.initial.amplitude != 1.0) f *= cplx(sc.initial.amplitude, 0.0);
      break;
    case InitialSpec::Preset::random: {
      CounterRng rng(sc.initial.seed, 0);
      f = random_bandlimited_field(sc.grid, components, sc.initial.band_fraction, rng);
      if (sc.initial.amplitude != 1.0) f *= cplx(sc.initial.amplitude, 0.0);
      break;
    }
    case InitialSpec::Preset::file: {
      std::ifstream in(sc.initial.path);
      if (!in) throw ConfigError("cannot open initial-state file: " + sc.initial.path);
      const std::size_t n = sc.grid.size();
      for (int c = 0; c < components; ++c)
        for (std::size_t i = 0; i < n; ++i) {
          double re, im;
          char comma;
          if (!(in >> re >> comma >> im) || comma != ',')
            throw ConfigError("initial-state file too short or malformed (need re,im rows)");
          f.at(c, i) = cplx(re, im);
        }
      break;
    }
    case InitialSpec::Preset::bound_state:
      throw ConfigError("bound_state initial data is assembled by the caller");
  }
  if (sc.initial.normalize) {
    const double n = norm_l2(f);
    if (n > 0) f *= cplx(1.0 / n, 0.0);
  }
  return f;
}

} // namespace ctsim
