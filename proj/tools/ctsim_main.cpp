#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"

#include "ctsim/channels.hpp"
#include "ctsim/diagnostics.hpp"
#include "ctsim/errors.hpp"
#include "ctsim/io.hpp"
#include "ctsim/scenario.hpp"
#include "ctsim/transforms.hpp"
#include "ctsim/version.hpp"

namespace {

using namespace ctsim;
using nlohmann::json;

struct Options {
  std::vector<std::string> scenarios;
  std::string out = ".";
  unsigned long long seed = 0;
  int workers = 1;
  double dt_override = 0;
  bool quiet = false;
};

std::mutex g_print_mutex;

void say(const Options& opt, const std::string& line) {
  if (opt.quiet) return;
  std::lock_guard<std::mutex> lock(g_print_mutex);
  std::fprintf(stdout, "%s\n", line.c_str());
}

class Emitter {
public:
  Emitter(const ScenarioConfig& sc, const Options& opt, const std::string& scenario_path,
          const std::string& command)
      : sc_(sc), out_dir_(opt.out), command_(command) {
    manifest_.scenario_path = scenario_path;
    manifest_.hash = config_hash(sc.raw);
    manifest_.version = kVersion;
    start_ = std::chrono::steady_clock::now();
  }

  std::string csv_path(const std::string& what) const {
    return join(out_dir_, sc_.output.csv + "_" + what + ".csv");
  }
  std::string json_path(const std::string& what) const {
    return join(out_dir_, sc_.output.json + "_" + what + ".json");
  }

  void emit_csv_series(const std::string& what, const std::vector<double>& t,
                       const std::vector<double>& v, const std::string& col = "value") {
    const std::string p = csv_path(what);
    write_series_csv(p, t, v, col);
    manifest_.outputs.push_back(p);
  }
  void emit_trajectory(const std::string& what, const Trajectory& traj) {
    const std::string p = csv_path(what);
    write_trajectory_csv(p, traj);
    manifest_.outputs.push_back(p);
  }
  void emit_csv(const std::string& what, const std::vector<std::string>& header,
                const std::vector<std::vector<double>>& rows) {
    const std::string p = csv_path(what);
    write_csv(p, header, rows);
    manifest_.outputs.push_back(p);
  }
  void emit_json(const std::string& what, const json& doc) {
    const std::string p = json_path(what);
    save_report(doc, p);
    manifest_.outputs.push_back(p);
  }

  void phase(const std::string& name) {
    const auto now = std::chrono::steady_clock::now();
    manifest_.phases.emplace_back(name,
                                  std::chrono::duration<double>(now - start_).count());
    start_ = now;
  }

  void finish() {
    phase("write");
    const std::string p = json_path(command_ + "_manifest");
    save_report(to_json(manifest_), p);
  }

private:
  static std::string join(const std::string& dir, const std::string& file) {
    if (dir.empty() || dir == ".") return file;
    return dir.back() == '/' ? dir + file : dir + "/" + file;
  }
  const ScenarioConfig& sc_;
  std::string out_dir_;
  std::string command_;
  RunManifest manifest_;
  std::chrono::steady_clock::time_point start_;
};

long scenario_steps(const ScenarioConfig& sc) { return std::lround(sc.T / sc.dt); }

double opt_num(const json& options, const std::string& key, double fallback) {
  return options.contains(key) ? options.at(key).get<double>() : fallback;
}

Field resolve_initial(const ScenarioConfig& sc) {
  if (sc.initial.preset != InitialSpec::Preset::bound_state) return make_initial(sc);
  const Channel ch = make_channel(sc.model, sc.initial.channel, sc.grid);
  if (sc.initial.mode < 0 || static_cast<std::size_t>(sc.initial.mode) >= ch.bound.size())
    throw ConfigError("bound_state initial data: mode index out of range");
  Field f = from_frame(ch.bound.fields[static_cast<std::size_t>(sc.initial.mode)], ch.frame, 0.0);
  if (sc.initial.amplitude != 1.0) f *= cplx(sc.initial.amplitude, 0.0);
  return f;
}

std::vector<Channel> all_channels(const ScenarioConfig& sc) {
  std::vector<Channel> chans;
  for (std::size_t j = 0; j < sc.model.potentials.size(); ++j)
    chans.push_back(make_channel(sc.model, static_cast<int>(j), sc.grid));
  return chans;
}

ForcingSpec parse_forcing(const json& jf, const ScenarioConfig& sc) {
  if (!jf.is_object()) throw ConfigError("inhom diagnostic needs a forcing object");
  for (auto it = jf.begin(); it != jf.end(); ++it) {
    const std::string k = it.key();
    if (k != "shape" && k != "amplitude" && k != "width" && k != "center" && k != "envelope")
      throw ConfigError("forcing: unknown key \"" + k + "\"");
  }
  PotentialSpec p;
  const std::string shape = jf.at("shape").get<std::string>();
  if (shape == "gaussian")
    p.shape = PotentialShape::gaussian;
  else if (shape == "sech2")
    p.shape = PotentialShape::sech2;
  else if (shape == "compact_bump")
    p.shape = PotentialShape::compact_bump;
  else
    throw ConfigError("forcing.shape must be gaussian | sech2 | compact_bump");
  p.amplitude = jf.at("amplitude").get<double>();
  p.width = jf.at("width").get<double>();
  if (jf.contains("center")) {
    const auto& c = jf.at("center");
    for (std::size_t i = 0; i < c.size() && i < 3; ++i) p.center[i] = c[i].get<double>();
  }

  ForcingSpec forcing;
  forcing.profile = Field(sc.grid, sc.model.components());
  const Field prof = sample_scalar_potential(std::vector<PotentialSpec>{p}, sc.grid, 0.0).field;
  for (std::size_t i = 0; i < sc.grid.size(); ++i) forcing.profile.at(0, i) = prof.at(0, i);
  if (jf.contains("envelope")) {
    const auto& je = jf.at("envelope");
    const std::string type = je.at("type").get<std::string>();
    if (type == "constant")
      forcing.envelope.type = EnvelopeSpec::Type::constant;
    else if (type == "exp_decay")
      forcing.envelope.type = EnvelopeSpec::Type::exp_decay;
    else if (type == "gaussian")
      forcing.envelope.type = EnvelopeSpec::Type::gaussian;
    else
      throw ConfigError("forcing.envelope.type must be constant | exp_decay | gaussian");
    if (je.contains("rate")) forcing.envelope.rate = je.at("rate").get<double>();
    if (je.contains("t0")) forcing.envelope.t0 = je.at("t0").get<double>();
    if (je.contains("sigma")) forcing.envelope.sigma = je.at("sigma").get<double>();
  }
  return forcing;
}

// --- commands -------------------------------------------------------------------

int cmd_eig(const ScenarioConfig& sc, Emitter& em) {
  json options = json::object();
  if (const auto* d = find_diagnostic(sc, "eig")) options = d->options;
  const int max_count = static_cast<int>(opt_num(options, "max_count", 8));
  const double tol = opt_num(options, "tol", 1e-7);
  const double window_tol =
      find_diagnostic(sc, "matrix-check")
          ? opt_num(find_diagnostic(sc, "matrix-check")->options, "window_tol", 1e-6)
          : 1e-6;

  json entries = json::array();
  int dumps = 0;
  const bool moving = [&] {
    for (const auto& p : sc.model.potentials)
      if (p.speed2() != 0) return true;
    return false;
  }();
  const int n_entries =
      sc.model.potentials.empty() ? 0 : (moving ? static_cast<int>(sc.model.potentials.size()) : 1);

  for (int j = 0; j < std::max(n_entries, sc.model.potentials.empty() ? 1 : n_entries); ++j) {
    json entry;
    BoundStateBasis basis;
    if (sc.model.potentials.empty()) {
      entry["channel"] = -1;
      basis.self_adjoint = sc.model.kind == ModelKind::scalar;
    } else {
      const HamiltonianSpec op_model = moving ? channel_frame(sc.model, j) : sc.model;
      entry["channel"] = moving ? j : -1;
      if (sc.model.kind == ModelKind::scalar) {
        Field v = sample_scalar_potential(op_model, sc.grid, 0.0).field;
        if (op_model.mu != 0)
          for (std::size_t i = 0; i < sc.grid.size(); ++i) v.at(0, i) += op_model.mu;
        if (sc.grid.dim == 1 && sc.grid.size() <= 4096)
          basis = scalar_spectrum_dense(v, tol);
        else
          basis = bound_states_scalar(v, max_count, tol);
      } else {
        basis = matrix_spectrum_dense(op_model, sc.grid, window_tol);
        entry["admissibility"] = to_json(check_admissibility(op_model, sc.grid, window_tol));
      }
    }
    entry["spectrum"] = to_json(basis);
    entries.push_back(entry);

    for (std::size_t m = 0; m < basis.size() && dumps < 8; ++m, ++dumps) {
      std::vector<std::vector<double>> rows;
      const Field& u = basis.fields[m];
      for (std::size_t i = 0; i < sc.grid.size(); ++i) {
        std::vector<double> row{sc.grid.point(i)[0]};
        for (int c = 0; c < u.components; ++c) {
          row.push_back(u.at(c, i).real());
          row.push_back(u.at(c, i).imag());
        }
        rows.push_back(std::move(row));
      }
      std::vector<std::string> header{"x"};
      for (int c = 0; c < basis.fields[m].components; ++c) {
        header.push_back("re" + std::to_string(c));
        header.push_back("im" + std::to_string(c));
      }
      em.emit_csv("eigenfield_" + std::to_string(j) + "_" + std::to_string(m), header, rows);
    }
    if (sc.model.potentials.empty()) break;
  }
  em.phase("compute");
  em.emit_json("eig", json{{"kind", sc.model.kind == ModelKind::scalar ? "scalar" : "matrix"},
                           {"entries", entries}});
  return 0;
}

int cmd_evolve(const ScenarioConfig& sc, Emitter& em) {
  const Field psi0 = resolve_initial(sc);
  Schedule sched;
  sched.norm_stride = std::max<long>(1, scenario_steps(sc) / 1024);
  const Trajectory traj = evolve(psi0, sc.model, 0.0, sc.T, sc.dt, nullptr, sched);
  em.phase("compute");
  em.emit_trajectory("norms", traj);
  return sc.wraparound_ok && !traj.wraparound_warning ? 0 : 4;
}

int cmd_decay(const ScenarioConfig& sc, Emitter& em) {
  json options = json::object();
  if (const auto* d = find_diagnostic(sc, "decay")) options = d->options;
  const std::string norm =
      options.contains("norm") ? options.at("norm").get<std::string>() : "linf";
  const double t_a = opt_num(options, "t_a", 1.0);
  const double t_b = opt_num(options, "t_b", sc.T);
  const double theoretical = opt_num(options, "theoretical", -0.5 * sc.grid.dim);
  const double tol = opt_num(options, "tol", 0.1);

  const Field psi0 = resolve_initial(sc);
  Schedule sched;
  sched.norm_stride = std::max<long>(1, scenario_steps(sc) / 1024);
  sched.skip_split_norm = norm != "l2plusLinf";
  const Trajectory traj = evolve(psi0, sc.model, 0.0, sc.T, sc.dt, nullptr, sched);

  std::vector<double> times, values;
  for (const auto& row : traj.norms) {
    times.push_back(row.t);
    double v = 0;
    for (const auto& c : row.comp) v += norm == "l2plusLinf" ? c.l2pluslinf : c.linf;
    values.push_back(v);
  }
  DecayReport rep = decay_fit(times, values, t_a, t_b, theoretical, tol);
  rep.kind = norm;
  rep.dim = sc.grid.dim;
  em.phase("compute");
  em.emit_csv_series("decay", times, values, norm);
  em.emit_json("decay", to_json(rep));
  return rep.degenerate ? 4 : 0;
}

int cmd_channels(const ScenarioConfig& sc, Emitter& em) {
  if (sc.model.potentials.empty()) throw ConfigError("channels need at least one potential");
  json options = json::object();
  if (const auto* d = find_diagnostic(sc, "channels")) options = d->options;

  const Field psi0 = resolve_initial(sc);
  Schedule sched;
  sched.norm_stride = 0;
  sched.state_stride = std::max<long>(1, scenario_steps(sc) / 64);
  sched.skip_split_norm = true;
  const Trajectory traj = evolve(psi0, sc.model, 0.0, sc.T, sc.dt, nullptr, sched);

  const std::vector<Channel> chans = all_channels(sc);
  const auto series = projection_decay_series(traj, chans);

  json fits = json::array();
  bool degenerate = false;
  for (const auto& s : series) {
    fits.push_back(to_json(s));
    degenerate = degenerate || s.degenerate;
    em.emit_csv_series("projection_" + std::to_string(s.channel), s.times, s.values, "norm");
  }

  json doc{{"channels", fits}};
  if (sc.model.potentials.size() >= 2) {
    const auto& v1 = sc.model.potentials[0].velocity;
    const auto& v2 = sc.model.potentials[1].velocity;
    double rel = 0;
    for (int d = 0; d < 3; ++d) rel += (v2[d] - v1[d]) * (v2[d] - v1[d]);
    const double delta = opt_num(options, "delta", 0.1 * std::sqrt(rel));
    const double t0 = opt_num(options, "t0", 0.0);
    if (delta > 0 && sc.T > t0 && sc.T > 0) {
      const ChannelCutoffs cuts = channel_cutoffs(sc.grid, sc.T, delta, {v1, v2}, t0);
      const Field v2field =
          sample_scalar_potential(std::vector<PotentialSpec>{sc.model.potentials[1]}, sc.grid,
                                  sc.T)
              .field;
      double sep = 0;
      for (std::size_t i = 0; i < sc.grid.size(); ++i)
        sep = std::max(sep, std::abs(cuts.chi1.at(0, i).real() * v2field.at(0, i)));
      doc["cutoff_overlap_warning"] = cuts.overlap_warning;
      doc["support_separation_sup"] = sep;
      doc["delta"] = delta;
    }
  }
  em.phase("compute");
  em.emit_json("channels", doc);
  return degenerate ? 4 : 0;
}

int cmd_complete(const ScenarioConfig& sc, Emitter& em) {
  json options = json::object();
  if (const auto* d = find_diagnostic(sc, "complete")) options = d->options;
  const double T = opt_num(options, "T", sc.T);
  const double dt = opt_num(options, "dt", sc.dt);

  const Field psi0 = resolve_initial(sc);
  const std::vector<Channel> chans = all_channels(sc);
  const CompletenessReport rep = asymptotic_decomposition(psi0, sc.model, chans, T, dt);
  em.phase("compute");
  em.emit_csv_series("remainder", rep.times, rep.remainder, "remainder");
  em.emit_json("complete", to_json(rep));
  bool ok = rep.stabilized;
  for (const auto& img : rep.images) ok = ok && img.converged;
  return ok ? 0 : 4;
}

int cmd_kato(const ScenarioConfig& sc, Emitter& em) {
  json options = json::object();
  if (const auto* d = find_diagnostic(sc, "kato")) options = d->options;
  const double T = opt_num(options, "T", std::min(sc.T, 8.0));
  const double R = opt_num(options, "R", sc.grid.length / 4.0);
  const double dt = opt_num(options, "dt", sc.dt);
  std::vector<double> m_list{4, 8, 16, 32};
  if (options.contains("M")) {
    m_list.clear();
    for (const auto& m : options.at("M")) m_list.push_back(m.get<double>());
  }
  const Field f = resolve_initial(sc);
  const SmoothingReport rep = kato_smoothing(sc.model, f, T, R, m_list, dt);
  em.phase("compute");
  em.emit_csv_series("kato", rep.m_values, rep.values, "integral");
  em.emit_json("kato", to_json(rep));
  return rep.slope_valid ? 0 : 4;
}

int cmd_translaw(const ScenarioConfig& sc, Emitter& em) {
  json options = json::object();
  if (const auto* d = find_diagnostic(sc, "translaw")) options = d->options;
  const double t = opt_num(options, "t", sc.T);
  const double dt = opt_num(options, "dt", sc.dt);
  const Field psi0 = resolve_initial(sc);
  const double rel = verify_translaw(psi0, sc.model, t, dt);
  em.phase("compute");
  em.emit_json("translaw", json{{"t", t}, {"dt", dt}, {"relative_discrepancy", rel}});
  return 0;
}

int cmd_inhom(const ScenarioConfig& sc, Emitter& em) {
  const auto* d = find_diagnostic(sc, "inhom");
  if (!d || !d->options.contains("forcing"))
    throw ConfigError("inhom command needs a diagnostics entry with a forcing object");
  const ForcingSpec forcing = parse_forcing(d->options.at("forcing"), sc);

  const Field psi0 = resolve_initial(sc);
  Schedule sched;
  sched.norm_stride = std::max<long>(1, scenario_steps(sc) / 256);
  sched.state_stride = std::max<long>(1, scenario_steps(sc) / 64);
  const Trajectory traj = evolve(psi0, sc.model, 0.0, sc.T, sc.dt, &forcing, sched);

  std::vector<ProjectionDecaySeries> series;
  if (!sc.model.potentials.empty()) series = projection_decay_series(traj, all_channels(sc));
  const DecayReport rep = inhom_decay_check(traj, &forcing, series);
  em.phase("compute");
  em.emit_csv_series("inhom_ratio", rep.times, rep.values, "ratio");
  em.emit_json("inhom", to_json(rep));
  return rep.pass ? 0 : 4;
}

int cmd_matrix_check(const ScenarioConfig& sc, Emitter& em) {
  if (sc.model.kind != ModelKind::matrix)
    throw ConfigError("matrix-check applies to matrix models");
  json options = json::object();
  if (const auto* d = find_diagnostic(sc, "matrix-check")) options = d->options;
  const double window_tol = opt_num(options, "window_tol", 1e-6);

  json entries = json::array();
  bool all_ok = true;
  for (std::size_t j = 0; j < sc.model.potentials.size(); ++j) {
    const AdmissibilityReport rep =
        check_admissibility(channel_frame(sc.model, static_cast<int>(j)), sc.grid, window_tol);
    all_ok = all_ok && rep.admissible;
    entries.push_back(json{{"channel", j}, {"report", to_json(rep)}});
  }
  em.phase("compute");
  em.emit_json("matrix_check", json{{"entries", entries}});
  return all_ok ? 0 : 4;
}

int dispatch(const std::string& cmd, const std::string& path, const Options& opt) {
  try {
    ScenarioConfig sc = load_scenario(path);
    if (opt.dt_override > 0) sc.dt = opt.dt_override;
    if (opt.seed != 0) sc.initial.seed = opt.seed;
    Emitter em(sc, opt, path, cmd);
    em.phase("load");
    int code = 0;
    if (cmd == "eig")
      code = cmd_eig(sc, em);
    else if (cmd == "evolve")
      code = cmd_evolve(sc, em);
    else if (cmd == "decay")
      code = cmd_decay(sc, em);
    else if (cmd == "channels")
      code = cmd_channels(sc, em);
    else if (cmd == "complete")
      code = cmd_complete(sc, em);
    else if (cmd == "kato")
      code = cmd_kato(sc, em);
    else if (cmd == "translaw")
      code = cmd_translaw(sc, em);
    else if (cmd == "inhom")
      code = cmd_inhom(sc, em);
    else if (cmd == "matrix-check")
      code = cmd_matrix_check(sc, em);
    else
      throw ConfigError("unknown command " + cmd);
    em.finish();
    say(opt, "[" + sc.name + "] " + cmd + (code == 0 ? ": ok" : ": soft warnings"));
    return code;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error (%s): %s\n", path.c_str(), e.what());
    return 1;
  } catch (const SolverError& e) {
    std::fprintf(stderr, "solver error (%s): %s\n", path.c_str(), e.what());
    return 2;
  } catch (const NumericalAbort& e) {
    std::fprintf(stderr, "numerical abort (%s): %s\n", path.c_str(), e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error (%s): %s\n", path.c_str(), e.what());
    return 1;
  }
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"spectral simulation and verification toolkit for charge-transfer models"};
  app.require_subcommand(1);
  app.fallthrough();

  Options opt;
  app.add_option("--scenario", opt.scenarios, "scenario JSON file(s)")->required();
  app.add_option("--out", opt.out, "output directory");
  app.add_option("--seed", opt.seed, "override the probe/initial seed");
  app.add_option("--workers", opt.workers, "scenario worker pool width");
  app.add_option("--dt-override", opt.dt_override, "override the scenario step");
  app.add_flag("--quiet", opt.quiet, "suppress progress output");

  for (const char* name : {"eig", "evolve", "decay", "channels", "complete", "kato", "translaw",
                           "inhom", "matrix-check"})
    app.add_subcommand(name);

  CLI11_PARSE(app, argc, argv);
  const std::string cmd = app.get_subcommands().front()->get_name();

  int exit_code = 0;
  if (opt.workers <= 1 || opt.scenarios.size() <= 1) {
    for (const auto& path : opt.scenarios) {
      const int code = dispatch(cmd, path, opt);
      exit_code = std::max(exit_code, code);
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::atomic<int> worst{0};
    const std::size_t width =
        std::min<std::size_t>(static_cast<std::size_t>(opt.workers), opt.scenarios.size());
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < width; ++w)
      pool.emplace_back([&] {
        for (;;) {
          const std::size_t i = next.fetch_add(1);
          if (i >= opt.scenarios.size()) return;
          const int code = dispatch(cmd, opt.scenarios[i], opt);
          int cur = worst.load();
          while (cur < code && !worst.compare_exchange_weak(cur, code)) {
          }
        }
      });
    for (auto& th : pool) th.join();
    exit_code = worst.load();
  }
  return exit_code;
}
