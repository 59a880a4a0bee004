#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "ctsim/errors.hpp"
#include "ctsim/io.hpp"
#include "ctsim/norms.hpp"
#include "ctsim/propagate.hpp"
#include "ctsim/rng.hpp"
#include "ctsim/scenario.hpp"
#include "doctest.h"
#include "json.hpp"

using namespace ctsim;
using nlohmann::json;

namespace {

json minimal_doc() {
  return json{{"grid", {{"dim", 1}, {"n", 64}, {"length", 20.0}}},
              {"model", {{"kind", "scalar"}}},
              {"initial", {{"preset", "gaussian"}}},
              {"time", {{"T", 1.0}, {"dt", 0.01}}}};
}

std::string thrown_message(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

} // namespace

TEST_SUITE("scenario") {

TEST_CASE("full document parses into the configuration") {
  json doc = minimal_doc();
  doc["model"] = json{
      {"kind", "scalar"},
      {"mu", 0.25},
      {"potentials",
       json::array({json{{"shape", "sech2"},
                         {"amplitude", -1.0},
                         {"width", 1.0},
                         {"center", json::array({0.0})},
                         {"velocity", json::array({1.0})}}})},
      {"perturbation",
       json{{"shape", "gaussian"},
            {"amplitude", 0.1},
            {"width", 2.0},
            {"envelope", json{{"type", "exp_decay"}, {"rate", 1.0}}}}}};
  doc["initial"] = json{{"preset", "gaussian"},
                        {"width", 1.5},
                        {"center", json::array({-3.0})},
                        {"momentum", json::array({0.5})},
                        {"normalize", true}};
  doc["time"] = json{{"T", 2.0}, {"dt", 0.01}};
  doc["diagnostics"] = json::array(
      {json{{"name", "norms"}, {"stride", 10}, {"split", true}},
       "decay",
       json{{"name", "kato"}, {"T", 2.0}, {"R", 5.0}, {"M", json::array({2.0, 4.0})}}});
  doc["output"] = json{{"csv", "series"}, {"json", "reports"}};

  const ScenarioConfig sc = parse_scenario(doc, "demo");
  CHECK(sc.name == "demo");
  CHECK(sc.grid.dim == 1);
  CHECK(sc.grid.n == 64);
  CHECK(sc.grid.length == 20.0);
  CHECK(sc.model.kind == ModelKind::scalar);
  CHECK(sc.model.mu == 0.25);
  REQUIRE(sc.model.potentials.size() == 1);
  CHECK(sc.model.potentials[0].shape == PotentialShape::sech2);
  CHECK(sc.model.potentials[0].velocity[0] == 1.0);
  CHECK(sc.model.perturbation.has_value());
  CHECK(sc.model.perturbation->envelope.type == EnvelopeSpec::Type::exp_decay);
  CHECK(sc.initial.preset == InitialSpec::Preset::gaussian);
  CHECK(sc.initial.width == 1.5);
  CHECK(sc.initial.center[0] == -3.0);
  CHECK(sc.initial.normalize);
  CHECK(sc.T == 2.0);
  CHECK(sc.dt == 0.01);
  REQUIRE(sc.diagnostics.size() == 3);
  const DiagnosticEntry* norms = find_diagnostic(sc, "norms");
  REQUIRE(norms != nullptr);
  CHECK(norms->options.at("stride").get<int>() == 10);
  CHECK(find_diagnostic(sc, "decay") != nullptr);
  CHECK(find_diagnostic(sc, "translaw") == nullptr);
  CHECK(sc.output.csv == "series");
  CHECK(sc.output.json == "reports");
}

TEST_CASE("unknown keys are rejected with their path") {
  json top = minimal_doc();
  top["surprise"] = 1;
  const std::string m1 = thrown_message([&] { parse_scenario(top, "x"); });
  CHECK(m1.find("unknown key \"surprise\"") != std::string::npos);

  json g = minimal_doc();
  g["grid"]["spacing"] = 0.1;
  const std::string m2 = thrown_message([&] { parse_scenario(g, "x"); });
  CHECK(m2.find("scenario.grid") != std::string::npos);
  CHECK(m2.find("spacing") != std::string::npos);

  json p = minimal_doc();
  p["model"]["potentials"] = json::array({json{
      {"shape", "sech2"}, {"amplitude", -1.0}, {"width", 1.0}, {"speed", 2.0}}});
  const std::string m3 = thrown_message([&] { parse_scenario(p, "x"); });
  CHECK(m3.find("model.potentials[0]") != std::string::npos);
  CHECK(m3.find("speed") != std::string::npos);

  json d = minimal_doc();
  d["diagnostics"] = json::array({json{{"name", "norms"}, {"t_a", 1.0}}});
  const std::string m4 = thrown_message([&] { parse_scenario(d, "x"); });
  CHECK(m4.find("diagnostics[0]") != std::string::npos);

  json u = minimal_doc();
  u["diagnostics"] = json::array({"spectro"});
  const std::string m5 = thrown_message([&] { parse_scenario(u, "x"); });
  CHECK(m5.find("unknown diagnostic") != std::string::npos);
}

TEST_CASE("missing and invalid sections are rejected") {
  json nogrid = minimal_doc();
  nogrid.erase("grid");
  const std::string m = thrown_message([&] { parse_scenario(nogrid, "x"); });
  CHECK(m.find("missing required field \"grid\"") != std::string::npos);

  json badtime = minimal_doc();
  badtime["time"] = json{{"T", 1.0}, {"dt", 2.0}};
  CHECK_THROWS_AS(parse_scenario(badtime, "x"), ConfigError);
  badtime["time"] = json{{"T", -1.0}, {"dt", 0.01}};
  CHECK_THROWS_AS(parse_scenario(badtime, "x"), ConfigError);
  badtime["time"] = json{{"T", 1.0}, {"dt", 0.0}};
  CHECK_THROWS_AS(parse_scenario(badtime, "x"), ConfigError);

  // Matrix potentials require a nonzero modulation frequency.
  json mat = minimal_doc();
  mat["model"] = json{{"kind", "matrix"},
                      {"mu", 1.0},
                      {"potentials", json::array({json{{"shape", "sech2"},
                                                       {"amplitude", -1.0},
                                                       {"width", 1.0}}})}};
  CHECK_THROWS_AS(parse_scenario(mat, "x"), ConfigError);

  json badkind = minimal_doc();
  badkind["model"]["kind"] = "vector";
  CHECK_THROWS_AS(parse_scenario(badkind, "x"), ConfigError);

  // A 2-entry vector in a 1-D scenario is dimensionally wrong.
  json badvec = minimal_doc();
  badvec["initial"]["center"] = json::array({1.0, 2.0});
  CHECK_THROWS_AS(parse_scenario(badvec, "x"), ConfigError);
}

TEST_CASE("initial presets match direct construction") {
  json doc = minimal_doc();
  doc["initial"] = json{{"preset", "gaussian"},
                        {"width", 2.0},
                        {"center", json::array({-3.0})},
                        {"momentum", json::array({0.8})},
                        {"amplitude", 0.7}};
  const ScenarioConfig sc = parse_scenario(doc, "x");
  const Field direct =
      gaussian_packet(sc.grid, 2.0, {-3, 0, 0}, {0.8, 0, 0}, 1, 0, cplx(0.7, 0.0));
  const Field made = make_initial(sc);
  REQUIRE(made.data.size() == direct.data.size());
  for (std::size_t i = 0; i < made.data.size(); ++i)
    CHECK(std::abs(made.data[i] - direct.data[i]) < 1e-15);

  json pw = minimal_doc();
  pw["initial"] = json{{"preset", "plane_wave"}, {"momentum", json::array({1.2566370614359172})}};
  const ScenarioConfig scpw = parse_scenario(pw, "x");
  const Field wave = make_initial(scpw);
  // Unit pointwise amplitude: the L2 norm is sqrt(box length).
  CHECK(norm_l2(wave) == doctest::Approx(std::sqrt(20.0)).epsilon(1e-12));

  json rnd = minimal_doc();
  rnd["initial"] =
      json{{"preset", "random"}, {"seed", 5}, {"band_fraction", 0.25}, {"normalize", true}};
  const ScenarioConfig scr = parse_scenario(rnd, "x");
  const Field r1 = make_initial(scr);
  const Field r2 = make_initial(scr);
  CHECK(r1.data == r2.data);  // deterministic across calls
  CHECK(norm_l2(r1) == doctest::Approx(1.0).epsilon(1e-12));
  CounterRng rng(5, 0);
  const Field direct_r = random_bandlimited_field(scr.grid, 1, 0.25, rng);
  for (std::size_t i = 0; i < r1.data.size(); ++i)
    CHECK(std::abs(r1.data[i] - direct_r.data[i]) < 1e-15);

  json bs = minimal_doc();
  bs["initial"] = json{{"preset", "bound_state"}, {"channel", 0}, {"mode", 0}};
  const ScenarioConfig scbs = parse_scenario(bs, "x");
  CHECK_THROWS_AS(make_initial(scbs), ConfigError);
}

TEST_CASE("file preset round-trips a sampled state") {
  json doc = minimal_doc();
  const ScenarioConfig probe = parse_scenario(doc, "x");
  const Field original = gaussian_packet(probe.grid, 1.3, {2, 0, 0}, {0.4, 0, 0});

  const std::string path = "/tmp/ctsim_test_initial_state.csv";
  {
    std::ofstream out(path, std::ios::binary);
    REQUIRE(out.good());
    for (const auto& z : original.data)
      out << format_double(z.real()) << "," << format_double(z.imag()) << "\n";
  }
  doc["initial"] = json{{"preset", "file"}, {"path", path}};
  const ScenarioConfig sc = parse_scenario(doc, "x");
  const Field loaded = make_initial(sc);
  CHECK(loaded.data == original.data);  // 17-digit text is bit round-trip exact

  // Truncated files and missing paths are rejected.
  {
    std::ofstream out(path, std::ios::binary);
    out << "0.0,0.0\n";
  }
  CHECK_THROWS_AS(make_initial(sc), ConfigError);
  std::remove(path.c_str());
  CHECK_THROWS_AS(make_initial(sc), ConfigError);

  json nopath = minimal_doc();
  nopath["initial"] = json{{"preset", "file"}};
  CHECK_THROWS_AS(parse_scenario(nopath, "x"), ConfigError);
}

TEST_CASE("scenario files load with the stem as name") {
  const std::string path = "/tmp/ctsim_test_scenario_demo.json";
  {
    std::ofstream out(path, std::ios::binary);
    out << minimal_doc().dump(2) << "\n";
  }
  const ScenarioConfig sc = load_scenario(path);
  CHECK(sc.name == "ctsim_test_scenario_demo");
  std::remove(path.c_str());

  CHECK_THROWS_AS(load_scenario("/tmp/ctsim_does_not_exist.json"), ConfigError);
  {
    std::ofstream out(path, std::ios::binary);
    out << "{ not json";
  }
  const std::string m = thrown_message([&] { load_scenario(path); });
  CHECK(m.find("parse error") != std::string::npos);
  std::remove(path.c_str());
}

TEST_CASE("configuration hashing is canonical and sensitive") {
  json a;
  a["beta"] = 2;
  a["alpha"] = 1;
  json b;
  b["alpha"] = 1;
  b["beta"] = 2;
  const std::string ha = config_hash(a);
  CHECK(ha.size() == 16);
  CHECK(ha == config_hash(b));  // insertion order is canonicalized away
  json c = a;
  c["beta"] = 3;
  CHECK(config_hash(c) != ha);
  CHECK(config_hash(minimal_doc()) == config_hash(minimal_doc()));
}

} // TEST_SUITE

TEST_SUITE("io") {

TEST_CASE("float formatting round-trips through strtod") {
  for (double v : {0.0, 1.0, -1.0, 0.1, 2.0 / 3.0, 1e-300, 5e-324, 1.7976931348623157e308,
                   -2.5e17, 3.141592653589793, -0.4802651568489649}) {
    const std::string s = format_double(v);
    CHECK(std::strtod(s.c_str(), nullptr) == v);
    CHECK(s.find(',') == std::string::npos);
  }
}

TEST_CASE("CSV writing is deterministic and validates row width") {
  const std::vector<std::string> header{"t", "value"};
  const std::vector<std::vector<double>> rows{{0.0, 1.5}, {0.5, 0.25}, {1.0, 1.0 / 3.0}};
  write_csv("/tmp/ctsim_test_a.csv", header, rows);
  write_csv("/tmp/ctsim_test_b.csv", header, rows);
  const std::string a = slurp("/tmp/ctsim_test_a.csv");
  CHECK(a == slurp("/tmp/ctsim_test_b.csv"));
  CHECK(a.substr(0, 8) == "t,value\n");
  CHECK(std::count(a.begin(), a.end(), '\n') == 4);
  CHECK(a.find("0.33333333333333331") != std::string::npos);
  CHECK_THROWS_AS(write_csv("/tmp/ctsim_test_c.csv", header, {{1.0}}), ConfigError);
  std::remove("/tmp/ctsim_test_a.csv");
  std::remove("/tmp/ctsim_test_b.csv");
}

TEST_CASE("trajectory and series CSV have the expected shape") {
  const Grid g = make_grid(1, 64, 16.0);
  const HamiltonianSpec model = build_hamiltonian(ModelKind::scalar, 0.0, {});
  Schedule sched;
  sched.norm_stride = 2;
  const Trajectory traj =
      evolve(gaussian_packet(g, 1.0, {0, 0, 0}, {0, 0, 0}), model, 0.0, 0.5, 0.05, nullptr, sched);
  write_trajectory_csv("/tmp/ctsim_test_traj.csv", traj);
  const std::string body = slurp("/tmp/ctsim_test_traj.csv");
  CHECK(body.substr(0, body.find('\n')) == "t,l1,l2,linf,l2plusLinf");
  CHECK(static_cast<std::size_t>(std::count(body.begin(), body.end(), '\n')) ==
        traj.norms.size() + 1);
  std::remove("/tmp/ctsim_test_traj.csv");

  write_series_csv("/tmp/ctsim_test_series.csv", {0.0, 1.0}, {2.0, 3.0}, "witness");
  const std::string series = slurp("/tmp/ctsim_test_series.csv");
  CHECK(series.substr(0, series.find('\n')) == "t,witness");
  std::remove("/tmp/ctsim_test_series.csv");
  CHECK_THROWS_AS(write_series_csv("/tmp/ctsim_test_series.csv", {0.0}, {1.0, 2.0}, "w"),
                  ConfigError);

  // Two-component runs get suffixed columns.
  const HamiltonianSpec mm = build_hamiltonian(ModelKind::matrix, 1.0, {});
  const Trajectory tm = evolve(gaussian_packet(g, 1.0, {0, 0, 0}, {0, 0, 0}, 2, 0), mm, 0.0, 0.5,
                               0.05, nullptr, sched);
  write_trajectory_csv("/tmp/ctsim_test_traj2.csv", tm);
  const std::string body2 = slurp("/tmp/ctsim_test_traj2.csv");
  CHECK(body2.substr(0, body2.find('\n')) ==
        "t,l1_0,l2_0,linf_0,l2plusLinf_0,l1_1,l2_1,linf_1,l2plusLinf_1");
  std::remove("/tmp/ctsim_test_traj2.csv");
}

TEST_CASE("report serialization exposes the expected keys") {
  DecayReport rep;
  rep.kind = "Linf";
  rep.dim = 1;
  rep.t_a = 1;
  rep.t_b = 9;
  rep.exponent = -0.51;
  rep.theoretical = -0.5;
  rep.pass = true;
  const json jd = to_json(rep);
  CHECK(jd.at("kind") == "Linf");
  CHECK(jd.at("exponent") == -0.51);
  CHECK(jd.at("window") == json::array({1.0, 9.0}));
  CHECK(jd.at("pass") == true);

  SmoothingReport sm;
  sm.m_values = {2, 4};
  sm.values = {0.5, 0.1};
  sm.slope = -2.3;
  sm.slope_valid = true;
  const json js = to_json(sm);
  CHECK(js.at("M").size() == 2);
  CHECK(js.at("slope") == -2.3);

  CancellationReport ca;
  ca.max_ratio = 0.7;
  ca.vhat_l1 = 0.7;
  ca.per_s = {0.7, 0.7};
  const json jc = to_json(ca);
  CHECK(jc.at("max_ratio") == 0.7);
  CHECK(jc.at("per_s").size() == 2);

  ProjectionDecaySeries ps;
  ps.channel = 1;
  ps.rate = 0.5;
  const json jp = to_json(ps);
  CHECK(jp.at("channel") == 1);
  CHECK(jp.at("rate") == 0.5);

  const Grid g = make_grid(1, 64, 16.0);
  BoundStateBasis basis;
  basis.eigenvalues = {cplx(-0.5, 0.0)};
  basis.fields.push_back(gaussian_packet(g, 1.0, {0, 0, 0}, {0, 0, 0}));
  basis.duals = basis.fields;
  basis.generalized = {false};
  basis.self_adjoint = true;
  const json jb = to_json(basis);
  CHECK(jb.at("count") == 1);
  CHECK(jb.at("self_adjoint") == true);
  CHECK(jb.at("eigenvalues")[0].at("value").at("re") == -0.5);
}

TEST_CASE("saved reports parse back identically") {
  const json doc{{"alpha", 1}, {"nested", {{"x", 0.25}}}, {"list", {1, 2, 3}}};
  save_report(doc, "/tmp/ctsim_test_report.json");
  std::ifstream in("/tmp/ctsim_test_report.json");
  REQUIRE(in.good());
  const json back = json::parse(in);
  CHECK(back == doc);
  std::remove("/tmp/ctsim_test_report.json");
}

TEST_CASE("run manifest serializes phases and outputs") {
  RunManifest m;
  m.scenario_path = "scenarios/demo.json";
  m.hash = "0123456789abcdef";
  m.version = "1.2.3";
  m.phases = {{"evolve", 1.25}, {"reports", 0.5}};
  m.outputs = {"demo_norms.csv"};
  const json j = to_json(m);
  CHECK(j.at("scenario") == "scenarios/demo.json");
  CHECK(j.at("config_hash") == "0123456789abcdef");
  CHECK(j.at("version") == "1.2.3");
  REQUIRE(j.at("phases").size() == 2);
  CHECK(j.at("phases")[0].at("phase") == "evolve");
  CHECK(j.at("phases")[0].at("seconds") == 1.25);
  REQUIRE(j.at("outputs").size() == 1);
}

} // TEST_SUITE
