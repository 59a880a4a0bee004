#include "ctsim/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ctsim/errors.hpp"
#include "ctsim/fft.hpp"
#include "ctsim/multiplier.hpp"
#include "ctsim/norms.hpp"
#include "ctsim/rng.hpp"

namespace ctsim {

namespace {

double bracket_t(double t) { return std::sqrt(1.0 + t * t); }

bool static_model(const HamiltonianSpec& model) {
  for (const auto& p : model.potentials) {
    if (p.speed2() != 0) return false;
    if (model.kind == ModelKind::matrix && p.alpha != 0 && p.w_amplitude != 0) return false;
  }
  if (model.perturbation && model.perturbation->envelope.type != EnvelopeSpec::Type::constant)
    return false;
  return true;
}

long checked_steps(double span, double dt) {
  const long n = std::lround(span / dt);
  if (n <= 0 || std::abs(n * dt - span) > 1e-9 * std::max(1.0, std::abs(span)))
    throw ConfigError("time span is not an integral number of steps");
  return n;
}

void fit_log_log(const std::vector<double>& logt, const std::vector<double>& logv, double& slope,
                 double& intercept, double& residual) {
  const double n = static_cast<double>(logt.size());
  double st = 0, sv = 0, stt = 0, stv = 0;
  for (std::size_t i = 0; i < logt.size(); ++i) {
    st += logt[i];
    sv += logv[i];
    stt += logt[i] * logt[i];
    stv += logt[i] * logv[i];
  }
  const double den = n * stt - st * st;
  slope = den != 0 ? (n * stv - st * sv) / den : 0.0;
  intercept = (sv - slope * st) / n;
  double ss = 0;
  for (std::size_t i = 0; i < logt.size(); ++i) {
    const double e = logv[i] - (intercept + slope * logt[i]);
    ss += e * e;
  }
  residual = std::sqrt(ss / n);
}

Field pointwise_scale(const Field& f, const std::vector<double>& weight) {
  Field out = f;
  const std::size_t n = f.grid.size();
  for (int c = 0; c < f.components; ++c)
    for (std::size_t i = 0; i < n; ++i) out.at(c, i) *= weight[i];
  return out;
}

std::vector<double> exp_weight(const Grid& g, double eps) {
  std::vector<double> w(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto x = g.point(i);
    double r2 = 0;
    for (int d = 0; d < g.dim; ++d) r2 += x[d] * x[d];
    w[i] = std::exp(-eps * std::sqrt(1.0 + r2));
  }
  return w;
}

double vhat_l1_discrete(const Field& potential) {
  const Grid& g = potential.grid;
  std::vector<cplx> buf(g.size());
  std::copy(potential.comp(0).begin(), potential.comp(0).end(), buf.begin());
  fft_forward(g, buf.data());
  double acc = 0;
  for (const auto& v : buf) acc += std::abs(v);
  return acc / static_cast<double>(g.size());
}

Schedule lean_schedule() {
  Schedule s;
  s.norm_stride = 0;
  s.skip_split_norm = true;
  return s;
}

// All multi-index spectral derivatives of order k (k <= 2) of every component.
std::vector<Field> derivatives_of_order(const Field& f, int k) {
  std::vector<Field> out;
  if (k == 0) {
    out.push_back(f);
    return out;
  }
  for (int a = 0; a < f.grid.dim; ++a) {
    const Field da = apply_multiplier(f, derivative_symbol(f.grid, a));
    if (k == 1) {
      out.push_back(da);
    } else {
      for (int b = a; b < f.grid.dim; ++b)
        out.push_back(apply_multiplier(da, derivative_symbol(f.grid, b)));
    }
  }
  return out;
}

double graded_sum(const Field& f, int s) {
  double acc = 0;
  for (int k = 0; k <= s; ++k)
    for (const auto& d : derivatives_of_order(f, k)) acc += norm_l2_plus_linf(d).value;
  return acc;
}

MultiplierSymbol bessel_symbol(int s) {
  MultiplierSymbol sym;
  sym.tag = SymbolTag::generic;
  const double half_s = 0.5 * s;
  sym.rule = [half_s](const std::array<double, 3>& xi, int) {
    const double q = 1.0 + xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
    return cplx(std::pow(q, half_s), 0.0);
  };
  return sym;
}

} // namespace

DecayReport decay_fit(const std::vector<double>& times, const std::vector<double>& values,
                      double t_a, double t_b, double theoretical, double tol_exponent) {
  if (times.size() != values.size()) throw ConfigError("series and times differ in length");
  DecayReport rep;
  rep.kind = "series";
  rep.t_a = t_a;
  rep.t_b = t_b;
  rep.theoretical = theoretical;
  std::vector<double> wt, wv;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] < t_a || times[i] > t_b) continue;
    if (values[i] <= 0) throw ConfigError("nonpositive sample inside the fit window");
    wt.push_back(times[i]);
    wv.push_back(values[i]);
    rep.times.push_back(times[i]);
    rep.values.push_back(values[i]);
    rep.sup_value = std::max(rep.sup_value, values[i]);
  }
  if (wt.size() < 8) throw ConfigError("fit window must contain at least 8 samples");
  const double floor = 1e-9 * wv.front();
  std::vector<double> lt, lv;
  for (std::size_t i = 0; i < wt.size(); ++i) {
    if (wv[i] <= floor) continue;
    lt.push_back(std::log(bracket_t(wt[i])));
    lv.push_back(std::log(wv[i]));
  }
  if (lt.size() < 2) {
    rep.degenerate = true;
    return rep;
  }
  fit_log_log(lt, lv, rep.exponent, rep.log_c, rep.residual);
  rep.pass = std::abs(rep.exponent - theoretical) <= tol_exponent;
  return rep;
}

SmoothingReport kato_smoothing(const HamiltonianSpec& model, const Field& f, double T, double R,
                               const std::vector<double>& m_list, double dt) {
  if (model.kind != ModelKind::scalar)
    throw ConfigError("smoothing quadrature expects a scalar model");
  if (!static_model(model)) throw ConfigError("smoothing quadrature expects a static model");
  if (2.0 * R > f.grid.length) throw ConfigError("restriction ball exceeds the box");
  if (m_list.empty()) throw ConfigError("empty threshold list");
  const long steps = checked_steps(T, dt);

  SmoothingReport rep;
  rep.m_values = m_list;
  rep.T = T;
  rep.R = R;
  rep.values.assign(m_list.size(), 0.0);

  Field state = f;
  for (long k = 0; k <= steps; ++k) {
    const double w = (k == 0 || k == steps) ? 0.5 * dt : dt;
    for (std::size_t m = 0; m < m_list.size(); ++m) {
      const Field high = apply_multiplier(state, sharp_cutoff(m_list[m], true));
      rep.values[m] += w * norm_l2_ball(high, R);
    }
    if (k < steps) state = step(state, model, k * dt, dt);
  }

  std::vector<double> lm, lv;
  for (std::size_t m = 0; m < m_list.size(); ++m)
    if (rep.values[m] > 0) {
      lm.push_back(std::log(m_list[m]));
      lv.push_back(std::log(rep.values[m]));
    }
  if (lm.size() >= 3) {
    double c, r;
    fit_log_log(lm, lv, rep.slope, c, r);
    rep.slope_valid = true;
  }
  return rep;
}

double low_velocity_probe(const HamiltonianSpec& model1, const Projector& p_c,
                          const ChannelCutoffs& cutoffs, double M, double a_window, double t,
                          const std::vector<Field>& samples, double dt, int s_count) {
  if (!static_model(model1)) throw ConfigError("probe expects the static channel operator");
  if (std::abs(cutoffs.t - t) > 1e-12) throw ConfigError("cutoffs were built at a different time");
  if (a_window <= 0 || a_window > t) throw ConfigError("window must satisfy 0 < A <= t");
  if (s_count < 2) throw ConfigError("need at least two window samples");

  const Schedule lean = lean_schedule();
  double worst = 0;
  for (const auto& g : samples) {
    const double gnorm = norm_l2(g);
    if (gnorm < 1e-14) continue;
    Field state = p_c(apply_multiplier(g, sharp_cutoff(M, false)));
    double tau_prev = 0;
    for (int i = 0; i < s_count; ++i) {
      const double tau = a_window * static_cast<double>(i) / (s_count - 1);
      if (tau > tau_prev) {
        state = evolve(state, model1, tau_prev, tau, dt, nullptr, lean).final_state();
        tau_prev = tau;
      }
      Field cut = state;
      for (int c = 0; c < cut.components; ++c)
        for (std::size_t idx = 0; idx < cut.grid.size(); ++idx)
          cut.at(c, idx) *= cutoffs.chi1.at(0, idx).real();
      worst = std::max(worst, norm_l2(cut) / gnorm);
    }
  }
  return worst;
}

CancellationReport cancellation_probe(const Field& potential, const std::vector<double>& s_list,
                                      double p, const std::vector<Field>& samples) {
  const bool linf_case = std::isinf(p);
  if (!linf_case && p != 1.0) throw ConfigError("probe supports p = 1 or p = inf");
  if (potential.components != 1) throw ConfigError("potential must be a 1-component field");

  CancellationReport rep;
  rep.vhat_l1 = vhat_l1_discrete(potential);
  const std::size_t n = potential.grid.size();
  for (double s : s_list) {
    double best = 0;
    for (const auto& f : samples) {
      const double fn = linf_case ? norm_linf(f) : norm_l1(f);
      if (fn < 1e-300) continue;
      Field g = free_evolve(f, -s);
      for (int c = 0; c < g.components; ++c)
        for (std::size_t i = 0; i < n; ++i) g.at(c, i) *= potential.at(0, i);
      const Field out = free_evolve(g, s);
      const double on = linf_case ? norm_linf(out) : norm_l1(out);
      best = std::max(best, on / fn);
    }
    rep.per_s.push_back(best);
    rep.max_ratio = std::max(rep.max_ratio, best);
  }
  return rep;
}

DecayReport local_l2_decay(const HamiltonianSpec& model, const Projector& p_c, double eps,
                           const Field& f, const std::vector<double>& times, double dt) {
  if (model.kind != ModelKind::matrix)
    throw ConfigError("local decay series expects the 2-component model");
  if (!static_model(model)) throw ConfigError("local decay series expects a static operator");
  if (eps < 0) throw ConfigError("weight rate must be nonnegative");
  double eps0 = std::numeric_limits<double>::infinity();
  for (const auto& p : model.potentials) eps0 = std::min(eps0, p.decay_rate());
  if (eps > 0 && eps >= eps0)
    throw ConfigError("weight rate must stay below the potential decay rate");
  if (times.size() < 8) throw ConfigError("need at least 8 sample times");

  std::vector<double> ts = times;
  std::sort(ts.begin(), ts.end());
  if (ts.front() < 0) throw ConfigError("sample times must be nonnegative");

  const auto w = exp_weight(f.grid, eps);
  Field state = p_c(pointwise_scale(f, w));
  const double scale = norm_l2(f);
  const Schedule lean = lean_schedule();

  DecayReport rep;
  rep.kind = "weighted-L2";
  rep.dim = f.grid.dim;
  double prev = 0;
  bool vanished = false;
  for (double t : ts) {
    if (t > prev) {
      state = evolve(state, model, prev, t, dt, nullptr, lean).final_state();
      prev = t;
    }
    const double val = norm_l2(pointwise_scale(state, w));
    rep.times.push_back(t);
    rep.values.push_back(val);
    rep.sup_value = std::max(rep.sup_value, val);
    vanished = vanished || val <= 1e-13 * std::max(scale, 1.0);
  }
  rep.theoretical = -0.5 * f.grid.dim;
  rep.t_a = ts.front();
  rep.t_b = ts.back();
  if (vanished) {
    rep.degenerate = true;
    return rep;
  }
  DecayReport fit = decay_fit(rep.times, rep.values, rep.t_a, rep.t_b, rep.theoretical, 0.1);
  rep.exponent = fit.exponent;
  rep.log_c = fit.log_c;
  rep.residual = fit.residual;
  rep.degenerate = fit.degenerate;
  rep.pass = fit.exponent <= rep.theoretical + 0.1 && !fit.degenerate;
  return rep;
}

double triple_norm_F(const ForcingSpec& forcing, double T, double dt) {
  const long steps = checked_steps(T, dt);
  const double l1 = norm_l1(forcing.profile);
  const double l2 = norm_l2(forcing.profile);
  const double half_power = 0.5 * forcing.profile.grid.dim + 1.0;
  double integral = 0;
  double sup = 0;
  double env_prev = std::abs(forcing.envelope.value(0.0));
  for (long k = 0; k <= steps; ++k) {
    const double t = k * dt;
    const double env = std::abs(forcing.envelope.value(t));
    if (k > 0) integral += 0.5 * dt * (env_prev + env) * l1;
    env_prev = env;
    sup = std::max(sup, integral + std::pow(bracket_t(t), half_power) * env * l2);
  }
  return sup;
}

DecayReport inhom_decay_check(const Trajectory& trajectory, const ForcingSpec* forcing,
                              const std::vector<ProjectionDecaySeries>& projection_series) {
  if (trajectory.norms.size() < 8) throw ConfigError("trajectory must record at least 8 norm rows");
  if (trajectory.states.empty()) throw ConfigError("trajectory must store the initial state");
  const int dim = trajectory.states.front().grid.dim;
  const double halfn = 0.5 * dim;

  bool any_split = false;
  for (const auto& row : trajectory.norms)
    for (const auto& c : row.comp) any_split = any_split || c.l2pluslinf > 0;
  if (!any_split) throw ConfigError("trajectory lacks the split-norm column");

  const Field& psi0 = trajectory.states.front();
  const double datum = norm_l1_cap_l2(psi0);
  const double span = trajectory.norms.back().t - trajectory.norms.front().t;
  const double tripf = forcing ? triple_norm_F(*forcing, span, trajectory.dt) : 0.0;

  double B = 0;
  for (const auto& s : projection_series)
    for (std::size_t k = 0; k < s.times.size(); ++k)
      B = std::max(B, std::pow(bracket_t(s.times[k]), halfn) * s.values[k]);

  const double denom = datum + tripf + B;
  if (denom <= 0) throw ConfigError("degenerate denominator (zero datum, forcing, and bound part)");

  DecayReport rep;
  rep.kind = "inhomogeneous-ratio";
  rep.dim = dim;
  rep.theoretical = 0.0;
  for (const auto& row : trajectory.norms) {
    double split = 0;
    for (const auto& c : row.comp) split += c.l2pluslinf;
    const double r = std::pow(bracket_t(row.t), halfn) * split / denom;
    rep.times.push_back(row.t);
    rep.values.push_back(r);
    rep.sup_value = std::max(rep.sup_value, r);
  }
  rep.t_a = rep.times.front();
  rep.t_b = rep.times.back();
  DecayReport fit = decay_fit(rep.times, rep.values, rep.t_a, rep.t_b, 0.0, 0.25);
  rep.exponent = fit.exponent;
  rep.log_c = fit.log_c;
  rep.residual = fit.residual;
  rep.pass = rep.exponent <= 0.1;
  return rep;
}

double sobolev_norms(const Trajectory& trajectory, int s) {
  if (s < 0 || s > 2) throw ConfigError("graded norms support s in {0, 1, 2}");
  if (trajectory.states.empty()) throw ConfigError("trajectory must store states");
  const int dim = trajectory.states.front().grid.dim;
  const double halfn = 0.5 * dim;
  const MultiplierSymbol bessel = bessel_symbol(s);
  double sup = 0;
  for (std::size_t k = 0; k < trajectory.states.size(); ++k) {
    const Field& psi = trajectory.states[k];
    const double hs = norm_l2(apply_multiplier(psi, bessel));
    const double graded = graded_sum(psi, s);
    sup = std::max(sup, hs + std::pow(bracket_t(trajectory.times[k]), halfn) * graded);
  }
  return sup;
}

double sobolev_norms_forcing(const ForcingSpec& forcing, const Grid& grid, double T, double dt,
                             int s) {
  if (s < 0 || s > 2) throw ConfigError("graded norms support s in {0, 1, 2}");
  if (!(forcing.profile.grid == grid)) throw ConfigError("forcing profile grid mismatch");
  const long steps = checked_steps(T, dt);
  const double halfn = 0.5 * grid.dim + 1.0;
  const double hs = norm_l2(apply_multiplier(forcing.profile, bessel_symbol(s)));
  const double graded = graded_sum(forcing.profile, s);
  double sup = 0;
  for (long k = 0; k <= steps; ++k) {
    const double t = k * dt;
    const double env = std::abs(forcing.envelope.value(t));
    sup = std::max(sup, env * hs + std::pow(bracket_t(t), halfn) * env * graded);
  }
  return sup;
}

LinfDecayReport linf_decay_check(const Trajectory& trajectory, double window_skip,
                                 double tol_exponent) {
  if (trajectory.model.kind != ModelKind::scalar)
    throw ConfigError("supremum-norm conversion applies to scalar runs");
  if (trajectory.norms.size() < 8) throw ConfigError("trajectory must record at least 8 norm rows");

  std::vector<double> times, values;
  int dim = 1;
  if (!trajectory.states.empty()) dim = trajectory.states.front().grid.dim;
  for (const auto& row : trajectory.norms) {
    times.push_back(row.t);
    values.push_back(row.comp.at(0).linf);
  }
  const double t_a = std::max(window_skip, times.front());
  const double t_b = times.back();

  LinfDecayReport rep;
  rep.fit = decay_fit(times, values, t_a, t_b, -0.5 * dim, tol_exponent);
  rep.fit.kind = "Linf";
  rep.fit.dim = dim;
  rep.decaying = rep.fit.exponent <= rep.fit.theoretical + tol_exponent;

  if (!trajectory.states.empty() && !trajectory.model.is_free()) {
    const Grid& g = trajectory.states.front().grid;
    for (double t : trajectory.times) {
      const Field v = sample_scalar_potential(trajectory.model, g, t).field;
      rep.vhat_l1_sup = std::max(rep.vhat_l1_sup, vhat_l1_discrete(v));
    }
  }
  return rep;
}

std::vector<Field> probe_fields(const Grid& grid, int components, int count,
                                unsigned long long seed) {
  if (count <= 0) throw ConfigError("probe count must be positive");
  std::vector<Field> out;
  const double L = grid.length;
  std::array<double, 3> origin{0, 0, 0};
  std::array<double, 3> off{L / 8.0, 0, 0};
  std::array<double, 3> zerok{0, 0, 0};
  std::array<double, 3> onek{grid.freq_step(), 0, 0};
  std::array<double, 3> lattice2{2.0 * grid.freq_step(), 0, 0};

  out.push_back(gaussian_packet(grid, L / 16.0, origin, zerok, components, 0));
  if (static_cast<int>(out.size()) < count)
    out.push_back(gaussian_packet(grid, L / 20.0, off, lattice2, components,
                                  components > 1 ? 1 : 0));
  if (static_cast<int>(out.size()) < count) out.push_back(plane_wave(grid, onek, components, 0));
  if (static_cast<int>(out.size()) < count)
    out.push_back(plane_wave(grid, lattice2, components, components > 1 ? 1 : 0));

  CounterRng rng(seed, 11);
  while (static_cast<int>(out.size()) < count)
    out.push_back(random_bandlimited_field(grid, components, 0.5, rng));
  out.resize(static_cast<std::size_t>(count), Field(grid, components));
  for (auto& f : out) {
    const double n = norm_l2(f);
    if (n > 0) f *= cplx(1.0 / n, 0.0);
  }
  return out;
}

} // namespace ctsim
