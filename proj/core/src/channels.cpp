#include "ctsim/channels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ctsim/errors.hpp"
#include "ctsim/norms.hpp"

namespace ctsim {

namespace {

double wrap_delta(double d, double L) { return d - L * std::round(d / L); }

// Least squares of log(v) = c - rate * t over the given samples.
void fit_log_linear(const std::vector<double>& t, const std::vector<double>& logv, double& rate,
                    double& c, double& residual) {
  const std::size_t n = t.size();
  double st = 0, sv = 0, stt = 0, stv = 0;
  for (std::size_t i = 0; i < n; ++i) {
    st += t[i];
    sv += logv[i];
    stt += t[i] * t[i];
    stv += t[i] * logv[i];
  }
  const double den = n * stt - st * st;
  const double slope = den != 0 ? (n * stv - st * sv) / den : 0.0;
  c = (sv - slope * st) / static_cast<double>(n);
  rate = -slope;
  double ss = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = logv[i] - (c + slope * t[i]);
    ss += e * e;
  }
  residual = std::sqrt(ss / static_cast<double>(n));
}

// Coefficient of mode r in the frame field f (coordinates of the oblique
// projection onto the bound basis).
cplx mode_coordinate(const ProjectionBasis& pb, std::size_t r, const Field& f) {
  const std::size_t nl = pb.nl();
  cplx acc(0, 0);
  for (std::size_t i = 0; i < nl; ++i) acc += pb.coeff[r * nl + i] * inner(f, pb.left[i]);
  return acc;
}

} // namespace

double cutoff_profile(double r, double delta, double t) {
  const double r1 = delta * t;
  const double r2 = 2.0 * delta * t;
  if (r <= r1) return 1.0;
  if (r >= r2) return 0.0;
  const double u = (r - r1) / (r2 - r1);
  const double s = u * u * u * (10.0 + u * (-15.0 + 6.0 * u));
  return 1.0 - s;
}

ChannelCutoffs channel_cutoffs(const Grid& grid, double t, double delta,
                               const std::vector<std::array<double, 3>>& velocities,
                               double t0) {
  if (delta <= 0) throw ConfigError("cutoff width delta must be positive");
  if (t < t0 || t <= 0) throw ConfigError("cutoffs are undefined below the threshold time");
  if (velocities.size() < 2) throw ConfigError("channel cutoffs need two channel velocities");

  ChannelCutoffs out;
  out.delta = delta;
  out.t = t;
  out.t0 = t0;
  out.chi1 = Field(grid, 1);
  out.chi2 = Field(grid, 1);
  out.chi3 = Field(grid, 1);
  const double L = grid.length;
  double min_chi3 = 1.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto x = grid.point(i);
    double r1sq = 0, r2sq = 0;
    for (int d = 0; d < grid.dim; ++d) {
      const double d1 = wrap_delta(x[d] - t * velocities[0][d], L);
      const double d2 = wrap_delta(x[d] - t * velocities[1][d], L);
      r1sq += d1 * d1;
      r2sq += d2 * d2;
    }
    const double c1 = cutoff_profile(std::sqrt(r1sq), delta, t);
    const double c2 = cutoff_profile(std::sqrt(r2sq), delta, t);
    const double c3 = 1.0 - c1 - c2;
    out.chi1.at(0, i) = c1;
    out.chi2.at(0, i) = c2;
    out.chi3.at(0, i) = c3;
    min_chi3 = std::min(min_chi3, c3);
  }
  out.overlap_warning = min_chi3 < -1e-12;
  return out;
}

Channel make_channel(const HamiltonianSpec& model, int index, const BoundStateBasis& bound) {
  if (index < 0 || static_cast<std::size_t>(index) >= model.potentials.size())
    throw ConfigError("channel index out of range");
  Channel ch;
  ch.index = index;
  const auto& p = model.potentials[static_cast<std::size_t>(index)];
  ch.frame.velocity = p.velocity;
  if (model.kind == ModelKind::matrix) ch.frame.modulation = ModulationParams{p.alpha, p.gamma};
  ch.bound = bound;
  ch.projection = build_projections(bound).first.basis;
  return ch;
}

Channel make_channel(const HamiltonianSpec& model, int index, const Grid& grid) {
  const HamiltonianSpec frame_model = channel_frame(model, index);
  BoundStateBasis bound;
  if (model.kind == ModelKind::scalar) {
    Field v = sample_scalar_potential(frame_model, grid, 0.0).field;
    if (frame_model.mu != 0)
      for (std::size_t i = 0; i < grid.size(); ++i) v.at(0, i) += frame_model.mu;
    if (grid.dim == 1 && grid.size() <= 4096)
      bound = scalar_spectrum_dense(v, 1e-8);
    else
      bound = bound_states_scalar(v, 8, 1e-7);
  } else {
    bound = matrix_spectrum_dense(frame_model, grid, 1e-6);
    bound = generalized_kernel(frame_model, grid, std::move(bound), 1e-8);
  }
  return make_channel(model, index, bound);
}

std::vector<ProjectionDecaySeries> projection_decay_series(const Trajectory& trajectory,
                                                           const std::vector<Channel>& channels) {
  if (channels.empty()) throw ConfigError("projection series need at least one channel");
  for (const auto& ch : channels)
    if (ch.projection.nr() == 0)
      throw ConfigError("projection series reject an empty channel basis");
  if (trajectory.states.size() < 2)
    throw ConfigError("trajectory must store states along the run");

  std::vector<ProjectionDecaySeries> out;
  for (const auto& ch : channels) {
    ProjectionDecaySeries s;
    s.channel = ch.index;
    s.times = trajectory.times;
    for (std::size_t k = 0; k < trajectory.states.size(); ++k) {
      const Field proj = moving_projection(ch.projection, ch.frame, trajectory.times[k],
                                           trajectory.states[k]);
      s.values.push_back(norm_l2(proj));
    }
    const double floor = 1e-9 * s.values.front();
    std::vector<double> ft, fv;
    for (std::size_t k = 0; k < s.values.size(); ++k)
      if (s.values[k] > 10.0 * floor && s.values[k] > 0) {
        ft.push_back(s.times[k]);
        fv.push_back(std::log(s.values[k]));
      }
    if (ft.size() < 2) {
      s.degenerate = true;
    } else {
      fit_log_linear(ft, fv, s.rate, s.log_c, s.residual);
    }
    out.push_back(std::move(s));
  }
  return out;
}

CompletenessReport asymptotic_decomposition(const Field& psi0, const HamiltonianSpec& model,
                                            const std::vector<Channel>& channels, double T,
                                            double dt) {
  if (T <= 0 || dt <= 0) throw ConfigError("decomposition needs positive T and dt");
  if (psi0.components != model.components())
    throw ConfigError("datum component count does not match the model");

  const long n_steps = std::lround(T / dt);
  Schedule sched;
  sched.norm_stride = 0;
  sched.state_stride = std::max<long>(1, n_steps / 64);
  sched.skip_split_norm = true;

  const Trajectory traj = evolve(psi0, model, 0.0, T, dt, nullptr, sched);
  const double psi_scale = norm_l2(psi0);

  CompletenessReport rep;
  rep.phi = psi0;

  // Coefficient series a_r(t) = e^{i lambda_r t} <frame state, mode r>.
  struct ModeRef {
    const Channel* ch;
    std::size_t mode;
  };
  std::vector<ModeRef> modes;
  for (const auto& ch : channels)
    for (std::size_t r = 0; r < ch.bound.size(); ++r) modes.push_back({&ch, r});

  std::vector<std::vector<cplx>> series(modes.size());
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    const double t = traj.times[k];
    for (const auto& ch : channels) {
      const Field f = to_frame(traj.states[k], ch.frame, t);
      for (std::size_t m = 0; m < modes.size(); ++m) {
        if (modes[m].ch != &ch) continue;
        const cplx lam = ch.bound.eigenvalues[modes[m].mode];
        const cplx coord = mode_coordinate(ch.projection, modes[m].mode, f);
        series[m].push_back(std::exp(cplx(0, 1) * lam * t) * coord);
      }
    }
  }

  rep.stabilized = true;
  for (std::size_t m = 0; m < modes.size(); ++m) {
    ChannelCoefficient cc;
    cc.channel = modes[m].ch->index;
    cc.mode = static_cast<int>(modes[m].mode);
    cc.value = series[m].back();
    const double denom = std::max(std::abs(cc.value), 0.02 * psi_scale);
    double wander = 0;
    for (std::size_t k = 0; k < series[m].size(); ++k)
      if (traj.times[k] >= 0.75 * T) wander = std::max(wander, std::abs(series[m][k] - cc.value));
    cc.drift = denom > 0 ? wander / denom : 0.0;
    cc.stabilized = cc.drift <= 0.05;
    rep.stabilized = rep.stabilized && cc.stabilized;
    rep.coefficients.push_back(cc);
  }

  // Wave-operator images and the remainder datum phi.
  for (std::size_t m = 0; m < modes.size(); ++m) {
    const Channel& ch = *modes[m].ch;
    const cplx lam = ch.bound.eigenvalues[modes[m].mode];
    WaveOperatorImage img =
        wave_operator_image(ch.bound.fields[modes[m].mode], lam.real(), model,
                            static_cast<std::size_t>(ch.index), T, dt);
    axpy(-rep.coefficients[m].value, img.v, rep.phi);
    rep.images.push_back(std::move(img));
  }

  // Free datum from the evolved remainder, with its own stabilization check.
  const Trajectory traj_phi = evolve(rep.phi, model, 0.0, T, dt, nullptr, sched);
  rep.phi0 = free_evolve(traj_phi.final_state(), -T, model.mu);
  std::size_t kq = 0;
  for (std::size_t k = 0; k < traj_phi.times.size(); ++k)
    if (traj_phi.times[k] >= 0.75 * T) {
      kq = k;
      break;
    }
  Field phi0_q = free_evolve(traj_phi.states[kq], -traj_phi.times[kq], model.mu);
  phi0_q -= rep.phi0;
  rep.phi_drift = norm_l2(phi0_q) / std::max(norm_l2(rep.phi0), 0.02 * psi_scale);
  rep.stabilized = rep.stabilized && rep.phi_drift <= 0.05;

  // Remainder series || psi(t) - sum A_r e^{-i lam t} u_r(t) - free(t) phi0 ||_2.
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    const double t = traj.times[k];
    Field acc = traj.states[k];
    for (std::size_t m = 0; m < modes.size(); ++m) {
      const Channel& ch = *modes[m].ch;
      const cplx lam = ch.bound.eigenvalues[modes[m].mode];
      const Field g = from_frame(ch.bound.fields[modes[m].mode], ch.frame, t);
      axpy(-rep.coefficients[m].value * std::exp(cplx(0, -1) * lam * t), g, acc);
    }
    acc -= free_evolve(rep.phi0, t, model.mu);
    rep.times.push_back(t);
    rep.remainder.push_back(norm_l2(acc));
  }
  return rep;
}

Field scattering_state(const Field& psi0, const HamiltonianSpec& model,
                       const std::vector<Channel>& channels, double T, double dt,
                       std::vector<ChannelCoefficient>* coefficients) {
  CompletenessReport rep = asymptotic_decomposition(psi0, model, channels, T, dt);
  for (const auto& img : rep.images)
    if (!img.converged)
      throw SolverError("wave-operator image did not converge; increase the horizon T",
                        img.cauchy_defect);
  if (!rep.stabilized) {
    double worst = rep.phi_drift;
    for (const auto& c : rep.coefficients) worst = std::max(worst, c.drift);
    throw SolverError("channel coefficients did not stabilize; increase the horizon T", worst);
  }
  if (coefficients) *coefficients = rep.coefficients;
  return rep.phi;
}

} // namespace ctsim
