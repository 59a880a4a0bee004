#include "ctsim/propagate.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

#include "ctsim/errors.hpp"
#include "ctsim/fft.hpp"
#include "ctsim/multiplier.hpp"
#include "ctsim/norms.hpp"
#include "ctsim/transforms.hpp"

namespace ctsim {

Field free_evolve(const Field& f, double t, double mu) {
  return apply_multiplier(f, free_propagator_symbol(t, mu));
}

namespace {

// Potential data is resampled per step unless nothing in the model depends on
// time: no drift, no off-diagonal modulation, no non-constant envelope.
bool time_independent(const HamiltonianSpec& m) {
  for (const auto& p : m.potentials) {
    if (p.speed2() != 0) return false;
    if (m.kind == ModelKind::matrix && p.alpha != 0 && p.w_amplitude != 0) return false;
  }
  if (m.perturbation) {
    if (m.perturbation->envelope.type != EnvelopeSpec::Type::constant) return false;
    if (m.perturbation->profile.speed2() != 0) return false;
  }
  return true;
}

class Stepper {
public:
  Stepper(const HamiltonianSpec& model, const Grid& grid, int components, double dt)
      : model_(model), grid_(grid), components_(components), dt_(dt) {
    if (components != model.components())
      throw ConfigError("state component count does not match the model");
    const std::size_t n = grid.size();
    kin_half_.resize(components);
    for (int c = 0; c < components; ++c) {
      kin_half_[c].resize(n);
      const double sign = (c == 0) ? 1.0 : -1.0;
      for (std::size_t i = 0; i < n; ++i) {
        const auto xi = grid.frequency(i);
        const double k2 = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
        kin_half_[c][i] = std::polar(1.0, -sign * 0.5 * dt * (0.5 * k2 + model.mu));
      }
    }
    static_ = time_independent(model);
    if (static_) sample(0.0);
  }

  bool wraparound_warning() const { return warned_; }

  // One Strang step centered at t_mid covering signed duration dt_signed
  // (+dt forward, -dt backward); forcing only participates forward.
  void advance(Field& f, double t_mid, double dt_signed, const ForcingSpec* forcing) {
    kinetic_half(f, dt_signed < 0);
    if (forcing) kick(f, t_mid, 0.5 * dt_signed, *forcing);
    if (!static_) sample(t_mid);
    potential_phase(f, dt_signed);
    if (forcing) kick(f, t_mid, 0.5 * dt_signed, *forcing);
    kinetic_half(f, dt_signed < 0);
    if (f.has_nan())
      throw NumericalAbort("non-finite state detected during propagation", t_mid);
  }

private:
  void kinetic_half(Field& f, bool inverse) {
    const std::size_t n = grid_.size();
    for (int c = 0; c < components_; ++c) {
      cplx* data = f.comp(c).data();
      fft_forward(grid_, data);
      const cplx* ph = kin_half_[c].data();
      if (inverse) {
        for (std::size_t i = 0; i < n; ++i) data[i] *= std::conj(ph[i]);
      } else {
        for (std::size_t i = 0; i < n; ++i) data[i] *= ph[i];
      }
      fft_inverse(grid_, data);
    }
  }

  void kick(Field& f, double t_mid, double half_dt, const ForcingSpec& forcing) {
    const cplx a = cplx(0, -1) * half_dt * forcing.envelope.value(t_mid);
    axpy(a, forcing.profile, f);
  }

  void sample(double t) {
    if (model_.kind == ModelKind::scalar) {
      sample_scalar_into(model_, grid_, t, sbuf_);
      warned_ = warned_ || sbuf_.wraparound_warning;
    } else {
      sample_matrix_into(model_, grid_, t, mbuf_);
      warned_ = warned_ || mbuf_.wraparound_warning;
    }
  }

  void potential_phase(Field& f, double dt_signed) {
    const std::size_t n = grid_.size();
    if (model_.kind == ModelKind::scalar) {
      if (model_.is_free()) return;
      cplx* data = f.comp(0).data();
      const double* v = sbuf_.v.data();
      for (std::size_t i = 0; i < n; ++i) data[i] *= std::polar(1.0, -dt_signed * v[i]);
      return;
    }
    // exp(-i dt V) for traceless V = [[u, p], [-conj(p), -u]] with V^2 = (u^2-|p|^2) Id:
    //   cos(dt s) Id - i (sin(dt s)/s) V,  s = sqrt(u^2 - |p|^2),
    // continued through the hyperbolic branch when u^2 < |p|^2 and by series near 0.
    if (model_.potentials.empty() && !model_.perturbation) return;
    cplx* d0 = f.comp(0).data();
    cplx* d1 = f.comp(1).data();
    const double* u = mbuf_.u.data();
    const cplx* p = mbuf_.p12.data();
    const double dt = dt_signed;
    for (std::size_t i = 0; i < n; ++i) {
      const double s2 = u[i] * u[i] - std::norm(p[i]);
      const double z2 = dt * dt * s2;
      double c, fsin;  // cos(dt s) and sin(dt s)/s
      if (z2 > 1e-12) {
        const double s = std::sqrt(s2);
        c = std::cos(dt * s);
        fsin = std::sin(dt * s) / s;
      } else if (z2 < -1e-12) {
        const double m = std::sqrt(-s2);
        c = std::cosh(dt * m);
        fsin = std::sinh(dt * m) / m;
      } else {
        c = 1.0 - 0.5 * z2 + z2 * z2 / 24.0;
        fsin = dt * (1.0 - z2 / 6.0 + z2 * z2 / 120.0);
      }
      const cplx a = cplx(0, -1) * fsin;
      const cplx f0 = c * d0[i] + a * (u[i] * d0[i] + p[i] * d1[i]);
      const cplx f1 = c * d1[i] + a * (-std::conj(p[i]) * d0[i] - u[i] * d1[i]);
      d0[i] = f0;
      d1[i] = f1;
    }
  }

  const HamiltonianSpec& model_;
  Grid grid_;
  int components_;
  double dt_;
  bool static_ = false;
  bool warned_ = false;
  std::vector<std::vector<cplx>> kin_half_;
  ScalarSampleBuffers sbuf_;
  MatrixSampleBuffers mbuf_;
};

NormSample component_norms(const Field& f, int c, bool with_split) {
  Field one(f.grid, 1);
  const auto src = f.comp(c);
  std::copy(src.begin(), src.end(), one.comp(0).begin());
  NormSample s;
  s.l1 = norm_l1(one);
  s.l2 = norm_l2(one);
  s.linf = norm_linf(one);
  s.l2pluslinf = with_split ? norm_l2_plus_linf(one).value : 0.0;
  return s;
}

NormRow norm_row(const Field& f, double t, bool with_split) {
  NormRow row;
  row.t = t;
  for (int c = 0; c < f.components; ++c)
    row.comp.push_back(component_norms(f, c, with_split));
  return row;
}

long step_count(double t0, double t1, double dt) {
  if (dt <= 0) throw ConfigError("time step must be positive");
  if (t1 < t0) throw ConfigError("evolution requires t1 >= t0");
  const double raw = (t1 - t0) / dt;
  const long n = std::lround(raw);
  if (std::abs(raw - static_cast<double>(n)) > 1e-9 * std::max(1.0, raw))
    throw ConfigError("(t1 - t0) / dt must be an integer step count");
  return n;
}

} // namespace

Field step(const Field& state, const HamiltonianSpec& model, double t, double dt) {
  if (dt <= 0) throw ConfigError("time step must be positive");
  Stepper stepper(model, state.grid, state.components, dt);
  Field out = state;
  stepper.advance(out, t + 0.5 * dt, dt, nullptr);
  return out;
}

Trajectory evolve(const Field& state0, const HamiltonianSpec& model, double t0, double t1,
                  double dt, const ForcingSpec* forcing, const Schedule& schedule) {
  const long nsteps = step_count(t0, t1, dt);
  if (forcing && forcing->profile.grid != state0.grid)
    throw ConfigError("forcing profile grid does not match the state grid");

  Trajectory traj;
  traj.model = model;
  traj.dt = dt;
  traj.wraparound_warning = !wraparound_guard_ok(model, state0.grid, t1);

  Stepper stepper(model, state0.grid, state0.components, dt);
  Field state = state0;
  const bool with_split = !schedule.skip_split_norm;

  traj.times.push_back(t0);
  traj.states.push_back(state);
  if (schedule.norm_stride > 0) traj.norms.push_back(norm_row(state, t0, with_split));

  for (long k = 0; k < nsteps; ++k) {
    const double t = t0 + static_cast<double>(k) * dt;
    stepper.advance(state, t + 0.5 * dt, dt, forcing);
    const double tk = t0 + static_cast<double>(k + 1) * dt;
    const bool last = (k + 1 == nsteps);
    if (schedule.norm_stride > 0 && ((k + 1) % schedule.norm_stride == 0 || last))
      traj.norms.push_back(norm_row(state, tk, with_split));
    if (last || (schedule.state_stride > 0 && (k + 1) % schedule.state_stride == 0)) {
      traj.times.push_back(tk);
      traj.states.push_back(state);
    }
  }
  traj.wraparound_warning = traj.wraparound_warning || stepper.wraparound_warning();
  return traj;
}

Field evolve_backward(const Field& state, const HamiltonianSpec& model, double t1, double t0,
                      double dt) {
  const long nsteps = step_count(t0, t1, dt);
  Stepper stepper(model, state.grid, state.components, dt);
  Field out = state;
  for (long k = 0; k < nsteps; ++k) {
    const double t = t1 - static_cast<double>(k) * dt;  // stepping t -> t - dt
    stepper.advance(out, t - 0.5 * dt, -dt, nullptr);
  }
  return out;
}

namespace {

FrameParams channel_frame_params(const HamiltonianSpec& model, std::size_t j) {
  const auto& p = model.potentials.at(j);
  FrameParams fr;
  fr.velocity = p.velocity;
  if (model.kind == ModelKind::matrix) fr.modulation = ModulationParams{p.alpha, p.gamma};
  return fr;
}

} // namespace

WaveOperatorImage wave_operator_image(const Field& bound_state, double eigenvalue,
                                      const HamiltonianSpec& model, std::size_t channel_index,
                                      double T, double dt, double cauchy_threshold) {
  if (channel_index >= model.potentials.size())
    throw ConfigError("channel index out of range");
  HamiltonianSpec channel = model;
  channel.potentials = {model.potentials[channel_index]};
  channel.perturbation.reset();
  const FrameParams frame = channel_frame_params(model, channel_index);

  Schedule lean;
  lean.norm_stride = 0;
  lean.skip_split_norm = true;

  const Field start = from_frame(bound_state, frame, 0.0);
  Field chan_T = evolve(start, channel, 0.0, T, dt, nullptr, lean).final_state();
  Field chan_2T = evolve(chan_T, channel, T, 2.0 * T, dt, nullptr, lean).final_state();

  WaveOperatorImage out;
  out.v = evolve_backward(chan_T, model, T, 0.0, dt);
  Field v2 = evolve_backward(chan_2T, model, 2.0 * T, 0.0, dt);
  v2 -= out.v;
  out.cauchy_defect = norm_l2(v2);
  out.l1_norm = norm_l1(out.v);
  // Honesty metric: the split-step channel state against the analytic
  // transported phase e^{-i lambda T} of the eigenfield.
  Field analytic = bound_state;
  analytic *= std::polar(1.0, -eigenvalue * T);
  analytic = from_frame(analytic, frame, T);
  analytic -= chan_T;
  const double ref = norm_l2(bound_state);
  out.phase_defect = ref > 0 ? norm_l2(analytic) / ref : 0.0;
  out.converged = out.cauchy_defect <= cauchy_threshold;
  return out;
}

double verify_translaw(const Field& psi0, const HamiltonianSpec& model, double t, double dt) {
  if (model.kind != ModelKind::matrix || model.potentials.size() != 1)
    throw ConfigError("transformation-law check requires exactly one matrix potential");
  if (psi0.components != 2)
    throw ConfigError("transformation-law check requires a 2-component state");

  Schedule lean;
  lean.norm_stride = 0;
  lean.skip_split_norm = true;

  const Field direct = evolve(psi0, model, 0.0, t, dt, nullptr, lean).final_state();

  const auto& p = model.potentials[0];
  FrameParams frame;
  frame.velocity = p.velocity;
  frame.modulation = ModulationParams{p.alpha, p.gamma};

  const HamiltonianSpec frame_model = channel_frame(model, 0);
  Field phi = to_frame(psi0, frame, 0.0);
  phi = evolve(phi, frame_model, 0.0, t, dt, nullptr, lean).final_state();
  Field via_frame = from_frame(phi, frame, t);

  via_frame -= direct;
  const double ref = norm_l2(direct);
  return ref > 0 ? norm_l2(via_frame) / ref : norm_l2(via_frame);
}

} // namespace ctsim
