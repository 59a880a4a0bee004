#pragma once

#include <optional>
#include <vector>

#include "ctsim/field.hpp"
#include "ctsim/potential.hpp"

namespace ctsim {

// Exact free flow over time t: e^{-it(|xi|^2/2 + mu)} on component 0 and the
// opposite sign on component 1 (2-component kinetic diag(-Lap/2 + mu, +Lap/2 - mu)).
Field free_evolve(const Field& f, double t, double mu = 0.0);

// Source term F(t,x) = envelope(t) * profile(x).
struct ForcingSpec {
  Field profile;
  EnvelopeSpec envelope;
};

// Per-component norm samples recorded along a run.
struct NormSample {
  double l1 = 0, l2 = 0, linf = 0, l2pluslinf = 0;
};
struct NormRow {
  double t = 0;
  std::vector<NormSample> comp;
};

// What evolve() retains. stride 0 keeps endpoints only.
struct Schedule {
  long norm_stride = 1;
  long state_stride = 0;
  bool skip_split_norm = false;  // omit the (costly) L2+Linf column when unused
};

struct Trajectory {
  HamiltonianSpec model;
  double dt = 0;
  std::vector<double> times;   // stored-state times, strictly increasing
  std::vector<Field> states;   // matching `times`
  std::vector<NormRow> norms;
  bool wraparound_warning = false;

  const Field& final_state() const { return states.back(); }
  double final_time() const { return times.back(); }
};

// One Strang step t -> t + dt: half kinetic, full potential phase at t + dt/2
// (pointwise e^{-i dt V} for scalar, closed-form traceless 2x2 exponential for
// matrix), half kinetic. Aborts on NaN with the offending time.
Field step(const Field& state, const HamiltonianSpec& model, double t, double dt);

// Repeated Strang steps from t0 to t1 ((t1-t0)/dt must be integral). Forcing is
// added per step as -i*dt*F(t_mid) split evenly around the potential phase.
Trajectory evolve(const Field& state0, const HamiltonianSpec& model, double t0, double t1,
                  double dt, const ForcingSpec* forcing = nullptr, const Schedule& schedule = {});

// Reverse evolution t1 -> t0 using inverse sub-steps at the same midpoint times;
// exact inverse of evolve at equal dt (up to roundoff), O(dt^2) across dt changes.
Field evolve_backward(const Field& state, const HamiltonianSpec& model, double t1, double t0,
                      double dt);

// v ~= U(T)^{-1} [channel-j flow at time T applied to the boosted bound state].
// The channel flow is realized by split-step on the single-potential channel
// model at the same dt, so a model that equals its own channel inverts exactly.
struct WaveOperatorImage {
  Field v;
  double cauchy_defect = 0;  // ||v_T - v_{2T}||_2, self-convergence across T, 2T
  double l1_norm = 0;        // discrete L1 norm of v_T
  double phase_defect = 0;   // |<channel state at T, transported e^{-i lambda T} u>| gap
  bool converged = true;
};
WaveOperatorImage wave_operator_image(const Field& bound_state, double eigenvalue,
                                      const HamiltonianSpec& model, std::size_t channel_index,
                                      double T, double dt, double cauchy_threshold = 1e-3);

// Two-path transformation-law check for a single moving modulated matrix
// potential: (a) split-step on the moving system; (b) boost+modulate, split-step
// on the static operator (kinetic shift alpha^2/2), transform back. Returns the
// relative L2 discrepancy at time t.
double verify_translaw(const Field& psi0, const HamiltonianSpec& model, double t, double dt);

} // namespace ctsim
