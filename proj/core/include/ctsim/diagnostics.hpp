#pragma once

#include <string>
#include <vector>

#include "ctsim/channels.hpp"
#include "ctsim/field.hpp"
#include "ctsim/potential.hpp"
#include "ctsim/propagate.hpp"
#include "ctsim/spectral.hpp"

namespace ctsim {

// Power-law fit of a norm series against <t> = sqrt(1 + t^2).
struct DecayReport {
  std::string kind;
  int dim = 1;
  double t_a = 0, t_b = 0;
  double exponent = 0;
  double log_c = 0;
  double residual = 0;
  double theoretical = 0;
  double sup_value = 0;
  bool pass = false;
  bool degenerate = false;
  std::vector<double> times;
  std::vector<double> values;
};

// Least squares of log(value) on log<t> over the window [t_a, t_b]; values
// below 1e-9 * (first in-window value) are excluded as roundoff floor.
DecayReport decay_fit(const std::vector<double>& times, const std::vector<double>& values,
                      double t_a, double t_b, double theoretical, double tol_exponent = 0.1);

// Time integral of the ball-restricted norm of the high-pass evolved state,
// per frequency threshold M, with the log-log slope across the M list.
struct SmoothingReport {
  std::vector<double> m_values;
  std::vector<double> values;
  double T = 0;
  double R = 0;
  double slope = 0;
  bool slope_valid = false;
};

SmoothingReport kato_smoothing(const HamiltonianSpec& model, const Field& f, double T, double R,
                               const std::vector<double>& m_list, double dt);

// Lower-bound witness for || chi1(t) e^{-i(t-s)H1} P_c F(|p|<=M) ||, maximized
// over s in [t - a_window, t] (s_count evenly spaced points) and sample fields.
double low_velocity_probe(const HamiltonianSpec& model1, const Projector& p_c,
                          const ChannelCutoffs& cutoffs, double M, double a_window, double t,
                          const std::vector<Field>& samples, double dt, int s_count = 8);

// Free-flow conjugation ratios || e^{is Lap/2} V e^{-is Lap/2} f ||_p / ||f||_p
// for p in {1, inf}, against the convention-matched constant ||Vhat||_1.
struct CancellationReport {
  double max_ratio = 0;
  double vhat_l1 = 0;
  std::vector<double> per_s;
};

CancellationReport cancellation_probe(const Field& potential, const std::vector<double>& s_list,
                                      double p, const std::vector<Field>& samples);

// Series || E_eps e^{itA} P_c E_eps f ||_2 with (E_eps f)(x) = e^{-eps rho(x)} f(x),
// rho = sqrt(1 + |x|^2), fitted against the dimension rate -n/2.
DecayReport local_l2_decay(const HamiltonianSpec& model, const Projector& p_c, double eps,
                           const Field& f, const std::vector<double>& times, double dt);

// |||F||| = sup_t { int_0^t ||F(tau)||_1 dtau + <t>^{n/2+1} ||F(t)||_2 },
// trapezoid quadrature on the step grid.
double triple_norm_F(const ForcingSpec& forcing, double T, double dt);

// Ratio series r(t) = <t>^{n/2} ||psi(t)||_{L2+Linf} / (||psi0||_{L1 cap L2}
// + |||F||| + B) with B measured from the projection series.
DecayReport inhom_decay_check(const Trajectory& trajectory, const ForcingSpec* forcing,
                              const std::vector<ProjectionDecaySeries>& projection_series);

// Graded norm sup_t { ||psi(t)||_{H^s} + <t>^{n/2} sum_{k<=s} ||grad^k psi(t)||_{L2+Linf} }
// with spectral derivatives; s in {0, 1, 2}.
double sobolev_norms(const Trajectory& trajectory, int s);

// Companion norm for a source term, with the stronger weight <t>^{n/2+1}.
double sobolev_norms_forcing(const ForcingSpec& forcing, const Grid& grid, double T, double dt,
                             int s);

// Supremum-norm decay fit plus the Fourier-L1 size of the potential that the
// conversion argument assumes finite.
struct LinfDecayReport {
  DecayReport fit;
  double vhat_l1_sup = 0;
  bool decaying = true;
};

LinfDecayReport linf_decay_check(const Trajectory& trajectory, double window_skip = 1.0,
                                 double tol_exponent = 0.15);

// Deterministic probe set: band-limited random fields plus structured packets
// and lattice plane waves.
std::vector<Field> probe_fields(const Grid& grid, int components, int count,
                                unsigned long long seed);

} // namespace ctsim
