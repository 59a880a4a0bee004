#pragma once

#include <vector>

#include "ctsim/field.hpp"
#include "ctsim/potential.hpp"
#include "ctsim/propagate.hpp"
#include "ctsim/spectral.hpp"
#include "ctsim/transforms.hpp"

namespace ctsim {

// Smooth partition of unity separating the stationary channel, the moving
// channel, and the far region at time t. chi1 is radial, equal to 1 on
// |x| <= delta*t and 0 outside |x| <= 2*delta*t, with a quintic transition;
// chi2 is chi1 translated to the moving center; chi3 is the complement.
struct ChannelCutoffs {
  double delta = 0;
  double t = 0;
  double t0 = 0;
  Field chi1;
  Field chi2;
  Field chi3;
  bool overlap_warning = false;  // chi1 and chi2 overlap (complement dips below 0)
};

ChannelCutoffs channel_cutoffs(const Grid& grid, double t, double delta,
                               const std::vector<std::array<double, 3>>& velocities,
                               double t0 = 0.0);

// Scalar cutoff profile value at radius r for threshold delta*t.
double cutoff_profile(double r, double delta, double t);

// One scattering channel: the co-moving frame, its bound-state basis, and the
// projection data derived from it.
struct Channel {
  int index = 0;
  FrameParams frame;
  BoundStateBasis bound;
  ProjectionBasis projection;
};

Channel make_channel(const HamiltonianSpec& model, int index, const BoundStateBasis& bound);

// Convenience: compute the bound basis of channel `index` on `grid` (dense 1D
// path for both kinds; iterative solver for scalar models in higher dimension).
Channel make_channel(const HamiltonianSpec& model, int index, const Grid& grid);

// Norm of the transported bound-state projection along a trajectory, with an
// exponential fit log n(t) = log C - rate * t on the samples above the floor.
struct ProjectionDecaySeries {
  int channel = 0;
  std::vector<double> times;
  std::vector<double> values;
  double rate = 0;
  double log_c = 0;
  double residual = 0;
  bool degenerate = false;  // series below the floor everywhere
};

std::vector<ProjectionDecaySeries> projection_decay_series(const Trajectory& trajectory,
                                                           const std::vector<Channel>& channels);

struct ChannelCoefficient {
  int channel = 0;
  int mode = 0;
  cplx value;
  double drift = 0;       // relative wander over the last quarter of the run
  bool stabilized = true; // drift below 5%
};

struct CompletenessReport {
  std::vector<ChannelCoefficient> coefficients;
  std::vector<WaveOperatorImage> images;  // aligned with coefficients
  Field phi;   // datum minus the captured channel components
  Field phi0;  // free datum: inverse free flow of the evolved remainder
  double phi_drift = 0;
  std::vector<double> times;
  std::vector<double> remainder;  // || psi(t) - sum_r A_r e^{-i lam_r t} u_r(t) - free(t) phi0 ||_2
  bool stabilized = true;
};

CompletenessReport asymptotic_decomposition(const Field& psi0, const HamiltonianSpec& model,
                                            const std::vector<Channel>& channels, double T,
                                            double dt);

// The remainder datum phi of the decomposition; throws SolverError if the
// coefficient extraction has not stabilized or a wave-operator image failed
// to converge (advice: increase T).
Field scattering_state(const Field& psi0, const HamiltonianSpec& model,
                       const std::vector<Channel>& channels, double T, double dt,
                       std::vector<ChannelCoefficient>* coefficients = nullptr);

} // namespace ctsim
