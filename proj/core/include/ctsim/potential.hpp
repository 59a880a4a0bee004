#pragma once

#include <array>
#include <optional>
#include <vector>

#include "ctsim/field.hpp"

namespace ctsim {

enum class PotentialShape { gaussian, sech2, compact_bump };

// One traveling potential. Scalar models use `amplitude` as the well strength;
// matrix models use (amplitude, w_amplitude) for the (U, W) profile pair with
// modulation parameters (alpha, gamma). Both profiles share shape and width.
struct PotentialSpec {
  PotentialShape shape = PotentialShape::gaussian;
  double amplitude = 0;
  double width = 1;
  std::array<double, 3> center{0, 0, 0};
  std::array<double, 3> velocity{0, 0, 0};
  // Matrix data.
  double w_amplitude = 0;
  double alpha = 0;  // must be nonzero in matrix models
  double gamma = 0;

  // Unit-amplitude radial profile at distance r from the (moving) center.
  double profile(double r) const;
  // Radius beyond which |profile| < threshold (support radius for the bump).
  double radius(double threshold = 1e-10) const;
  // Exponential decay-rate metadata epsilon_0 (profile <= C e^{-eps0 r}).
  double decay_rate() const;
  // Modulation phase theta(t, x) = (|v|^2 + alpha^2) t + 2 x.v + gamma.
  double theta(double t, const std::array<double, 3>& x) const;
  double speed2() const;
};

enum class ModelKind { scalar, matrix };

struct EnvelopeSpec {
  enum class Type { constant, exp_decay, gaussian };
  Type type = Type::constant;
  double rate = 0;             // exp(-rate * t)
  double t0 = 0;               // gaussian center
  double sigma = 1;            // gaussian width
  double value(double t) const;
  double sup() const;          // sup over t >= 0
};

// Optional small perturbation V0(t,x) = envelope(t) * amplitude * profile(x).
// In matrix models it enters with the diagonal (U -> U + V0) sign structure.
struct PerturbationSpec {
  PotentialSpec profile;
  EnvelopeSpec envelope;
  double eps() const;  // sup_t ||V0(t,.)||_inf
};

struct HamiltonianSpec {
  ModelKind kind = ModelKind::scalar;
  double mu = 0;  // kinetic shift for stationary matrix frames, H = -Lap/2 + mu
  std::vector<PotentialSpec> potentials;
  std::optional<PerturbationSpec> perturbation;

  int components() const { return kind == ModelKind::matrix ? 2 : 1; }
  bool is_free() const { return potentials.empty() && !perturbation; }
};

// Validates the inputs: pairwise-distinct velocities; alpha != 0 for matrix potentials.
HamiltonianSpec build_hamiltonian(ModelKind kind, double mu, std::vector<PotentialSpec> potentials,
                                  std::optional<PerturbationSpec> perturbation = {});

// Stationary channel frame of potential j: velocity and modulation stripped.
// Scalar: H_j = -Lap/2 + V_j. Matrix: the kinetic shift becomes mu = alpha_j^2/2
// and the potential is the static unmodulated matrix [[U, -W], [W, -U]].
HamiltonianSpec channel_frame(const HamiltonianSpec& model, std::size_t j);

// --- Sampling -----------------------------------------------------------------

// Scalar potential sum_j V_j(x - v_j t) (+ perturbation unless excluded),
// periodized center arithmetic. Real values in a 1-component Field.
struct ScalarPotentialSample {
  Field field;
  bool wraparound_warning = false;  // potential mass within 1e-6 of the box seam
};
ScalarPotentialSample sample_scalar_potential(const std::vector<PotentialSpec>& specs,
                                              const Grid& grid, double t);
ScalarPotentialSample sample_scalar_potential(const HamiltonianSpec& model, const Grid& grid,
                                              double t);

// Matrix potential sum_j [[U_j, -e^{i theta_j} W_j], [e^{-i theta_j} W_j, -U_j]]
// with profiles and phase evaluated at x - v_j t. The pointwise matrix is
// traceless, so it is fully described by the diagonal entry and entry (1,2):
// entry(2,1) = -conj(entry(1,2)), entry(2,2) = -entry(1,1).
struct MatrixPotentialSample {
  Field diag;     // entry (1,1), real-valued
  Field offdiag;  // entry (1,2), complex
  bool wraparound_warning = false;
};
MatrixPotentialSample sample_matrix_potential(const std::vector<PotentialSpec>& specs,
                                              const Grid& grid, double t);
MatrixPotentialSample sample_matrix_potential(const HamiltonianSpec& model, const Grid& grid,
                                              double t);

// Lean buffers for the inner stepping loop (same sampling rules, no Field wrappers).
struct ScalarSampleBuffers {
  std::vector<double> v;
  bool wraparound_warning = false;
};
void sample_scalar_into(const HamiltonianSpec& model, const Grid& grid, double t,
                        ScalarSampleBuffers& out);
struct MatrixSampleBuffers {
  std::vector<double> u;    // entry (1,1)
  std::vector<cplx> p12;    // entry (1,2)
  bool wraparound_warning = false;
};
void sample_matrix_into(const HamiltonianSpec& model, const Grid& grid, double t,
                        MatrixSampleBuffers& out);

// Wraparound guard at scenario scale: half-box > max_j(|v_j| T + radius) + 4 sqrt(T).
bool wraparound_guard_ok(const HamiltonianSpec& model, const Grid& grid, double T);

} // namespace ctsim
