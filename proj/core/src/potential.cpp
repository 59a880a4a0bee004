#include "ctsim/potential.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ctsim/errors.hpp"

namespace ctsim {

namespace {

double dot3(const std::array<double, 3>& a, const std::array<double, 3>& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

// Displacement x - c wrapped per-axis into [-L/2, L/2) (minimum-image metric).
double wrapped_distance(const Grid& g, const std::array<double, 3>& x,
                        const std::array<double, 3>& c) {
  double r2 = 0;
  for (int d = 0; d < g.dim; ++d) {
    double diff = x[d] - c[d];
    diff -= g.length * std::round(diff / g.length);
    r2 += diff * diff;
  }
  return std::sqrt(r2);
}

} // namespace

double PotentialSpec::profile(double r) const {
  const double u = r / width;
  switch (shape) {
    case PotentialShape::gaussian:
      return std::exp(-0.5 * u * u);
    case PotentialShape::sech2: {
      const double c = std::cosh(u);
      return 1.0 / (c * c);
    }
    case PotentialShape::compact_bump:
      if (u >= 1.0) return 0.0;
      return std::exp(1.0 - 1.0 / (1.0 - u * u));
  }
  return 0.0;
}

double PotentialSpec::radius(double threshold) const {
  switch (shape) {
    case PotentialShape::gaussian:
      return width * std::sqrt(-2.0 * std::log(threshold));
    case PotentialShape::sech2:
      // sech^2(u) <= 4 e^{-2u}
      return width * 0.5 * std::log(4.0 / threshold);
    case PotentialShape::compact_bump:
      return width;
  }
  return width;
}

double PotentialSpec::decay_rate() const {
  switch (shape) {
    case PotentialShape::sech2:
      return 2.0 / width;
    case PotentialShape::gaussian:
    case PotentialShape::compact_bump:
      // Super-exponential / compactly supported: any finite rate is admitted.
      return 1.0e3;
  }
  return 1.0e3;
}

double PotentialSpec::theta(double t, const std::array<double, 3>& x) const {
  return (speed2() + alpha * alpha) * t + 2.0 * dot3(x, velocity) + gamma;
}

double PotentialSpec::speed2() const { return dot3(velocity, velocity); }

double EnvelopeSpec::value(double t) const {
  switch (type) {
    case Type::constant:
      return 1.0;
    case Type::exp_decay:
      return std::exp(-rate * t);
    case Type::gaussian: {
      const double u = (t - t0) / sigma;
      return std::exp(-0.5 * u * u);
    }
  }
  return 1.0;
}

double EnvelopeSpec::sup() const {
  switch (type) {
    case Type::constant:
    case Type::exp_decay:
      return 1.0;
    case Type::gaussian:
      return t0 >= 0 ? 1.0 : value(0.0);
  }
  return 1.0;
}

double PerturbationSpec::eps() const {
  return std::abs(profile.amplitude) * envelope.sup();
}

HamiltonianSpec build_hamiltonian(ModelKind kind, double mu, std::vector<PotentialSpec> potentials,
                                  std::optional<PerturbationSpec> perturbation) {
  for (std::size_t i = 0; i < potentials.size(); ++i) {
    const auto& p = potentials[i];
    if (p.width <= 0) throw ConfigError("potential width must be positive");
    if (kind == ModelKind::scalar) {
      if (p.alpha != 0 || p.w_amplitude != 0)
        throw ConfigError("scalar model cannot carry matrix potential data (alpha, W amplitude)");
    } else {
      if (p.alpha == 0) throw ConfigError("matrix potential requires nonzero alpha");
    }
    for (std::size_t j = i + 1; j < potentials.size(); ++j) {
      double d2 = 0;
      for (int a = 0; a < 3; ++a) {
        const double diff = p.velocity[a] - potentials[j].velocity[a];
        d2 += diff * diff;
      }
      if (d2 < 1e-24)
        throw ConfigError("potential velocities must be pairwise distinct");
    }
  }
  if (perturbation && perturbation->profile.width <= 0)
    throw ConfigError("perturbation width must be positive");
  HamiltonianSpec spec;
  spec.kind = kind;
  spec.mu = mu;
  spec.potentials = std::move(potentials);
  spec.perturbation = std::move(perturbation);
  return spec;
}

HamiltonianSpec channel_frame(const HamiltonianSpec& model, std::size_t j) {
  if (j >= model.potentials.size())
    throw ConfigError("channel index out of range");
  PotentialSpec p = model.potentials[j];
  p.velocity = {0, 0, 0};
  HamiltonianSpec frame;
  frame.kind = model.kind;
  frame.mu = model.mu;
  if (model.kind == ModelKind::matrix) {
    frame.mu += 0.5 * p.alpha * p.alpha;
    p.alpha = 0;  // static unmodulated matrix potential
    p.gamma = 0;
  }
  frame.potentials = {p};
  return frame;
}

namespace {

// Max |unit profile| on the wrap seam of the minimum-image metric. The seam sits
// at distance L/2 from the moving center, independent of where the center is.
bool seam_warning(const PotentialSpec& p, const Grid& g) {
  return p.profile(0.5 * g.length) > 1e-6;
}

void grid_point(const Grid& g, std::size_t idx, std::array<double, 3>& x) {
  const auto iv = g.unravel(idx);
  x = {0, 0, 0};
  for (int d = 0; d < g.dim; ++d) x[d] = g.coord(iv[d]);
}

} // namespace

void sample_scalar_into(const HamiltonianSpec& model, const Grid& grid, double t,
                        ScalarSampleBuffers& out) {
  const std::size_t n = grid.size();
  out.v.assign(n, 0.0);
  out.wraparound_warning = false;
  std::array<double, 3> x{};
  for (const auto& p : model.potentials) {
    if (seam_warning(p, grid)) out.wraparound_warning = true;
    std::array<double, 3> c = p.center;
    for (int d = 0; d < 3; ++d) c[d] += t * p.velocity[d];
    for (std::size_t i = 0; i < n; ++i) {
      grid_point(grid, i, x);
      out.v[i] += p.amplitude * p.profile(wrapped_distance(grid, x, c));
    }
  }
  if (model.perturbation) {
    const auto& pert = *model.perturbation;
    const double env = pert.envelope.value(t);
    if (env != 0.0) {
      const auto& p = pert.profile;
      if (seam_warning(p, grid)) out.wraparound_warning = true;
      std::array<double, 3> c = p.center;
      for (int d = 0; d < 3; ++d) c[d] += t * p.velocity[d];
      for (std::size_t i = 0; i < n; ++i) {
        grid_point(grid, i, x);
        out.v[i] += env * p.amplitude * p.profile(wrapped_distance(grid, x, c));
      }
    }
  }
}

void sample_matrix_into(const HamiltonianSpec& model, const Grid& grid, double t,
                        MatrixSampleBuffers& out) {
  const std::size_t n = grid.size();
  out.u.assign(n, 0.0);
  out.p12.assign(n, cplx(0, 0));
  out.wraparound_warning = false;
  std::array<double, 3> x{};
  for (const auto& p : model.potentials) {
    if (seam_warning(p, grid)) out.wraparound_warning = true;
    std::array<double, 3> c = p.center;
    for (int d = 0; d < 3; ++d) c[d] += t * p.velocity[d];
    // Lab-frame modulation phase theta(t, x - v t) = (alpha^2 - |v|^2) t + 2 x.v + gamma.
    const double phase0 = (p.alpha * p.alpha - p.speed2()) * t + p.gamma;
    for (std::size_t i = 0; i < n; ++i) {
      grid_point(grid, i, x);
      const double prof = p.profile(wrapped_distance(grid, x, c));
      out.u[i] += p.amplitude * prof;
      if (p.w_amplitude != 0) {
        const double th = phase0 + 2.0 * dot3(x, p.velocity);
        out.p12[i] -= std::polar(p.w_amplitude * prof, th);
      }
    }
  }
  if (model.perturbation) {
    const auto& pert = *model.perturbation;
    const double env = pert.envelope.value(t);
    if (env != 0.0) {
      const auto& p = pert.profile;
      if (seam_warning(p, grid)) out.wraparound_warning = true;
      std::array<double, 3> c = p.center;
      for (int d = 0; d < 3; ++d) c[d] += t * p.velocity[d];
      for (std::size_t i = 0; i < n; ++i) {
        grid_point(grid, i, x);
        out.u[i] += env * p.amplitude * p.profile(wrapped_distance(grid, x, c));
      }
    }
  }
}

ScalarPotentialSample sample_scalar_potential(const std::vector<PotentialSpec>& specs,
                                              const Grid& grid, double t) {
  HamiltonianSpec m;
  m.kind = ModelKind::scalar;
  m.potentials = specs;
  return sample_scalar_potential(m, grid, t);
}

ScalarPotentialSample sample_scalar_potential(const HamiltonianSpec& model, const Grid& grid,
                                              double t) {
  ScalarSampleBuffers buf;
  sample_scalar_into(model, grid, t, buf);
  ScalarPotentialSample out{Field(grid, 1), buf.wraparound_warning};
  for (std::size_t i = 0; i < grid.size(); ++i) out.field.data[i] = buf.v[i];
  return out;
}

MatrixPotentialSample sample_matrix_potential(const std::vector<PotentialSpec>& specs,
                                              const Grid& grid, double t) {
  HamiltonianSpec m;
  m.kind = ModelKind::matrix;
  m.potentials = specs;
  return sample_matrix_potential(m, grid, t);
}

MatrixPotentialSample sample_matrix_potential(const HamiltonianSpec& model, const Grid& grid,
                                              double t) {
  MatrixSampleBuffers buf;
  sample_matrix_into(model, grid, t, buf);
  MatrixPotentialSample out{Field(grid, 1), Field(grid, 1), buf.wraparound_warning};
  for (std::size_t i = 0; i < grid.size(); ++i) {
    out.diag.data[i] = buf.u[i];
    out.offdiag.data[i] = buf.p12[i];
  }
  return out;
}

bool wraparound_guard_ok(const HamiltonianSpec& model, const Grid& grid, double T) {
  const double half = 0.5 * grid.length;
  double need = 0;
  for (const auto& p : model.potentials) {
    double drift = std::sqrt(p.speed2()) * T + p.radius();
    double off = 0;
    for (int d = 0; d < grid.dim; ++d) off = std::max(off, std::abs(p.center[d]));
    need = std::max(need, off + drift);
  }
  need += 4.0 * std::sqrt(std::max(T, 0.0));
  return half > need;
}

} // namespace ctsim
