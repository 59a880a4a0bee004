#include "ctsim/transforms.hpp"

#include <cmath>

#include "ctsim/errors.hpp"
#include "ctsim/multiplier.hpp"

namespace ctsim {

namespace {

double dot3(const std::array<double, 3>& a, const std::array<double, 3>& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

// Spectral translation f -> f(. + a), identical on every component.
void translate_inplace(Field& f, const std::array<double, 3>& a) {
  if (a[0] == 0 && a[1] == 0 && a[2] == 0) return;
  MultiplierSymbol sym = translation_symbol(a);
  f = apply_multiplier(f, sym);
}

// Pointwise phase e^{i s_c (phi0 + x.k)} with per-component sign s_c
// (s_0 = +1, s_1 = -1 on spinors).
void phase_inplace(Field& f, double phi0, const std::array<double, 3>& k) {
  const Grid& g = f.grid;
  const std::size_t n = g.size();
  for (int c = 0; c < f.components; ++c) {
    const double sign = (c == 0) ? 1.0 : -1.0;
    cplx* data = f.comp(c).data();
    for (std::size_t i = 0; i < n; ++i) {
      const auto iv = g.unravel(i);
      double xk = 0;
      for (int d = 0; d < g.dim; ++d) xk += g.coord(iv[d]) * k[d];
      data[i] *= std::polar(1.0, sign * (phi0 + xk));
    }
  }
}

} // namespace

Field galilei(const Field& f, const GalileiParams& p, double t) {
  if (f.components != 1 && f.components != 2)
    throw ConfigError("galilei expects 1 or 2 components");
  Field out = f;
  std::array<double, 3> shift{};
  for (int d = 0; d < 3; ++d) shift[d] = p.offset[d] + t * p.velocity[d];
  translate_inplace(out, shift);
  std::array<double, 3> mk{};
  for (int d = 0; d < 3; ++d) mk[d] = -p.velocity[d];
  phase_inplace(out, -0.5 * dot3(p.velocity, p.velocity) * t, mk);
  return out;
}

Field galilei_inverse(const Field& f, const GalileiParams& p, double t) {
  GalileiParams q;
  for (int d = 0; d < 3; ++d) {
    q.velocity[d] = -p.velocity[d];
    q.offset[d] = -p.offset[d];
  }
  Field out = galilei(f, q, t);
  const double phi = -dot3(p.offset, p.velocity);
  if (phi != 0) phase_inplace(out, phi, {0, 0, 0});
  return out;
}

Field matrix_galilei(const Field& spinor, const GalileiParams& p, double t) {
  if (spinor.components != 2) throw ConfigError("matrix_galilei expects 2 components");
  return galilei(spinor, p, t);
}

Field matrix_galilei_inverse(const Field& spinor, const GalileiParams& p, double t) {
  if (spinor.components != 2) throw ConfigError("matrix_galilei_inverse expects 2 components");
  return galilei_inverse(spinor, p, t);
}

Field modulation(const Field& spinor, const ModulationParams& p, double t) {
  if (spinor.components != 2) throw ConfigError("modulation expects 2 components");
  Field out = spinor;
  const cplx ph = std::polar(1.0, -0.5 * p.omega(t));
  const std::size_t n = out.grid.size();
  cplx* c0 = out.comp(0).data();
  cplx* c1 = out.comp(1).data();
  for (std::size_t i = 0; i < n; ++i) {
    c0[i] *= ph;
    c1[i] *= std::conj(ph);
  }
  return out;
}

Field modulation_inverse(const Field& spinor, const ModulationParams& p, double t) {
  ModulationParams q = p;
  // M^{-1} flips both diagonal phases; realized by negating omega.
  Field out = spinor;
  const cplx ph = std::polar(1.0, +0.5 * q.omega(t));
  const std::size_t n = out.grid.size();
  cplx* c0 = out.comp(0).data();
  cplx* c1 = out.comp(1).data();
  for (std::size_t i = 0; i < n; ++i) {
    c0[i] *= ph;
    c1[i] *= std::conj(ph);
  }
  return out;
}

Field to_frame(const Field& f, const FrameParams& fr, double t) {
  GalileiParams gp;
  gp.velocity = fr.velocity;
  Field out = galilei(f, gp, t);
  if (fr.modulation && f.components == 2) out = modulation(out, *fr.modulation, t);
  return out;
}

Field from_frame(const Field& f, const FrameParams& fr, double t) {
  Field out = f;
  if (fr.modulation && f.components == 2) out = modulation_inverse(out, *fr.modulation, t);
  GalileiParams gp;
  gp.velocity = fr.velocity;
  return galilei_inverse(out, gp, t);
}

Field project(const ProjectionBasis& basis, const Field& f) {
  if (basis.right.empty()) return Field(f.grid, f.components);
  if (basis.coeff.size() != basis.nr() * basis.nl())
    throw ConfigError("projection coefficient matrix has wrong shape");
  std::vector<cplx> overlaps(basis.nl());
  for (std::size_t i = 0; i < basis.nl(); ++i) overlaps[i] = inner(f, basis.left[i]);
  Field out(f.grid, f.components);
  for (std::size_t k = 0; k < basis.nr(); ++k) {
    cplx amp(0, 0);
    for (std::size_t i = 0; i < basis.nl(); ++i)
      amp += basis.coeff[k * basis.nl() + i] * overlaps[i];
    if (amp != cplx(0, 0)) axpy(amp, basis.right[k], out);
  }
  return out;
}

Field project_complement(const ProjectionBasis& basis, const Field& f) {
  Field p = project(basis, f);
  Field out = f;
  out -= p;
  return out;
}

Field moving_projection(const ProjectionBasis& basis, const FrameParams& frame, double t,
                        const Field& f) {
  Field g = to_frame(f, frame, t);
  Field h = project(basis, g);
  return from_frame(h, frame, t);
}

} // namespace ctsim
