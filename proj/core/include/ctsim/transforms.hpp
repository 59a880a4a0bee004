#pragma once

#include <array>
#include <optional>
#include <vector>

#include "ctsim/field.hpp"

namespace ctsim {

// Boost-translation unitary g_{v,y}(t): phase e^{-i|v|^2 t/2}, multiplication
// e^{-i x.v}, translation e^{i(y+tv).p} (i.e. f -> f(. + y + t v)), applied
// right-to-left. On 2-component fields the second component is conjugated on
// the way in and out, which flips the sign of every phase but keeps the
// translation direction.
struct GalileiParams {
  std::array<double, 3> velocity{0, 0, 0};
  std::array<double, 3> offset{0, 0, 0};  // y
};

Field galilei(const Field& f, const GalileiParams& p, double t);
// Exact inverse: e^{-i y.v} g_{-v,-y}(t); reduces to g_{-v}(t) when y = 0.
Field galilei_inverse(const Field& f, const GalileiParams& p, double t);

// Alias emphasising the 2-component action (component 2 via conjugation).
Field matrix_galilei(const Field& spinor, const GalileiParams& p, double t);
Field matrix_galilei_inverse(const Field& spinor, const GalileiParams& p, double t);

// Diagonal modulation M(t) = diag(e^{-i w(t)/2}, e^{+i w(t)/2}), w = alpha^2 t + gamma.
struct ModulationParams {
  double alpha = 0;
  double gamma = 0;
  double omega(double t) const { return alpha * alpha * t + gamma; }
};

Field modulation(const Field& spinor, const ModulationParams& p, double t);
Field modulation_inverse(const Field& spinor, const ModulationParams& p, double t);

// Frame maps for a channel moving with velocity v (modulated in matrix models):
// to_frame = M(t) G_v(t) (lab -> stationary frame), from_frame its inverse.
struct FrameParams {
  std::array<double, 3> velocity{0, 0, 0};
  std::optional<ModulationParams> modulation;  // present for matrix channels
};

Field to_frame(const Field& f, const FrameParams& fr, double t);
Field from_frame(const Field& f, const FrameParams& fr, double t);

// Oblique (generally non-orthogonal) projection onto span{right_k}:
// P f = sum_k right_k * sum_i coeff(k,i) <f, left_i>. Self-adjoint frames use
// left == right orthonormal and coeff = identity.
struct ProjectionBasis {
  std::vector<Field> right;
  std::vector<Field> left;
  std::vector<cplx> coeff;  // row-major, right.size() x left.size()

  std::size_t nr() const { return right.size(); }
  std::size_t nl() const { return left.size(); }
};

Field project(const ProjectionBasis& basis, const Field& f);
// Complement f - P f.
Field project_complement(const ProjectionBasis& basis, const Field& f);

// Projection transported along the moving frame:
// f -> from_frame(t) [ P to_frame(t) f ].
Field moving_projection(const ProjectionBasis& basis, const FrameParams& frame, double t,
                        const Field& f);

} // namespace ctsim
