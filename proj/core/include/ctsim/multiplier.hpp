#pragma once

#include <array>
#include <functional>

#include "ctsim/field.hpp"

namespace ctsim {

enum class SymbolTag {
  generic,
  kinetic,
  cutoff_low,
  cutoff_high,
  free_propagator,
  derivative,
  translation,
};

// Fourier multiplier: an evaluation rule xi -> complex, possibly per component.
struct MultiplierSymbol {
  SymbolTag tag = SymbolTag::generic;
  // rule(xi, component); xi has zeros in unused axes.
  std::function<cplx(const std::array<double, 3>&, int)> rule;
};

// inverse-transform( symbol(xi) * transform(field) ). Exact on band-limited
// data up to roundoff. Throws on grid/profile mismatch.
Field apply_multiplier(const Field& f, const MultiplierSymbol& symbol);

// Smooth frequency cutoffs: raised-cosine transition on [M-width, M+width].
// Low side passes |xi| <= M-width; high side is its pointwise complement, so
// low + high == 1 exactly.
MultiplierSymbol smooth_cutoff(double M, double width, bool high_side);
// Sharp (indicator) cutoff at |xi| <= M (low side) or |xi| > M (high side).
MultiplierSymbol sharp_cutoff(double M, bool high_side);

// Spectral derivative along an axis: i*xi_axis, with the Nyquist mode zeroed
// (an odd symbol has no consistent Nyquist value).
MultiplierSymbol derivative_symbol(const Grid& g, int axis);

// Spectral translation: multiplies by e^{i xi . a}, i.e. f(x) -> f(x + a);
// handles non-lattice shifts exactly in the band-limited sense.
MultiplierSymbol translation_symbol(const std::array<double, 3>& shift);

// Exact free propagator over time t.
//   1 component:  e^{-i t |xi|^2 / 2}                      (solution e^{itL/2} with L the Laplacian)
//   2 components: e^{-i t (|xi|^2/2 + mu)} on component 0,
//                 e^{+i t (|xi|^2/2 + mu)} on component 1.
MultiplierSymbol free_propagator_symbol(double t, double mu = 0.0);

} // namespace ctsim
