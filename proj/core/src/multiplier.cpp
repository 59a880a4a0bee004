#include "ctsim/multiplier.hpp"

#include <cmath>
#include <numbers>

#include "ctsim/errors.hpp"
#include "ctsim/fft.hpp"

namespace ctsim {

Field apply_multiplier(const Field& f, const MultiplierSymbol& symbol) {
  if (!symbol.rule) throw ConfigError("apply_multiplier: symbol has no evaluation rule");
  Field out = f;
  fft_forward(out);
  const std::size_t npts = out.points();
  for (int c = 0; c < out.components; ++c) {
    auto span = out.comp(c);
    for (std::size_t i = 0; i < npts; ++i) span[i] *= symbol.rule(out.grid.frequency(i), c);
  }
  fft_inverse(out);
  return out;
}

namespace {
double radial(const std::array<double, 3>& xi) {
  return std::sqrt(xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]);
}

// Raised cosine on [M-width, M+width]: 1 below, 0 above, value 1/2 at M.
double raised_cosine_low(double r, double M, double width) {
  if (r <= M - width) return 1.0;
  if (r >= M + width) return 0.0;
  return 0.5 * (1.0 + std::cos(std::numbers::pi * (r - (M - width)) / (2.0 * width)));
}
} // namespace

MultiplierSymbol smooth_cutoff(double M, double width, bool high_side) {
  if (!(M > 0) || !(width > 0))
    throw ConfigError("smooth_cutoff: M and width must be positive");
  MultiplierSymbol s;
  s.tag = high_side ? SymbolTag::cutoff_high : SymbolTag::cutoff_low;
  s.rule = [M, width, high_side](const std::array<double, 3>& xi, int) -> cplx {
    const double low = raised_cosine_low(radial(xi), M, width);
    return high_side ? 1.0 - low : low;
  };
  return s;
}

MultiplierSymbol sharp_cutoff(double M, bool high_side) {
  MultiplierSymbol s;
  s.tag = high_side ? SymbolTag::cutoff_high : SymbolTag::cutoff_low;
  s.rule = [M, high_side](const std::array<double, 3>& xi, int) -> cplx {
    const bool pass_low = radial(xi) <= M;
    return (pass_low != high_side) ? 1.0 : 0.0;
  };
  return s;
}

MultiplierSymbol derivative_symbol(const Grid& g, int axis) {
  if (axis < 0 || axis >= g.dim) throw ConfigError("derivative_symbol: axis out of range");
  const double nyq = g.nyquist();
  MultiplierSymbol s;
  s.tag = SymbolTag::derivative;
  s.rule = [axis, nyq](const std::array<double, 3>& xi, int) -> cplx {
    if (xi[axis] == -nyq) return {0.0, 0.0};
    return {0.0, xi[axis]};
  };
  return s;
}

MultiplierSymbol translation_symbol(const std::array<double, 3>& shift) {
  MultiplierSymbol s;
  s.tag = SymbolTag::translation;
  s.rule = [shift](const std::array<double, 3>& xi, int) -> cplx {
    const double phase = xi[0] * shift[0] + xi[1] * shift[1] + xi[2] * shift[2];
    return std::polar(1.0, phase);
  };
  return s;
}

MultiplierSymbol free_propagator_symbol(double t, double mu) {
  MultiplierSymbol s;
  s.tag = SymbolTag::free_propagator;
  s.rule = [t, mu](const std::array<double, 3>& xi, int c) -> cplx {
    const double r = radial(xi);
    const double phase = t * (0.5 * r * r + mu);
    return std::polar(1.0, c == 0 ? -phase : phase);
  };
  return s;
}

} // namespace ctsim
