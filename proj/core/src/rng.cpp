#include "ctsim/rng.hpp"

#include <cmath>
#include <numbers>

#include "ctsim/fft.hpp"
#include "ctsim/norms.hpp"

namespace ctsim {

namespace {
std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}
} // namespace

std::uint64_t CounterRng::next_u64() {
  const std::uint64_t word =
      splitmix64(seed_ ^ splitmix64(stream_ ^ splitmix64(counter_)));
  ++counter_;
  return word;
}

double CounterRng::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double CounterRng::normal() {
  // Box-Muller; draws two uniforms per call (no cached spare, to keep the
  // draw count a pure function of the call count).
  double u1 = uniform();
  while (u1 == 0.0) u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

cplx CounterRng::complex_normal() {
  const double re = normal();
  const double im = normal();
  return {re, im};
}

Field random_bandlimited_field(const Grid& g, int components, double band_fraction,
                               CounterRng& rng) {
  Field f(g, components);
  const double cutoff = band_fraction * g.nyquist();
  const std::size_t npts = g.size();
  for (int c = 0; c < components; ++c) {
    auto span = f.comp(c);
    for (std::size_t i = 0; i < npts; ++i) {
      const auto xi = g.frequency(i);
      const double r = std::sqrt(xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]);
      const cplx coeff = rng.complex_normal();
      span[i] = (r <= cutoff) ? coeff : cplx{0.0, 0.0};
    }
  }
  fft_inverse(f);
  const double n2 = norm_l2(f);
  if (n2 > 0) f *= cplx{1.0 / n2, 0.0};
  return f;
}

Field gaussian_packet(const Grid& g, double width, const std::array<double, 3>& center,
                      const std::array<double, 3>& momentum, int components, int comp, cplx amp) {
  Field f(g, components);
  auto span = f.comp(comp);
  const std::size_t npts = g.size();
  for (std::size_t i = 0; i < npts; ++i) {
    const auto x = g.point(i);
    double r2 = 0, kx = 0;
    for (int d = 0; d < g.dim; ++d) {
      const double dx = x[d] - center[d];
      r2 += dx * dx;
      kx += momentum[d] * x[d];
    }
    span[i] = amp * std::exp(-r2 / (2.0 * width * width)) * std::polar(1.0, kx);
  }
  return f;
}

Field plane_wave(const Grid& g, const std::array<double, 3>& k, int components, int comp) {
  Field f(g, components);
  auto span = f.comp(comp);
  const std::size_t npts = g.size();
  for (std::size_t i = 0; i < npts; ++i) {
    const auto x = g.point(i);
    span[i] = std::polar(1.0, k[0] * x[0] + k[1] * x[1] + k[2] * x[2]);
  }
  return f;
}

} // namespace ctsim
