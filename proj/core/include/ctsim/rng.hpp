#pragma once

#include <cstdint>

#include "ctsim/field.hpp"

namespace ctsim {

// Counter-based deterministic generator: draw i of stream `seed` depends only
// on (seed, i), so probe fields are reproducible across platforms and thread
// schedules. The mixer is the splitmix64 finalizer.
class CounterRng {
public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
      : seed_(seed), stream_(stream) {}

  std::uint64_t next_u64();
  double uniform();              // [0, 1)
  double normal();               // standard normal (Box-Muller)
  cplx complex_normal();         // independent N(0,1) real and imaginary parts

  std::uint64_t counter() const { return counter_; }

private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
};

// Random field with unit-variance complex Gaussian spectral coefficients,
// low-passed at |k| <= band_fraction * Nyquist and normalized to L2 norm 1.
Field random_bandlimited_field(const Grid& g, int components, double band_fraction,
                               CounterRng& rng);

// Gaussian wave packet  amp * exp(-|x-center|^2/(2 width^2)) * exp(i momentum.x)
// placed in component `comp` of a `components`-component field.
Field gaussian_packet(const Grid& g, double width, const std::array<double, 3>& center,
                      const std::array<double, 3>& momentum, int components = 1, int comp = 0,
                      cplx amp = {1.0, 0.0});

// Plane wave e^{i k.x} (k need not be on the frequency lattice).
Field plane_wave(const Grid& g, const std::array<double, 3>& k, int components = 1, int comp = 0);

} // namespace ctsim
