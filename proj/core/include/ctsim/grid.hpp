#pragma once

#include <array>
#include <cstddef>

namespace ctsim {

// Periodic uniform box [-L/2, L/2)^dim with n points per axis and the usual
// FFT frequency lattice xi_k = 2*pi*k/L, k in [-n/2, n/2).
//
// Index convention is row-major with the last axis fastest (the layout native
// to the transforms). Quadrature weight is spacing^dim so discrete norms
// approximate their continuum counterparts.
struct Grid {
  int dim = 1;
  int n = 0;          // points per axis (power of two)
  double length = 0;  // box edge length L

  std::size_t size() const {
    std::size_t s = 1;
    for (int d = 0; d < dim; ++d) s *= static_cast<std::size_t>(n);
    return s;
  }
  double spacing() const { return length / n; }
  double weight() const {
    double w = 1;
    for (int d = 0; d < dim; ++d) w *= spacing();
    return w;
  }
  double freq_step() const;    // 2*pi/L
  double nyquist() const;      // pi*n/L

  // Coordinate of axis index i: -L/2 + i*spacing.
  double coord(int i) const { return -0.5 * length + i * spacing(); }
  // Frequency of axis index k (wrapped): 2*pi*fk/L with fk in [-n/2, n/2).
  double freq(int k) const;

  std::array<int, 3> unravel(std::size_t idx) const;
  std::array<double, 3> point(std::size_t idx) const;
  std::array<double, 3> frequency(std::size_t idx) const;

  bool operator==(const Grid& other) const = default;
};

// Validates dim in {1,2,3}, n a power of two >= 8, length > 0.
Grid make_grid(int dim, int points_per_dim, double box_length);

} // namespace ctsim
