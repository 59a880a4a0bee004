#pragma once

#include <complex>
#include <span>
#include <vector>

#include "ctsim/grid.hpp"

namespace ctsim {

using cplx = std::complex<double>;

// Complex grid function with 1 (scalar) or 2 (spinor) components.
// Storage is component-major: data[c * grid.size() + idx].
struct Field {
  Grid grid;
  int components = 1;
  std::vector<cplx> data;

  Field() = default;
  Field(const Grid& g, int comps) : grid(g), components(comps) {
    data.assign(static_cast<std::size_t>(comps) * g.size(), cplx{0.0, 0.0});
  }

  std::size_t points() const { return grid.size(); }

  cplx& at(int c, std::size_t idx) { return data[static_cast<std::size_t>(c) * points() + idx]; }
  const cplx& at(int c, std::size_t idx) const {
    return data[static_cast<std::size_t>(c) * points() + idx];
  }
  std::span<cplx> comp(int c) { return {data.data() + static_cast<std::size_t>(c) * points(), points()}; }
  std::span<const cplx> comp(int c) const {
    return {data.data() + static_cast<std::size_t>(c) * points(), points()};
  }

  // Pointwise Euclidean magnitude across components.
  double magnitude(std::size_t idx) const {
    double m2 = 0;
    for (int c = 0; c < components; ++c) m2 += std::norm(at(c, idx));
    return std::sqrt(m2);
  }

  Field& operator+=(const Field& other);
  Field& operator-=(const Field& other);
  Field& operator*=(cplx scale);

  bool has_nan() const;
};

Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);
Field operator*(cplx scale, Field f);

// y += a*x (grids and component counts must match).
void axpy(cplx a, const Field& x, Field& y);

// Componentwise complex conjugate.
Field conj(const Field& f);

// Quadrature-weighted inner product <f,g> = sum f * conj(g) * w.
cplx inner(const Field& f, const Field& g);

} // namespace ctsim
