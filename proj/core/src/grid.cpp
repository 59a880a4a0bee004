#include "ctsim/grid.hpp"

#include <cmath>
#include <numbers>

#include "ctsim/errors.hpp"

namespace ctsim {

double Grid::freq_step() const { return 2.0 * std::numbers::pi / length; }

double Grid::nyquist() const { return std::numbers::pi * n / length; }

double Grid::freq(int k) const {
  const int fk = (k < n / 2) ? k : k - n;
  return freq_step() * fk;
}

std::array<int, 3> Grid::unravel(std::size_t idx) const {
  std::array<int, 3> out{0, 0, 0};
  for (int d = dim - 1; d >= 0; --d) {
    out[d] = static_cast<int>(idx % static_cast<std::size_t>(n));
    idx /= static_cast<std::size_t>(n);
  }
  return out;
}

std::array<double, 3> Grid::point(std::size_t idx) const {
  const auto iv = unravel(idx);
  std::array<double, 3> out{0, 0, 0};
  for (int d = 0; d < dim; ++d) out[d] = coord(iv[d]);
  return out;
}

std::array<double, 3> Grid::frequency(std::size_t idx) const {
  const auto iv = unravel(idx);
  std::array<double, 3> out{0, 0, 0};
  for (int d = 0; d < dim; ++d) out[d] = freq(iv[d]);
  return out;
}

Grid make_grid(int dim, int points_per_dim, double box_length) {
  if (dim < 1 || dim > 3)
    throw ConfigError("make_grid: dim must be 1, 2, or 3");
  if (points_per_dim < 8 || (points_per_dim & (points_per_dim - 1)) != 0)
    throw ConfigError("make_grid: points per axis must be a power of two >= 8");
  if (!(box_length > 0))
    throw ConfigError("make_grid: box length must be positive");
  return Grid{dim, points_per_dim, box_length};
}

} // namespace ctsim
