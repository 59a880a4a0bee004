#include "ctsim/field.hpp"

#include <cmath>

#include "ctsim/errors.hpp"

namespace ctsim {

namespace {
void require_compatible(const Field& a, const Field& b, const char* op) {
  if (!(a.grid == b.grid) || a.components != b.components)
    throw ConfigError(std::string(op) + ": fields live on different grids or component counts");
}
} // namespace

Field& Field::operator+=(const Field& other) {
  require_compatible(*this, other, "Field::operator+=");
  for (std::size_t i = 0; i < data.size(); ++i) data[i] += other.data[i];
  return *this;
}

Field& Field::operator-=(const Field& other) {
  require_compatible(*this, other, "Field::operator-=");
  for (std::size_t i = 0; i < data.size(); ++i) data[i] -= other.data[i];
  return *this;
}

Field& Field::operator*=(cplx scale) {
  for (auto& v : data) v *= scale;
  return *this;
}

bool Field::has_nan() const {
  for (const auto& v : data)
    if (std::isnan(v.real()) || std::isnan(v.imag())) return true;
  return false;
}

Field operator+(Field a, const Field& b) { return a += b; }
Field operator-(Field a, const Field& b) { return a -= b; }
Field operator*(cplx scale, Field f) { return f *= scale; }

void axpy(cplx a, const Field& x, Field& y) {
  require_compatible(x, y, "axpy");
  for (std::size_t i = 0; i < y.data.size(); ++i) y.data[i] += a * x.data[i];
}

Field conj(const Field& f) {
  Field out = f;
  for (auto& v : out.data) v = std::conj(v);
  return out;
}

cplx inner(const Field& f, const Field& g) {
  require_compatible(f, g, "inner");
  cplx acc{0.0, 0.0};
  for (std::size_t i = 0; i < f.data.size(); ++i) acc += f.data[i] * std::conj(g.data[i]);
  return acc * f.grid.weight();
}

} // namespace ctsim
