#include "ctsim/norms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ctsim/errors.hpp"
#include "ctsim/fft.hpp"

namespace ctsim {

double norm_l1(const Field& f) {
  double acc = 0;
  for (std::size_t i = 0; i < f.points(); ++i) acc += f.magnitude(i);
  return acc * f.grid.weight();
}

double norm_l2(const Field& f) {
  double acc = 0;
  for (const auto& v : f.data) acc += std::norm(v);
  return std::sqrt(acc * f.grid.weight());
}

double norm_linf(const Field& f) {
  double m = 0;
  for (std::size_t i = 0; i < f.points(); ++i) m = std::max(m, f.magnitude(i));
  return m;
}

double norm_lp(const Field& f, double p) {
  if (p == 1.0) return norm_l1(f);
  if (p == 2.0) return norm_l2(f);
  if (std::isinf(p)) return norm_linf(f);
  throw ConfigError("norm_lp: p must be 1, 2, or infinity");
}

double norm_l2_ball(const Field& f, double R) {
  if (R > 0.5 * f.grid.length)
    throw ConfigError("norm_l2_ball: ball radius exceeds the half-box");
  double acc = 0;
  const std::size_t npts = f.points();
  for (std::size_t i = 0; i < npts; ++i) {
    const auto x = f.grid.point(i);
    const double r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
    if (r2 <= R * R) {
      double m2 = 0;
      for (int c = 0; c < f.components; ++c) m2 += std::norm(f.at(c, i));
      acc += m2;
    }
  }
  return std::sqrt(acc * f.grid.weight());
}

double split_norm_objective(const Field& f, double lambda) {
  double acc = 0;
  for (std::size_t i = 0; i < f.points(); ++i) {
    const double excess = f.magnitude(i) - lambda;
    if (excess > 0) acc += excess * excess;
  }
  return std::sqrt(acc * f.grid.weight()) + lambda;
}

SplitNorm norm_l2_plus_linf(const Field& f, double tol) {
  const double linf = norm_linf(f);
  if (linf == 0) return {0.0, 0.0};

  // Golden-section on the convex J over [0, ||f||_inf].
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = 0.0, b = linf;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double jc = split_norm_objective(f, c);
  double jd = split_norm_objective(f, d);
  while (b - a > tol) {
    if (jc < jd) {
      b = d;
      d = c;
      jd = jc;
      c = b - invphi * (b - a);
      jc = split_norm_objective(f, c);
    } else {
      a = c;
      c = d;
      jc = jd;
      d = a + invphi * (b - a);
      jd = split_norm_objective(f, d);
    }
  }
  const double lambda = 0.5 * (a + b);
  // Compare the interior minimum against the endpoints (lambda = 0 is optimal
  // for spike-like fields).
  double best_lambda = lambda;
  double best = split_norm_objective(f, lambda);
  for (double cand : {0.0, linf}) {
    const double j = split_norm_objective(f, cand);
    if (j < best) {
      best = j;
      best_lambda = cand;
    }
  }
  return {best, best_lambda};
}

double norm_l1_cap_l2(const Field& f) { return std::max(norm_l1(f), norm_l2(f)); }

double norm_hs(const Field& f, double s) {
  Field hat = f;
  fft_forward(hat);
  double acc = 0;
  const std::size_t npts = hat.points();
  for (std::size_t i = 0; i < npts; ++i) {
    const auto xi = hat.grid.frequency(i);
    const double w = std::pow(1.0 + xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2], s);
    for (int c = 0; c < hat.components; ++c) acc += w * std::norm(hat.at(c, i));
  }
  return std::sqrt(acc * spectral_weight(f.grid));
}

} // namespace ctsim
