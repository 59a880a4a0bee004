#pragma once

#include "ctsim/field.hpp"

namespace ctsim {

// Discrete quadrature norms of the pointwise Euclidean magnitude across
// components. p must be 1, 2, or infinity (pass std::numeric_limits<double>::infinity()).
double norm_lp(const Field& f, double p);
double norm_l1(const Field& f);
double norm_l2(const Field& f);
double norm_linf(const Field& f);

// L2 norm restricted to the centered ball of radius R.
double norm_l2_ball(const Field& f, double R);

struct SplitNorm {
  double value = 0;   // min over lambda of J(lambda)
  double lambda = 0;  // minimizing threshold
};

// ||f||_{L2+Linf} = inf over splittings f = h + g of ||h||_2 + ||g||_inf.
// The optimal split soft-thresholds |f| at level lambda, so the norm equals
// min_{lambda in [0, ||f||_inf]} J(lambda), J(lambda) = ||(|f|-lambda)_+||_2 + lambda.
// J is convex; minimized by golden-section search to absolute tolerance `tol` on lambda.
SplitNorm norm_l2_plus_linf(const Field& f, double tol = 1e-10);

// J(lambda) itself, exposed for property tests and brute-force comparison.
double split_norm_objective(const Field& f, double lambda);

// ||f||_{L1 cap L2} = max(||f||_1, ||f||_2)  (max convention; equivalent to the sum).
double norm_l1_cap_l2(const Field& f);

// Sobolev norm ||<xi>^s fhat||_2 with <xi> = sqrt(1+|xi|^2), spectral side.
double norm_hs(const Field& f, double s);

} // namespace ctsim
