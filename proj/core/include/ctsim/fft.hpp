#pragma once

#include "ctsim/field.hpp"

namespace ctsim {

// Discrete Fourier transforms, per component, in place.
// Convention: forward carries no prefactor, inverse carries 1/N^dim, so
// physical/spectral Parseval reads  w_x * sum|f|^2 = (w_x/N^dim) * sum|fhat|^2
// with w_x = spacing^dim.
void fft_forward(Field& f);
void fft_inverse(Field& f);

// Single-component raw transforms on a contiguous buffer laid out like the grid.
void fft_forward(const Grid& g, cplx* values);
void fft_inverse(const Grid& g, cplx* values);

// Spectral-side quadrature weight making Parseval exact:
//   w_x * sum_x |f|^2 == spectral_weight(g) * sum_k |fhat_k|^2.
double spectral_weight(const Grid& g);

} // namespace ctsim
