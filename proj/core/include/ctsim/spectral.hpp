#pragma once

#include <string>
#include <utility>
#include <vector>

#include "ctsim/field.hpp"
#include "ctsim/potential.hpp"
#include "ctsim/transforms.hpp"

namespace ctsim {

// Dense square complex operator, row-major. Vectors follow the Field layout
// (component-major), so a 2-component field on N points maps to a 2N vector.
struct DenseOperator {
  int dim = 0;
  std::vector<cplx> a;

  DenseOperator() = default;
  explicit DenseOperator(int n) : dim(n), a(static_cast<std::size_t>(n) * n, cplx(0, 0)) {}
  cplx& at(int r, int c) { return a[static_cast<std::size_t>(r) * dim + c]; }
  const cplx& at(int r, int c) const { return a[static_cast<std::size_t>(r) * dim + c]; }
};

std::vector<cplx> dense_apply(const DenseOperator& A, const std::vector<cplx>& x);

// Dense discretizations (1D): spectral circulant kinetic block plus diagonal
// potential. The scalar operator is -Lap/2 + mu + V; the 2-component operator
// is diag(-Lap/2 + mu + U, +Lap/2 - mu - U) with off-diagonal couplings from
// the sampled static matrix potential.
DenseOperator dense_scalar_operator(const Field& potential, double mu = 0.0);
DenseOperator dense_matrix_operator(const HamiltonianSpec& model, const Grid& grid);

struct BoundStateBasis {
  std::vector<cplx> eigenvalues;   // complex-stored; imaginary parts are reported, not hidden
  std::vector<Field> fields;       // L2-normalized right eigenfields (+ appended chain generators)
  std::vector<Field> duals;        // aligned left (adjoint) eigenfields
  std::vector<bool> generalized;   // marks ker(A^2)\ker(A) generators
  bool self_adjoint = false;       // duals coincide with fields, Gram = Id

  std::size_t size() const { return fields.size(); }
};

// All eigenpairs with eigenvalue < -tol of H = -Lap/2 + V (real V), up to
// max_count, by a block Rayleigh-Ritz iteration (LOBPCG-style) preconditioned
// with the inverse shifted free operator. Throws SolverError with the best
// residual on non-convergence.
BoundStateBasis bound_states_scalar(const Field& potential, int max_count, double tol);

// Dense 1D eigendecomposition of the scalar operator; retains eigenvalues < -tol.
BoundStateBasis scalar_spectrum_dense(const Field& potential, double tol);

// Dense 1D eigendecomposition of the static 2-component operator; retains
// eigenvalues inside the window (-mu + window_tol, mu - window_tol) together
// with matching left eigenfields. Total dimension 2N must be <= 4096.
BoundStateBasis matrix_spectrum_dense(const HamiltonianSpec& model, const Grid& grid,
                                      double window_tol = 1e-6);

// Kernel structure of a dense operator from a single SVD of A: ker(A) by
// thresholding at tol_scale * sigma_max, then the higher kernels by a
// staircase — ker(A^2) grows by dim(ker(A) meet range(A)), ker(A^3) by the
// generators reachable modulo ker(A) — so no power of A is ever formed and
// every decision stays at the scale of A. Singular values (or subspace
// angles) within one decade of their threshold raise SolverError (the
// decision would be a guess).
struct KernelAnalysis {
  int dim_ker = 0;
  int dim_ker2 = 0;
  int dim_ker3 = 0;
  std::vector<std::vector<cplx>> chain_generators;          // ker(A^2) \ ker(A)
  std::vector<std::vector<cplx>> adjoint_chain_generators;  // ker((A*)^2) \ ker(A*)
};
KernelAnalysis kernel_analysis(const DenseOperator& A, double tol_scale = 1e-8);

// Appends the zero-eigenvalue Jordan-chain generators of the dense operator of
// `model` to `basis` (right generators paired with adjoint generators as duals).
BoundStateBasis generalized_kernel(const HamiltonianSpec& model, const Grid& grid,
                                   BoundStateBasis basis, double tol_scale = 1e-8);

// Non-orthogonal spectral projection P f = sum_{i,j} phi_j c_{ij} <f, psi_i>
// (complement realizes Id - P).
struct Projector {
  ProjectionBasis basis;
  bool complement = false;
  Field operator()(const Field& f) const;
};

// Solves the Gram system <phi_j, psi_i> c = Id; returns (P_b, P_c).
// Gram condition number > 1e12 raises SolverError (basis/dual mismatch).
std::pair<Projector, Projector> build_projections(const BoundStateBasis& basis);

// max over sample fields and times of ||U(t) P_c f||_2 / ||P_c f||_2 under the
// static model evolution — a lower-bound witness for the stability supremum.
double stability_probe(const HamiltonianSpec& model, const Projector& Pc,
                       const std::vector<double>& t_samples, const std::vector<Field>& samples,
                       double dt);

struct AdmissibilityMode {
  cplx value;
  double realness_defect = 0;    // |Im w|
  bool inside_window = false;    // w in (-mu + tol, mu - tol)
  bool embedded = false;         // localized eigenfield with |Re w| >= mu
  bool localized = false;        // weighted-tail witness on the eigenfield
  bool dual_localized = false;
  bool jordan_terminated = true; // ker(A-w)^2 == ker(A-w) (nonzero w)
};

struct AdmissibilityReport {
  double mu = 0;
  double epsilon0 = 0;           // decay-rate metadata of the potentials
  double window_tol = 0;
  std::vector<AdmissibilityMode> modes;  // in-window modes plus flagged embedded ones
  int kernel_dim = 0;
  int kernel2_dim = 0;
  int kernel3_dim = 0;
  bool jordan_zero_terminated = true;     // ker(A^2) == ker(A^3)
  bool jordan_nonzero_terminated = true;  // all nonzero retained modes terminate
  double stability_probe_value = 0;
  bool admissible = false;
  std::string resonance_check = "not checked";  // threshold resonances at +-mu
};

// Evaluates the checkable admissibility conditions of the static 2-component
// operator: real point spectrum in the gap, Jordan termination at zero and at
// nonzero retained modes, exponential localization of eigenfields and duals
// (weighted tail with rate epsilon0/2 non-increasing across dyadic shells),
// embedded-eigenvalue flags, and an evolution-based stability probe.
AdmissibilityReport check_admissibility(const HamiltonianSpec& model, const Grid& grid,
                                        double window_tol = 1e-6);

// Weighted-tail localization witness used by check_admissibility, exposed for
// tests: tail masses of e^{2 alpha |x|} |u|^2 must not grow across the outer
// dyadic shells of the box.
bool localization_witness(const Field& u, double alpha);

} // namespace ctsim
