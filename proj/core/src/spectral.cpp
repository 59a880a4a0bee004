#include "ctsim/spectral.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "ctsim/errors.hpp"
#include "ctsim/fft.hpp"
#include "ctsim/norms.hpp"
#include "ctsim/propagate.hpp"
#include "ctsim/rng.hpp"

namespace ctsim {

namespace {

using MatC = Eigen::MatrixXcd;
using MatR = Eigen::MatrixXd;
using VecC = Eigen::VectorXcd;

MatC to_eigen(const DenseOperator& A) {
  MatC m(A.dim, A.dim);
  for (int r = 0; r < A.dim; ++r)
    for (int c = 0; c < A.dim; ++c) m(r, c) = A.at(r, c);
  return m;
}

// First row of the spectral (circulant) kinetic matrix |xi|^2/2 + mu on a 1D grid.
std::vector<cplx> kinetic_row(const Grid& g, double mu) {
  std::vector<cplx> row(g.size());
  for (std::size_t k = 0; k < row.size(); ++k) {
    const double xi = g.freq(static_cast<int>(k));
    row[k] = cplx(0.5 * xi * xi + mu, 0.0);
  }
  fft_inverse(g, row.data());
  return row;
}

void require_dense_1d(const Grid& g) {
  if (g.dim != 1) throw ConfigError("dense spectral path requires a 1D grid");
}

void require_static(const HamiltonianSpec& model) {
  for (const auto& p : model.potentials) {
    if (p.speed2() != 0)
      throw ConfigError("spectral analysis requires a time-independent operator (zero velocities)");
    if (model.kind == ModelKind::matrix && p.alpha != 0 && p.w_amplitude != 0)
      throw ConfigError("spectral analysis requires an unmodulated matrix potential");
  }
  if (model.perturbation && model.perturbation->envelope.type != EnvelopeSpec::Type::constant)
    throw ConfigError("spectral analysis requires a time-independent perturbation");
}

Field field_from_coeffs(const Grid& g, int components, const VecC& v) {
  Field f(g, components);
  const std::size_t n = g.size();
  for (int c = 0; c < components; ++c)
    for (std::size_t i = 0; i < n; ++i) f.at(c, i) = v(static_cast<Eigen::Index>(c * n + i));
  const double nrm = norm_l2(f);
  if (nrm > 0) f *= cplx(1.0 / nrm, 0.0);
  return f;
}

struct DenseEig {
  VecC values;
  MatC vectors;  // columns
};

DenseEig solve_dense(const MatC& A) {
  double max_imag = 0;
  for (Eigen::Index i = 0; i < A.size(); ++i)
    max_imag = std::max(max_imag, std::abs(A(i).imag()));
  DenseEig out;
  if (max_imag < 1e-14) {
    Eigen::EigenSolver<MatR> es(A.real());
    if (es.info() != Eigen::Success) throw SolverError("dense eigensolver failed to converge");
    out.values = es.eigenvalues();
    out.vectors = es.eigenvectors();
  } else {
    Eigen::ComplexEigenSolver<MatC> es(A);
    if (es.info() != Eigen::Success) throw SolverError("dense eigensolver failed to converge");
    out.values = es.eigenvalues();
    out.vectors = es.eigenvectors();
  }
  return out;
}

// Greedy pairing of right eigenvalues with adjoint eigenvalues (conjugated).
std::vector<int> pair_duals(const std::vector<cplx>& right, const VecC& adjoint_values,
                            double scale) {
  std::vector<int> pick(right.size(), -1);
  std::vector<bool> used(static_cast<std::size_t>(adjoint_values.size()), false);
  for (std::size_t i = 0; i < right.size(); ++i) {
    double best = std::numeric_limits<double>::max();
    int arg = -1;
    for (Eigen::Index j = 0; j < adjoint_values.size(); ++j) {
      if (used[static_cast<std::size_t>(j)]) continue;
      const double d = std::abs(std::conj(adjoint_values(j)) - right[i]);
      if (d < best) {
        best = d;
        arg = static_cast<int>(j);
      }
    }
    if (arg < 0 || best > 1e-6 * std::max(1.0, scale))
      throw SolverError("left/right eigenvalue pairing failed", best);
    used[static_cast<std::size_t>(arg)] = true;
    pick[i] = arg;
  }
  return pick;
}

// Decade-guarded numerical rank from a precomputed SVD: singular values within
// one decade of tol_scale * sigma_max are refused as ambiguous.
int rank_from(const Eigen::BDCSVD<MatC>& svd, double tol_scale) {
  const auto& s = svd.singularValues();
  const double smax = s.size() ? s(0) : 0.0;
  if (smax == 0.0) return 0;
  const double tol = tol_scale * smax;
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > tol / 10.0 && s(i) < tol * 10.0)
      throw SolverError(
          "singular value within one decade of the rank threshold; adjust the tolerance",
          s(i) / smax);
    if (s(i) >= tol) ++rank;
  }
  return rank;
}

} // namespace

std::vector<cplx> dense_apply(const DenseOperator& A, const std::vector<cplx>& x) {
  if (static_cast<int>(x.size()) != A.dim) throw ConfigError("dense operator/vector size mismatch");
  std::vector<cplx> y(x.size(), cplx(0, 0));
  for (int r = 0; r < A.dim; ++r) {
    cplx acc(0, 0);
    const cplx* row = A.a.data() + static_cast<std::size_t>(r) * A.dim;
    for (int c = 0; c < A.dim; ++c) acc += row[c] * x[static_cast<std::size_t>(c)];
    y[static_cast<std::size_t>(r)] = acc;
  }
  return y;
}

DenseOperator dense_scalar_operator(const Field& potential, double mu) {
  require_dense_1d(potential.grid);
  const Grid& g = potential.grid;
  const int n = static_cast<int>(g.size());
  const auto row = kinetic_row(g, mu);
  DenseOperator A(n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) A.at(r, c) = row[static_cast<std::size_t>((r - c + n) % n)];
    A.at(r, r) += potential.at(0, static_cast<std::size_t>(r)).real();
  }
  return A;
}

DenseOperator dense_matrix_operator(const HamiltonianSpec& model, const Grid& grid) {
  require_dense_1d(grid);
  if (model.kind != ModelKind::matrix)
    throw ConfigError("dense matrix operator requires a 2-component model");
  require_static(model);
  const int n = static_cast<int>(grid.size());
  if (2 * n > 4096) throw ConfigError("grid too large for the dense spectral path (2N > 4096)");
  MatrixSampleBuffers buf;
  sample_matrix_into(model, grid, 0.0, buf);
  const auto row = kinetic_row(grid, model.mu);
  DenseOperator A(2 * n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      const cplx k = row[static_cast<std::size_t>((r - c + n) % n)];
      A.at(r, c) = k;
      A.at(n + r, n + c) = -k;
    }
    const double u = buf.u[static_cast<std::size_t>(r)];
    A.at(r, r) += u;
    A.at(n + r, n + r) -= u;
    const cplx p = buf.p12[static_cast<std::size_t>(r)];
    A.at(r, n + r) = p;
    A.at(n + r, r) = -std::conj(p);
  }
  return A;
}

BoundStateBasis scalar_spectrum_dense(const Field& potential, double tol) {
  require_dense_1d(potential.grid);
  const Grid& g = potential.grid;
  const int n = static_cast<int>(g.size());
  const auto row = kinetic_row(g, 0.0);
  MatR H(n, n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) H(r, c) = row[static_cast<std::size_t>((r - c + n) % n)].real();
    H(r, r) += potential.at(0, static_cast<std::size_t>(r)).real();
  }
  H = 0.5 * (H + H.transpose().eval());
  Eigen::SelfAdjointEigenSolver<MatR> es(H);
  if (es.info() != Eigen::Success) throw SolverError("dense symmetric eigensolver failed");
  BoundStateBasis basis;
  basis.self_adjoint = true;
  for (int i = 0; i < n; ++i) {
    const double lam = es.eigenvalues()(i);
    if (lam >= -tol) continue;
    basis.eigenvalues.push_back(cplx(lam, 0.0));
    basis.fields.push_back(field_from_coeffs(g, 1, es.eigenvectors().col(i).cast<cplx>()));
    basis.generalized.push_back(false);
  }
  basis.duals = basis.fields;
  return basis;
}

BoundStateBasis matrix_spectrum_dense(const HamiltonianSpec& model, const Grid& grid,
                                      double window_tol) {
  const DenseOperator Aop = dense_matrix_operator(model, grid);
  const MatC A = to_eigen(Aop);
  const DenseEig right = solve_dense(A);
  const DenseEig left = solve_dense(A.adjoint());

  const double mu = model.mu;
  BoundStateBasis basis;
  basis.self_adjoint = false;
  std::vector<int> picked;
  for (Eigen::Index i = 0; i < right.values.size(); ++i) {
    const cplx w = right.values(i);
    // Retention is decided by the real part alone: a strongly non-real value
    // in the gap must surface in the basis (and fail realness checks later),
    // not vanish silently.
    if (w.real() <= -mu + window_tol || w.real() >= mu - window_tol) continue;
    basis.eigenvalues.push_back(w);
    basis.fields.push_back(field_from_coeffs(grid, 2, right.vectors.col(i)));
    basis.generalized.push_back(false);
    picked.push_back(static_cast<int>(i));
  }
  const double scale = std::max(mu, 1.0);
  const auto pairing = pair_duals(basis.eigenvalues, left.values, scale);
  for (std::size_t i = 0; i < pairing.size(); ++i)
    basis.duals.push_back(field_from_coeffs(grid, 2, left.vectors.col(pairing[i])));
  return basis;
}

namespace {

// Sines of the principal angles between colspace(candidates) and
// colspace(space) (both orthonormal): the tail singular values of the
// projected residual. Counts how many fall below the dimensionless angle
// tolerance; values inside one decade of it are refused as ambiguous.
int count_contained(const MatC& candidates, const MatC& space, double angle_tol,
                    MatC* directions = nullptr) {
  MatC resid = candidates;
  if (space.cols() > 0) resid -= space * (space.adjoint() * candidates);
  Eigen::BDCSVD<MatC> svd(resid, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  int contained = 0;
  for (Eigen::Index i = 0; i < candidates.cols(); ++i) {
    const double sine = i < s.size() ? s(i) : 0.0;
    if (sine > angle_tol / 10.0 && sine < angle_tol * 10.0)
      throw SolverError("principal angle within one decade of the containment threshold",
                        sine);
    if (sine < angle_tol) ++contained;
  }
  if (directions)
    *directions = candidates * svd.matrixV().rightCols(contained);
  return contained;
}

// Minimum-norm solve M g = d from a precomputed full SVD of M (the solution is
// automatically orthogonal to ker(M)). adjoint = true solves M^H g = d.
MatC pinv_apply(const Eigen::BDCSVD<MatC>& svd, int rank, const MatC& d, bool adjoint) {
  const auto& s = svd.singularValues();
  const MatC& from = adjoint ? svd.matrixV() : svd.matrixU();
  const MatC& to = adjoint ? svd.matrixU() : svd.matrixV();
  MatC coeff = from.leftCols(rank).adjoint() * d;
  for (int i = 0; i < rank; ++i) coeff.row(i) /= s(i);
  return to.leftCols(rank) * coeff;
}

void append_columns(const MatC& m, std::vector<std::vector<cplx>>& out) {
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    std::vector<cplx> v(static_cast<std::size_t>(m.rows()));
    for (Eigen::Index r = 0; r < m.rows(); ++r) v[static_cast<std::size_t>(r)] = m(r, c);
    out.push_back(std::move(v));
  }
}

} // namespace

KernelAnalysis kernel_analysis(const DenseOperator& Aop, double tol_scale) {
  // Staircase construction: one SVD of A fixes ker(A), ker(A*), range(A),
  // range(A*). ker(A^2) grows by the kernel directions that are reachable,
  // i.e. dim(ker cap range); ker(A^3) by the length-2 generators reachable
  // modulo the kernel. Powers of A are never formed, so every rank decision
  // happens at the scale of A itself (thresholding sigma(A^3) at
  // tol*sigma_max(A)^3 would swallow any spectral gap g with g^3 near that
  // threshold and misread ordinary operators as ambiguous).
  const MatC A = to_eigen(Aop);
  const Eigen::Index n = A.rows();
  KernelAnalysis out;

  Eigen::BDCSVD<MatC> svd(A, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) {
    out.dim_ker = out.dim_ker2 = out.dim_ker3 = static_cast<int>(n);
    return out;
  }
  const int rank = rank_from(svd, tol_scale);
  out.dim_ker = static_cast<int>(n) - rank;
  out.dim_ker2 = out.dim_ker;
  out.dim_ker3 = out.dim_ker;
  if (out.dim_ker == 0) return out;

  const MatC v_null = svd.matrixV().rightCols(n - rank);   // ker(A)
  const MatC u_null = svd.matrixU().rightCols(n - rank);   // ker(A*)
  const MatC u_range = svd.matrixU().leftCols(rank);       // range(A)
  const MatC v_range = svd.matrixV().leftCols(rank);       // range(A*)
  const double angle_tol = 1e-6;

  // Length-2 chains: kernel directions inside the range have preimages.
  MatC reachable;
  const int grow2 = count_contained(v_null, u_range, angle_tol, &reachable);
  out.dim_ker2 += grow2;
  MatC gen(n, 0);
  if (grow2 > 0) {
    gen = pinv_apply(svd, rank, reachable, false);
    Eigen::HouseholderQR<MatC> qr(gen);
    gen = qr.householderQ() * MatC::Identity(n, grow2);
    append_columns(gen, out.chain_generators);
  }

  // Adjoint chains mirror the construction on A^H.
  MatC a_reachable;
  const int a_grow2 = count_contained(u_null, v_range, angle_tol, &a_reachable);
  if (a_grow2 != grow2)
    throw SolverError("adjoint chain count disagrees with the primal count",
                      std::abs(a_grow2 - grow2));
  if (a_grow2 > 0) {
    MatC agen = pinv_apply(svd, rank, a_reachable, true);
    Eigen::HouseholderQR<MatC> qr(agen);
    agen = qr.householderQ() * MatC::Identity(n, a_grow2);
    append_columns(agen, out.adjoint_chain_generators);
  }

  // Length-3 chains: a generator extends iff it is reachable modulo the
  // kernel, i.e. lies in range(A) + ker(A).
  if (grow2 > 0) {
    MatC uni(n, u_range.cols() + v_null.cols());
    uni << u_range, v_null;
    Eigen::BDCSVD<MatC> usvd(uni, Eigen::ComputeFullU);
    int urank = 0;
    const auto& us = usvd.singularValues();
    for (Eigen::Index i = 0; i < us.size(); ++i)
      if (us(i) > 1e-10 * us(0)) ++urank;
    out.dim_ker3 = out.dim_ker2 +
                   count_contained(gen, usvd.matrixU().leftCols(urank), angle_tol);
  }
  return out;
}

BoundStateBasis generalized_kernel(const HamiltonianSpec& model, const Grid& grid,
                                   BoundStateBasis basis, double tol_scale) {
  const DenseOperator A = dense_matrix_operator(model, grid);
  const KernelAnalysis ka = kernel_analysis(A, tol_scale);
  if (ka.chain_generators.size() != ka.adjoint_chain_generators.size())
    throw SolverError("kernel chain generator counts differ between operator and adjoint");
  for (std::size_t i = 0; i < ka.chain_generators.size(); ++i) {
    VecC v(static_cast<Eigen::Index>(ka.chain_generators[i].size()));
    VecC d(static_cast<Eigen::Index>(ka.adjoint_chain_generators[i].size()));
    for (Eigen::Index r = 0; r < v.size(); ++r) {
      v(r) = ka.chain_generators[i][static_cast<std::size_t>(r)];
      d(r) = ka.adjoint_chain_generators[i][static_cast<std::size_t>(r)];
    }
    basis.eigenvalues.push_back(cplx(0, 0));
    basis.fields.push_back(field_from_coeffs(grid, 2, v));
    basis.duals.push_back(field_from_coeffs(grid, 2, d));
    basis.generalized.push_back(true);
    basis.self_adjoint = false;
  }
  return basis;
}

Field Projector::operator()(const Field& f) const {
  return complement ? project_complement(basis, f) : project(basis, f);
}

std::pair<Projector, Projector> build_projections(const BoundStateBasis& basis) {
  const std::size_t n = basis.size();
  ProjectionBasis pb;
  pb.right = basis.fields;
  pb.left = basis.duals.empty() ? basis.fields : basis.duals;
  if (pb.left.size() != n) throw ConfigError("basis and dual fields differ in count");
  pb.coeff.assign(n * n, cplx(0, 0));
  if (n > 0) {
    MatC G(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i)
        G(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i)) =
            inner(pb.right[k], pb.left[i]);
    Eigen::JacobiSVD<MatC> svd(G);
    const auto& s = svd.singularValues();
    const double smin = s(s.size() - 1);
    if (smin <= 0 || s(0) / smin > 1e12)
      throw SolverError("projection Gram system is numerically singular (basis/dual mismatch)",
                        smin > 0 ? s(0) / smin : std::numeric_limits<double>::infinity());
    const MatC Ginv = G.inverse();
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = 0; i < n; ++i)
        pb.coeff[j * n + i] = Ginv(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
  Projector p_b{pb, false};
  Projector p_c{pb, true};
  return {p_b, p_c};
}

// --- Iterative scalar bound states ---------------------------------------------

namespace {

class ScalarOp {
public:
  ScalarOp(const Grid& g, const Field& potential) : grid_(g) {
    const std::size_t n = g.size();
    v_.resize(n);
    for (std::size_t i = 0; i < n; ++i) v_[i] = potential.at(0, i).real();
    ksym_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const auto xi = g.frequency(i);
      ksym_[i] = 0.5 * (xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]);
    }
    buf_.resize(n);
  }

  void apply(const std::vector<cplx>& x, std::vector<cplx>& y) {
    const std::size_t n = grid_.size();
    std::copy(x.begin(), x.end(), buf_.begin());
    fft_forward(grid_, buf_.data());
    for (std::size_t i = 0; i < n; ++i) buf_[i] *= ksym_[i];
    fft_inverse(grid_, buf_.data());
    for (std::size_t i = 0; i < n; ++i) y[i] = buf_[i] + v_[i] * x[i];
  }

  // Preconditioner: (-Lap/2 + shift)^{-1}, shift > 0.
  void precondition(std::vector<cplx>& r, double shift) {
    const std::size_t n = grid_.size();
    fft_forward(grid_, r.data());
    for (std::size_t i = 0; i < n; ++i) r[i] /= (ksym_[i] + shift);
    fft_inverse(grid_, r.data());
  }

  const Grid& grid() const { return grid_; }

private:
  Grid grid_;
  std::vector<double> v_;
  std::vector<double> ksym_;
  std::vector<cplx> buf_;
};

using Block = std::vector<std::vector<cplx>>;  // columns

cplx dotw(const Grid& g, const std::vector<cplx>& x, const std::vector<cplx>& y) {
  cplx acc(0, 0);
  for (std::size_t i = 0; i < x.size(); ++i) acc += x[i] * std::conj(y[i]);
  return acc * g.weight();
}

double normw(const Grid& g, const std::vector<cplx>& x) {
  double acc = 0;
  for (const auto& v : x) acc += std::norm(v);
  return std::sqrt(acc * g.weight());
}

// Weighted modified Gram-Schmidt; drops columns that lose rank.
void orthonormalize(const Grid& g, Block& block) {
  Block kept;
  for (auto& col : block) {
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& q : kept) {
        const cplx c = dotw(g, col, q);
        for (std::size_t i = 0; i < col.size(); ++i) col[i] -= c * q[i];
      }
    const double nrm = normw(g, col);
    if (nrm > 1e-12) {
      for (auto& v : col) v /= nrm;
      kept.push_back(std::move(col));
    }
  }
  block = std::move(kept);
}

} // namespace

BoundStateBasis bound_states_scalar(const Field& potential, int max_count, double tol) {
  if (potential.components != 1) throw ConfigError("scalar solver expects a 1-component potential");
  if (max_count <= 0) return BoundStateBasis{{}, {}, {}, {}, true};
  const Grid& g = potential.grid;
  const std::size_t n = g.size();
  ScalarOp op(g, potential);

  const int want = max_count;
  const int m = std::min<int>(want + 4, std::max<int>(want, static_cast<int>(n) / 4));

  CounterRng rng(0x5CA1AB1EULL, 7);
  Block X(static_cast<std::size_t>(m));
  for (auto& col : X) {
    col.resize(n);
    for (auto& v : col) v = rng.complex_normal();
  }
  orthonormalize(g, X);

  Block P;  // previous search directions
  std::vector<double> theta(static_cast<std::size_t>(m), 0.0);
  double best_residual = std::numeric_limits<double>::max();
  const int max_iter = 600;

  for (int iter = 0; iter < max_iter; ++iter) {
    // Assemble the trial subspace S = [X | W | P] (W from previous residuals).
    Block S = X;
    if (iter > 0) {
      // W: preconditioned residuals of current Ritz pairs.
      for (std::size_t i = 0; i < X.size(); ++i) {
        std::vector<cplx> hx(n);
        op.apply(X[i], hx);
        for (std::size_t k = 0; k < n; ++k) hx[k] -= theta[i] * X[i][k];
        op.precondition(hx, std::max(0.1, -theta[i]));
        S.push_back(std::move(hx));
      }
      for (auto& p : P) S.push_back(p);
    }
    orthonormalize(g, S);
    const int sdim = static_cast<int>(S.size());
    if (sdim == 0) throw SolverError("eigensolver subspace collapsed");

    // Rayleigh-Ritz on S.
    std::vector<std::vector<cplx>> HS(S.size());
    for (std::size_t i = 0; i < S.size(); ++i) {
      HS[i].resize(n);
      op.apply(S[i], HS[i]);
    }
    MatC M(sdim, sdim);
    for (int r = 0; r < sdim; ++r)
      for (int c = 0; c < sdim; ++c)
        M(r, c) = dotw(g, HS[static_cast<std::size_t>(c)], S[static_cast<std::size_t>(r)]);
    M = 0.5 * (M + M.adjoint().eval());
    Eigen::SelfAdjointEigenSolver<MatC> es(M);
    if (es.info() != Eigen::Success) throw SolverError("Rayleigh-Ritz eigensolver failed");

    const int keep = std::min<int>(m, sdim);
    Block Xnew(static_cast<std::size_t>(keep));
    Block Pnew(static_cast<std::size_t>(keep));
    for (int j = 0; j < keep; ++j) {
      Xnew[static_cast<std::size_t>(j)].assign(n, cplx(0, 0));
      Pnew[static_cast<std::size_t>(j)].assign(n, cplx(0, 0));
      for (int s = 0; s < sdim; ++s) {
        const cplx c = es.eigenvectors()(s, j);
        if (c == cplx(0, 0)) continue;
        const auto& col = S[static_cast<std::size_t>(s)];
        auto& xj = Xnew[static_cast<std::size_t>(j)];
        for (std::size_t k = 0; k < n; ++k) xj[k] += c * col[k];
        if (s >= static_cast<int>(X.size())) {
          auto& pj = Pnew[static_cast<std::size_t>(j)];
          for (std::size_t k = 0; k < n; ++k) pj[k] += c * col[k];
        }
      }
      theta[static_cast<std::size_t>(j)] = es.eigenvalues()(j);
    }
    X = std::move(Xnew);
    P = std::move(Pnew);

    // Convergence of the wanted leading columns.
    double worst = 0;
    std::vector<cplx> hx(n);
    for (int j = 0; j < std::min<int>(want, static_cast<int>(X.size())); ++j) {
      op.apply(X[static_cast<std::size_t>(j)], hx);
      for (std::size_t k = 0; k < n; ++k) hx[k] -= theta[static_cast<std::size_t>(j)] * X[static_cast<std::size_t>(j)][k];
      worst = std::max(worst, normw(g, hx) / std::max(1.0, std::abs(theta[static_cast<std::size_t>(j)])));
    }
    best_residual = std::min(best_residual, worst);
    if (worst < tol) {
      BoundStateBasis basis;
      basis.self_adjoint = true;
      for (int j = 0; j < std::min<int>(want, static_cast<int>(X.size())); ++j) {
        if (theta[static_cast<std::size_t>(j)] >= -tol) continue;
        Field f(g, 1);
        std::copy(X[static_cast<std::size_t>(j)].begin(), X[static_cast<std::size_t>(j)].end(),
                  f.comp(0).begin());
        const double nrm = norm_l2(f);
        if (nrm > 0) f *= cplx(1.0 / nrm, 0.0);
        basis.eigenvalues.push_back(cplx(theta[static_cast<std::size_t>(j)], 0.0));
        basis.fields.push_back(std::move(f));
        basis.generalized.push_back(false);
      }
      basis.duals = basis.fields;
      return basis;
    }
  }
  throw SolverError("scalar bound-state iteration did not converge", best_residual);
}

// --- Stability probe and admissibility ------------------------------------------

double stability_probe(const HamiltonianSpec& model, const Projector& Pc,
                       const std::vector<double>& t_samples, const std::vector<Field>& samples,
                       double dt) {
  require_static(model);
  std::vector<double> ts = t_samples;
  std::sort(ts.begin(), ts.end());
  if (!ts.empty() && ts.front() <= 0) throw ConfigError("stability probe times must be positive");
  Schedule lean;
  lean.norm_stride = 0;
  lean.skip_split_norm = true;
  double worst = 0;
  for (const auto& f : samples) {
    Field gfield = Pc(f);
    const double n0 = norm_l2(gfield);
    if (n0 < 1e-14) continue;
    double prev_t = 0;
    Field state = gfield;
    for (double t : ts) {
      state = evolve(state, model, prev_t, t, dt, nullptr, lean).final_state();
      prev_t = t;
      worst = std::max(worst, norm_l2(state) / n0);
    }
  }
  return worst;
}

bool localization_witness(const Field& u, double alpha) {
  const Grid& g = u.grid;
  const double L = g.length;
  // Log-sum-exp masses of e^{2 alpha |x|} |u|^2 over shells |x| in [k L/8, (k+1) L/8).
  std::array<double, 4> logmass;
  logmass.fill(-std::numeric_limits<double>::infinity());
  const double logw = std::log(g.weight());
  std::array<std::vector<double>, 4> terms;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto x = g.point(i);
    double r2 = 0;
    for (int d = 0; d < g.dim; ++d) r2 += x[d] * x[d];
    const double r = std::sqrt(r2);
    int shell = static_cast<int>(std::floor(r / (L / 8.0)));
    shell = std::min(shell, 3);
    const double mag = u.magnitude(i);
    if (mag <= 0) continue;
    terms[static_cast<std::size_t>(shell)].push_back(2.0 * alpha * r + 2.0 * std::log(mag) + logw);
  }
  for (int k = 0; k < 4; ++k) {
    auto& v = terms[static_cast<std::size_t>(k)];
    if (v.empty()) continue;
    const double mx = *std::max_element(v.begin(), v.end());
    double acc = 0;
    for (double t : v) acc += std::exp(t - mx);
    logmass[static_cast<std::size_t>(k)] = mx + std::log(acc);
  }
  const double total = std::max({logmass[0], logmass[1], logmass[2], logmass[3]});
  if (!std::isfinite(total)) return true;  // zero field: vacuously localized
  // Outermost shell must be negligible or not growing past the shell inside it
  // (factor 2 absorbs shell-volume growth in higher dimensions).
  if (logmass[3] < total - 30.0) return true;
  return logmass[3] <= logmass[2] + std::log(2.0);
}

AdmissibilityReport check_admissibility(const HamiltonianSpec& model, const Grid& grid,
                                        double window_tol) {
  const DenseOperator Aop = dense_matrix_operator(model, grid);
  const MatC A = to_eigen(Aop);
  const DenseEig right = solve_dense(A);
  const DenseEig left = solve_dense(A.adjoint());

  AdmissibilityReport rep;
  rep.mu = model.mu;
  rep.window_tol = window_tol;
  double eps0 = std::numeric_limits<double>::max();
  for (const auto& p : model.potentials) eps0 = std::min(eps0, p.decay_rate());
  if (model.potentials.empty()) eps0 = 1.0;
  rep.epsilon0 = eps0;
  const double alpha = 0.5 * eps0;

  const double scale = std::max(model.mu, 1.0);
  double max_abs = 0;
  for (Eigen::Index i = 0; i < right.values.size(); ++i)
    max_abs = std::max(max_abs, std::abs(right.values(i)));

  // In-gap modes (with duals) and localized embedded modes.
  BoundStateBasis window_basis;
  std::vector<std::size_t> window_mode_pos;
  bool all_real = true, all_localized = true;
  for (Eigen::Index i = 0; i < right.values.size(); ++i) {
    const cplx w = right.values(i);
    // Window membership by real part only; a large imaginary part is evidence
    // against admissibility and must be retained, not filtered.
    const bool in_window =
        w.real() > -model.mu + window_tol && w.real() < model.mu - window_tol;
    const bool beyond_gap = std::abs(w.real()) >= model.mu + 10.0 * window_tol;
    if (!in_window && !beyond_gap) continue;
    Field f = field_from_coeffs(grid, 2, right.vectors.col(i));
    const bool loc = localization_witness(f, alpha);
    if (in_window) {
      AdmissibilityMode mode;
      mode.value = w;
      mode.realness_defect = std::abs(w.imag());
      mode.inside_window = true;
      mode.localized = loc;
      window_mode_pos.push_back(rep.modes.size());
      rep.modes.push_back(mode);
      window_basis.eigenvalues.push_back(w);
      window_basis.fields.push_back(std::move(f));
      window_basis.generalized.push_back(false);
      if (mode.realness_defect > 1e-8 * std::max(1.0, std::abs(w.real()))) all_real = false;
      if (!loc) all_localized = false;
    } else if (loc && std::abs(w.imag()) < 1e-6 * scale) {
      AdmissibilityMode mode;
      mode.value = w;
      mode.realness_defect = std::abs(w.imag());
      mode.inside_window = false;
      mode.embedded = true;
      mode.localized = true;
      rep.modes.push_back(mode);
    }
  }

  // Dual fields for the in-gap modes.
  if (!window_basis.eigenvalues.empty()) {
    const auto pairing = pair_duals(window_basis.eigenvalues, left.values, scale);
    for (std::size_t i = 0; i < pairing.size(); ++i) {
      Field d = field_from_coeffs(grid, 2, left.vectors.col(pairing[i]));
      const bool dloc = localization_witness(d, alpha);
      rep.modes[window_mode_pos[i]].dual_localized = dloc;
      if (!dloc) all_localized = false;
      window_basis.duals.push_back(std::move(d));
    }
  }

  // Jordan termination at nonzero retained eigenvalues: distinct values only.
  std::vector<cplx> distinct;
  for (std::size_t i = 0; i < window_basis.eigenvalues.size(); ++i) {
    const cplx w = window_basis.eigenvalues[i];
    if (std::abs(w) <= 1e-8 * scale) continue;
    bool seen = false;
    for (const cplx& d : distinct)
      if (std::abs(d - w) < 1e-8 * scale) seen = true;
    if (!seen) distinct.push_back(w);
  }
  for (const cplx& w : distinct) {
    MatC shifted = A;
    for (Eigen::Index d = 0; d < shifted.rows(); ++d) shifted(d, d) -= w;
    // One SVD of the shifted operator decides both its kernel and whether the
    // kernel meets the range (a nontrivial meet is exactly a longer chain).
    // Squaring the shift would move the rank threshold to sigma_max^2 and
    // misjudge eigenvalue separations far below sigma_max.
    Eigen::BDCSVD<MatC> ssvd(shifted, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const int r1 = rank_from(ssvd, 1e-8);
    const Eigen::Index nn = shifted.rows();
    bool ok = true;
    if (r1 < nn)
      ok = count_contained(ssvd.matrixV().rightCols(nn - r1),
                           ssvd.matrixU().leftCols(r1), 1e-6) == 0;
    if (!ok) rep.jordan_nonzero_terminated = false;
    for (auto& mode : rep.modes)
      if (mode.inside_window && std::abs(mode.value - w) < 1e-8 * scale)
        mode.jordan_terminated = ok;
  }

  // Kernel structure at zero (chains appended to the basis for P_c).
  const KernelAnalysis ka = kernel_analysis(Aop, 1e-8);
  rep.kernel_dim = ka.dim_ker;
  rep.kernel2_dim = ka.dim_ker2;
  rep.kernel3_dim = ka.dim_ker3;
  rep.jordan_zero_terminated = (ka.dim_ker2 == ka.dim_ker3);
  BoundStateBasis full_basis = window_basis;
  if (!ka.chain_generators.empty())
    full_basis = generalized_kernel(model, grid, std::move(full_basis), 1e-8);

  bool embedded_found = false;
  for (const auto& mode : rep.modes) embedded_found = embedded_found || mode.embedded;

  // Stability probe on deterministic band-limited samples.
  auto [pb, pc] = build_projections(full_basis);
  (void)pb;
  CounterRng rng(0xAD0177EAULL, 3);
  std::vector<Field> probes;
  for (int k = 0; k < 4; ++k) probes.push_back(random_bandlimited_field(grid, 2, 0.5, rng));
  rep.stability_probe_value = stability_probe(model, pc, {1.0, 3.0, 6.0, 10.0}, probes, 0.02);

  rep.admissible = all_real && all_localized && rep.jordan_zero_terminated &&
                   rep.jordan_nonzero_terminated && !embedded_found;
  return rep;
}

} // namespace ctsim
