#pragma once

// Dense complex linear algebra used throughout tsep: a self-contained
// Hermitian eigensolver (cyclic complex Jacobi), PSD tests, kernels and
// factors, nonnegative least squares and PSD-constrained least squares.

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace tsep {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

/// Default relative tolerance for rank and positivity decisions.
inline constexpr double kDefaultTol = 1e-9;

double max_abs(const CMatrix& a);

/// max(1, ‖a‖_max): the scale every relative tolerance is measured against.
double tol_scale(const CMatrix& a);

/// ‖a − a*‖_max ≤ rel_tol · ‖a‖_max.
bool is_hermitian(const CMatrix& a, double rel_tol = 1e-12);

CMatrix hermitian_part(const CMatrix& a);

struct HermEig {
  RVector values;   // ascending
  CMatrix vectors;  // unitary, columns are eigenvectors
  int sweeps = 0;
};

/// Eigendecomposition A = V·diag(values)·V* of a Hermitian matrix.
///
/// Cyclic complex Jacobi rotations; stops once the off-diagonal Frobenius
/// mass is at most 1e-13·‖A‖_F. Throws NotHermitian, or NoConvergence after
/// 64 sweeps.
HermEig herm_eig(const CMatrix& a);

/// Smallest eigenvalue only. Closed forms for orders 1 and 2.
double min_eigenvalue(const CMatrix& a);

struct PsdTest {
  bool psd = false;
  double min_eigenvalue = 0.0;
  CVector witness;  // unit eigenvector for min_eigenvalue
};

/// λ_min(A) ≥ −tol·max(1, ‖A‖_max).
PsdTest is_psd(const CMatrix& a, double tol = kDefaultTol);

/// Orthonormal columns spanning the eigenvectors whose eigenvalue is at most
/// tol·‖A‖_max. Returns an n×0 matrix when A is numerically nonsingular.
CMatrix kernel_basis(const CMatrix& a, double tol = kDefaultTol);

/// C with B = C*C and rows(C) = numerical rank of B at tol.
CMatrix psd_factor(const CMatrix& b, double tol = kDefaultTol);

/// Nearest PSD matrix in Frobenius norm (eigenvalue clipping at zero).
CMatrix project_psd(const CMatrix& a);

struct NnlsOptions {
  int max_iterations = 0;  // 0: 3·cols + 50
  double kkt_tol = 1e-11;  // relative to max(1, ‖M‖_F·‖y‖)
};

/// argmin_{x ≥ 0} ‖Mx − y‖₂ by the Lawson–Hanson active-set method.
RVector nnls(const RMatrix& m, const RVector& y, const NnlsOptions& options = {});

// ---------------------------------------------------------------------------
// PSD-constrained least squares over Laurent coefficient sequences.
//
// Unknowns are p×p Hermitian PSD blocks b_1..b_m. Atom j contributes the
// scalar profile a_j(ℓ) to coefficient slot ℓ, so the model coefficient is
// Σ_j a_j(ℓ)·b_j. The objective is Σ_ℓ w_ℓ ‖Σ_j a_j(ℓ) b_j − τ_ℓ‖_F².
//
// Profiles must satisfy a_j(−ℓ) = conj a_j(ℓ) on mirrored slots and the targets
// τ_{−ℓ} = τ_ℓ*, which keeps the gradient Hermitian and the Gram matrix real.
// ---------------------------------------------------------------------------

struct PsdLsqProblem {
  Eigen::Index p = 1;
  std::vector<double> weights;   // one per coefficient slot
  CMatrix profiles;              // atoms × slots
  std::vector<CMatrix> targets;  // one p×p block per slot
};

struct PsdLsqOptions {
  int max_iterations = 20000;
  double stationarity_tol = 1e-9;  // on the gradient mapping, scaled
  double residual_target = 0.0;    // absolute; stop early once reached
  bool throw_on_budget = true;
  bool record_objective = false;
};

struct PsdLsqResult {
  std::vector<CMatrix> blocks;
  double residual = 0.0;  // sqrt of the weighted objective
  double stationarity = 0.0;
  int iterations = 0;
  bool converged = false;
  double lipschitz = 0.0;
  std::vector<double> objective;  // per iteration when recorded
};

/// Projected gradient with step 1/L, L the top eigenvalue of the atom Gram
/// (power iteration), accelerated with monotone restarts. Throws
/// NoConvergence when the iteration budget runs out and throw_on_budget holds.
PsdLsqResult psd_lsq(const PsdLsqProblem& problem, const PsdLsqOptions& options = {},
                     const std::vector<CMatrix>& warm_start = {});

}  // namespace tsep
