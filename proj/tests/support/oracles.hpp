#pragma once

// Reference computations for the tests. Everything here goes through Eigen's
// own solvers or explicit loops, never through the tsep routine under test.

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "tsep/separability.hpp"
#include "tsep/toeplitz.hpp"

namespace oracle {

using tsep::cplx;
using tsep::CMatrix;
using tsep::CVector;
using tsep::RVector;

CMatrix kron(const CMatrix& a, const CMatrix& b);

/// np×np matrix with block (k, j) = τ_{k−j}, by explicit loops.
CMatrix assemble(const tsep::BlockToeplitz& t);

/// γγ* for γ = (1, λ, …, λ^{n−1}).
CMatrix rank_one_toeplitz(int n, cplx lambda);

/// Ascending eigenvalues from Eigen::SelfAdjointEigenSolver.
RVector eigenvalues(const CMatrix& a);
double min_eig(const CMatrix& a);
double max_eig(const CMatrix& a);

/// Closed-form smallest eigenvalue of a Hermitian matrix of order 1, 2 or 3.
double min_eig_closed_form(const CMatrix& a);

/// Σ_ℓ e^{iℓθ} c_ℓ, term by term.
CMatrix eval_direct(const tsep::TrigMatrixPoly& f, double theta);

/// min over θ_k = 2πk/K of λ_min(F(e^{iθ_k})), p ≤ 3, closed-form eigenvalues.
double brute_force_min(const tsep::TrigMatrixPoly& f, std::int64_t grid);

/// ‖Σ_j T_n(λ_j) ⊗ b_j − T‖_F with every term built as a Kronecker product.
double decomposition_residual(const tsep::AtomicDecomposition& dec, const tsep::BlockToeplitz& t);

/// For each true atom, the angular distance to the nearest recovered atom and
/// the weight (scalar b) difference with it. Returns {max angle error, max weight error}.
std::pair<double, double> match_scalar_atoms(const std::vector<tsep::Atom>& truth, const std::vector<tsep::Atom>& got);

/// Numerical rank: eigenvalues above rel·max(1, ‖a‖_max).
int rank(const CMatrix& a, double rel);

}  // namespace oracle
