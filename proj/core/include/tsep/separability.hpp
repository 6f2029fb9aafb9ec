#pragma once

// Separable (atomic) decompositions T = Σ_j T_n(λ_j) ⊗ b_j of positive
// block-Toeplitz matrices, λ_j on the unit circle and b_j PSD.

#include <string>
#include <vector>

#include "tsep/errors.hpp"
#include "tsep/matcore.hpp"
#include "tsep/toeplitz.hpp"

namespace tsep {

struct Atom {
  cplx lambda;
  CMatrix b;
};

struct AtomicDecomposition {
  int n = 1;
  int p = 1;
  std::vector<Atom> atoms;
  double residual = 0.0;

  BlockToeplitz reconstruct() const;
};

/// Frobenius norm of the assembled difference, recomputed from scratch.
double reconstruction_residual(const AtomicDecomposition& dec, const BlockToeplitz& target);

/// Shortest arc between two points of the circle.
double angular_distance(cplx a, cplx b);

/// Raised by decompose_block and the Toeplitz⊗Toeplitz engine when the budget
/// runs out; carries the best decomposition found so far.
class BudgetExhaustedError : public Error {
 public:
  BudgetExhaustedError(const std::string& what, AtomicDecomposition best)
      : Error(ErrorCode::BudgetExhausted, what), best_(std::move(best)) {}
  const AtomicDecomposition& best() const { return best_; }

 private:
  AtomicDecomposition best_;
};

/// The scalar order unit over the n-th roots of unity, weights 1/n.
AtomicDecomposition decompose_identity(int n);

/// Exact scalar decomposition (p = 1): Pisarenko shift, unit-circle roots of a
/// kernel polynomial, NNLS weights, then the shifted-off identity re-expanded
/// over roots of unity. Residual is guaranteed ≤ tol·max(1, ‖T‖_F).
AtomicDecomposition caratheodory_scalar(const BlockToeplitz& t, double tol = kDefaultTol);

struct GreedyOptions {
  double tol = 1e-6;  // on residual / max(1, ‖T‖_F)
  int max_atoms = 60;
  int max_rounds = 200;
  int grid = 1024;
  int inner_iterations = 400;  // psd_lsq iterations per round
};

/// Greedy atomic pursuit for p ≥ 1: add the angle maximising
/// λ_max((γ_n(e^{iθ}) ⊗ I)* R (γ_n(e^{iθ}) ⊗ I)) for the current residual R,
/// refit all blocks, repeat. Throws BudgetExhaustedError.
AtomicDecomposition decompose_block(const BlockToeplitz& t, const GreedyOptions& options = {});

struct ProductAtom {
  cplx lambda;
  cplx mu;
  double weight = 0.0;
};

struct ToeplitzToeplitzDecomposition {
  std::vector<ProductAtom> products;  // x ≈ Σ w T_2(λ) ⊗ T_2(μ)
  AtomicDecomposition block;          // same sum grouped by λ, b = Σ w T_2(μ)
};

/// True when t has n = p = 2 and every block is itself a 2×2 Toeplitz matrix.
bool is_toeplitz_toeplitz(const BlockToeplitz& t, double tol = 1e-12);

struct Grid2dOptions {
  double tol = 1e-7;  // on residual / max(1, ‖x‖_F)
  int grid = 128;
  int refinements = 12;
};

/// Strictly positive x in C(S¹)⁽²⁾ ⊗ C(S¹)⁽²⁾ by NNLS over a (θ, φ) grid of
/// product atoms, then local grid refinement around the active ones.
ToeplitzToeplitzDecomposition decompose_toeplitz_toeplitz(const BlockToeplitz& x, const Grid2dOptions& options = {});

struct PurityResult {
  bool pure = false;
  cplx lambda = 1.0;  // T = T_n(λ⁻¹) ⊗ αQ
  double alpha = 0.0;
  CMatrix q;
  std::string reason;  // why not pure
};

PurityResult purity_check(const BlockToeplitz& t, double tol = kDefaultTol);

}  // namespace tsep
