#pragma once

// Seeded instance generators. Everything random flows from a caller-owned Rng.

#include "tsep/rng.hpp"
#include "tsep/separability.hpp"
#include "tsep/toeplitz.hpp"

namespace tsep {

/// Desk-scale limits enforced by the generators: 1 ≤ n ≤ 12, 1 ≤ p ≤ 8.
void check_instance_size(int n, int p);

CMatrix random_hermitian(int p, Rng& rng);
/// X*X with X a rank×p complex Gaussian matrix.
CMatrix random_gram(int p, int rank, Rng& rng);
CMatrix random_rank_one_projection(int p, Rng& rng);
/// Product of random complex plane rotations and a random diagonal phase.
CMatrix random_unitary(int q, Rng& rng);

/// Σ_j T_n(λ_j) ⊗ b_j for m random unit λ_j and full-rank random Gram b_j.
BlockToeplitz gen_atoms(int n, int p, int m, Rng& rng, AtomicDecomposition* truth = nullptr);

/// τ_ℓ = (1/2π)∫ e^{−iℓθ} G(e^{iθ})* G(e^{iθ}) dθ for a random matrix
/// polynomial G of degree n−1, by 4096-point trapezoid quadrature (exact for
/// this integrand), normalized to tr τ₀ = p.
BlockToeplitz gen_density(int n, int p, Rng& rng);

struct PureInstance {
  BlockToeplitz t;  // T_n(λ⁻¹) ⊗ αQ
  cplx lambda;
  double alpha = 0.0;
  CMatrix q;
};
PureInstance gen_pure(int n, int p, Rng& rng);

BlockToeplitz gen_universal(int n, cplx lambda);

/// w* T_n(z⁻¹) w for a random n×p matrix w.
TrigMatrixPoly gen_dualpure(int n, int p, Rng& rng, CMatrix* w_out = nullptr);

BlockToeplitz random_hermitian_toeplitz(int n, int p, Rng& rng);
TrigMatrixPoly random_hermitian_trigpoly(int n, int p, Rng& rng);

}  // namespace tsep
