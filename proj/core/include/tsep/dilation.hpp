#pragma once

// Factorisation T = (1_n ⊗ w)* T_n(u) (1_n ⊗ w) with u a unitary of finite
// spectrum, built from an atomic decomposition.

#include <string>
#include <vector>

#include "tsep/separability.hpp"
#include "tsep/toeplitz.hpp"

namespace tsep {

struct SpectralProjection {
  cplx lambda;
  int mult = 0;  // rank of the projection, a contiguous coordinate range
};

struct DilationFactorization {
  int q = 0;
  CMatrix u;  // q×q, diagonal in the coordinates below
  CMatrix w;  // q×p
  std::vector<SpectralProjection> spectrum;
  std::vector<std::string> warnings;

  /// p_j as a q×q coordinate projection.
  CMatrix projection(std::size_t j) const;
};

/// Stacks the factors c_j of b_j = c_j* c_j into w and sets u = Σ λ_j p_j.
/// Numerically zero blocks are dropped with a warning; DegenerateAtom when
/// nothing is left.
DilationFactorization naimark_from_atoms(const AtomicDecomposition& dec);

/// τ_ℓ = u^ℓ, τ_{−ℓ} = (u*)^ℓ. Throws NotUnitary past 1e-10.
BlockToeplitz universal_at_unitary(int n, const CMatrix& u);

struct FactorizationCheck {
  double residual = 0.0;           // ‖assemble(T) − (1⊗w)* assemble(T_n(u)) (1⊗w)‖_F
  double coefficient_error = 0.0;  // max_ℓ ‖τ_ℓ − w* u^ℓ w‖_max
};

FactorizationCheck verify_factorization(const BlockToeplitz& t, const DilationFactorization& fac);

}  // namespace tsep
