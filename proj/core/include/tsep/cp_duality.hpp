#pragma once

// Complete positivity of maps out of the two operator systems, decided by the
// cone tests of the corresponding tensor elements, and randomized probing of
// Toeplitz complete positivity for maps on M_p.

#include <cstdint>
#include <string>
#include <vector>

#include "tsep/positivity.hpp"
#include "tsep/toeplitz.hpp"

namespace tsep {

/// φ from C(S¹)₍ₙ₎: CP iff the block-Toeplitz T with τ_{−k} = φ(χ_k) is PSD.
/// Throws InconsistentAdjoints when φ(χ_{−k}) ≠ φ(χ_k)*.
PositivityCertificate is_cp_dual_map(const DualSystemMap& phi, double tol = kDefaultTol);

/// φ from C(S¹)⁽ⁿ⁾: CP iff F with c_ℓ = φ(r_{−ℓ}) is pointwise PSD.
PositivityCertificate is_cp_toeplitz_map(const DualSystemMap& phi, std::int64_t grid = 0, double tol = kDefaultTol);

/// The tensor element behind each map, as used by the two tests above.
BlockToeplitz toeplitz_of_dual_map(const DualSystemMap& phi);
TrigMatrixPoly trigpoly_of_toeplitz_map(const DualSystemMap& phi);

/// Linear ψ: M_p → M_q stored by the images of the matrix units E_ij
/// (row-major, index i·p + j).
class MatrixMap {
 public:
  MatrixMap(int p, int q, std::vector<CMatrix> unit_images, std::string name = "custom");

  static MatrixMap identity(int p);
  static MatrixMap transpose(int p);
  /// x ↦ (tr x / p)·I_p.
  static MatrixMap depolarizing(int p);

  int p() const { return p_; }
  int q() const { return q_; }
  const std::string& name() const { return name_; }
  const std::vector<CMatrix>& unit_images() const { return units_; }

  CMatrix apply(const CMatrix& x) const;

 private:
  int p_;
  int q_;
  std::vector<CMatrix> units_;
  std::string name_;
};

/// ψ⁽ⁿ⁾ on the Toeplitz subspace: τ_ℓ ↦ ψ(τ_ℓ).
BlockToeplitz apply_map_blockwise(const MatrixMap& psi, const BlockToeplitz& t);

inline constexpr std::uint64_t kDefaultProbeSeed = 1952577;

struct ProbeViolation {
  int n = 0;
  int trial = 0;
  std::string generator;  // "atoms" or "density"
  BlockToeplitz input;
  double min_eigenvalue = 0.0;  // of the assembled image
  CVector witness;              // unit v with ⟨ψ⁽ⁿ⁾(T)v, v⟩ = min_eigenvalue
};

struct ProbeReport {
  std::uint64_t seed = kDefaultProbeSeed;
  int n_max = 0;
  int trials = 0;  // per n
  int checked = 0;
  double tol = kDefaultTol;
  std::vector<ProbeViolation> violations;
  double max_negative_eigenvalue = 0.0;  // most negative λ_min seen (0 if none)
};

/// For n = 2..n_max, `trials` random separable PSD inputs per n (alternating
/// the atoms and density generators) pushed through ψ⁽ⁿ⁾ and tested for PSD.
ProbeReport toeplitz_cp_probe(const MatrixMap& psi, int n_max, int trials,
                              std::uint64_t seed = kDefaultProbeSeed, double tol = kDefaultTol);

struct PointEvaluationFit {
  bool matches = false;
  cplx lambda = 1.0;
  double alpha = 0.0;
  CMatrix q;
  double max_error = 0.0;  // max_k ‖φ(χ_k) − αλ^k Q‖_max
};

/// Fits φ(χ_k) = α λ^k Q (the form f ↦ α f(λ) Q) from the basis values.
PointEvaluationFit fit_point_evaluation(const DualSystemMap& phi, double tol = 1e-9);

}  // namespace tsep
