#pragma once

// One-sided certificates for the dual cone of matrix trig polynomials: a
// rank-one range witness for entanglement and a dictionary search for
// separable decompositions F = Σ f_j b_j.

#include <optional>
#include <string_view>
#include <vector>

#include "tsep/matcore.hpp"
#include "tsep/toeplitz.hpp"

namespace tsep {

enum class EntanglementVerdict { Entangled, SeparableFound, Undecided };

std::string_view to_string(EntanglementVerdict v);

/// Two samples whose rank-one ranges differ.
struct RangeEvidence {
  double theta1 = 0.0;
  double theta2 = 0.0;
  CVector range1;  // unit vector spanning ran F(e^{iθ₁})
  CVector range2;
  double sine = 0.0;  // sine of the principal angle between the two ranges
};

struct SeparableTerm {
  TrigMatrixPoly f;  // scalar, nonnegative on the circle
  CMatrix b;         // PSD
};

struct EntanglementCertificate {
  EntanglementVerdict verdict = EntanglementVerdict::Undecided;
  int samples = 0;
  int max_rank = 0;            // witness: largest numerical rank seen
  std::vector<int> ranks;      // witness: rank at each θ_k = 2πk/samples
  std::optional<RangeEvidence> evidence;
  std::vector<SeparableTerm> terms;  // search: the decomposition found
  double residual = 0.0;             // search: max over the fit grid of ‖F − Σ f_j b_j‖₂
  double verify_residual = 0.0;      // search: the same on a fresh 4K grid
  int grid = 0;
  int dictionary_size = 0;
};

/// Samples F at max(samples, 4(n−1)+1) points. Entangled when every sampled
/// rank is ≤ 1 and two rank-one ranges are at principal angle ≥ 1e-6;
/// Undecided otherwise. Throws NotPositive, ZeroInput.
EntanglementCertificate rank_one_range_witness(const TrigMatrixPoly& f, int samples = 64, double tol = kDefaultTol);

struct DualSearchOptions {
  int grid = 0;          // 0: max(64, 8n)
  double tol = 1e-8;     // on the grid residual, relative to max(1, ‖c‖_max)
  int max_terms = 40;
  int angles = 64;       // root angles in the dictionary
  int radii = 4;         // root moduli in (0, 1]
};

/// Greedy fit of F by products f_j(z) b_j with f_j = |g_j|², g_j of degree
/// < n with roots drawn from a polar grid. SeparableFound or Undecided.
EntanglementCertificate separability_search_dual(const TrigMatrixPoly& f, const DualSearchOptions& options = {});

/// F(z) = w* T_n(z⁻¹) w, i.e. c_ℓ = w* r_{−ℓ} w, for w of shape n×p.
TrigMatrixPoly dual_pure_element(const CMatrix& w);

}  // namespace tsep
