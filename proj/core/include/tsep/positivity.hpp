#pragma once

// Membership tests for the two positive cones: PSD assembled block-Toeplitz
// matrices, and matrix trig polynomials that are PSD at every point of S¹.

#include <cstdint>
#include <optional>
#include <string_view>

#include "tsep/matcore.hpp"
#include "tsep/toeplitz.hpp"

namespace tsep {

enum class Verdict { Positive, StrictlyPositive, NotPositive };

std::string_view to_string(Verdict v);

/// Parameters of a sampled certificate, enough to redo it from scratch.
struct GridCertificate {
  std::int64_t grid = 0;       // K, samples at θ_k = 2πk/K
  double min_sample = 0.0;     // smallest λ_min(F(e^{iθ_k})) computed exactly
  double lipschitz = 0.0;      // L = 2(n−1)Σ‖c_ℓ‖₂
  double curvature = 0.0;      // M = Σ ℓ²‖c_ℓ‖₂
  double penalty = 0.0;        // min(L·π/K, M·(π/K)²/2)
  int levels = 0;              // grids visited
};

struct PositivityCertificate {
  Verdict verdict = Verdict::NotPositive;
  double margin = 0.0;  // λ_min found (assembled matrix, or smallest sample)
  double tol = kDefaultTol;
  double scale = 1.0;   // tolerances are tol·scale
  CVector witness;      // NotPositive: unit v with ⟨Mv, v⟩ = margin
  std::optional<double> witness_theta;    // trig polynomials only
  std::optional<GridCertificate> grid;    // trig polynomials only

  bool positive() const { return verdict != Verdict::NotPositive; }
};

/// λ_min of the assembled matrix against ±tol·max(1, ‖T‖_max).
PositivityCertificate check_toeplitz_psd(const BlockToeplitz& t, double tol = kDefaultTol);

inline constexpr std::int64_t kMaxGrid = std::int64_t{1} << 20;

/// Default starting grid max(256, 8np).
std::int64_t default_grid(const TrigMatrixPoly& f);

/// Pointwise positivity on S¹ by sampling plus a bound on how far λ_min can
/// dip between grid points. Grids double (nested) until the verdict is
/// certified; throws GridExhausted past kMaxGrid. grid = 0 picks the default.
PositivityCertificate check_trigpoly_psd(const TrigMatrixPoly& f, std::int64_t grid = 0,
                                         double tol = kDefaultTol);

/// One pass over a fixed grid without escalation. Returns nullopt when the
/// grid is too coarse to decide.
std::optional<PositivityCertificate> check_trigpoly_psd_at(const TrigMatrixPoly& f, std::int64_t grid,
                                                           double tol = kDefaultTol);

}  // namespace tsep
