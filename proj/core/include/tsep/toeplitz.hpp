#pragma once

// Elements of the Toeplitz operator system tensored with M_p and of its dual,
// the matrix-valued trigonometric polynomials of degree below n.
//
// Index convention used everywhere in tsep: a BlockToeplitz with coefficients
// τ_ℓ, ℓ = −n+1..n−1, assembles to the np×np matrix whose (k, j) block is
// τ_{k−j}, with k, j zero-based.

#include <span>
#include <vector>

#include "tsep/errors.hpp"
#include "tsep/matcore.hpp"

namespace tsep {

/// Maps z with ||z| − 1| ≤ 1e-9 onto the circle; throws NotOnCircle otherwise.
cplx normalize_unit(cplx z);

/// Storage shared by both coefficient types: blocks for ℓ = −n+1..n−1 kept in
/// ascending order, including the zero ones.
template <class Derived>
class LaurentCoefficients {
 public:
  LaurentCoefficients() = default;
  LaurentCoefficients(int n, int p);
  LaurentCoefficients(int n, int p, std::vector<CMatrix> coeffs);

  int n() const { return n_; }
  int p() const { return p_; }

  const CMatrix& coeff(int l) const { return coeffs_.at(static_cast<std::size_t>(l + n_ - 1)); }
  CMatrix& coeff(int l) { return coeffs_.at(static_cast<std::size_t>(l + n_ - 1)); }
  const std::vector<CMatrix>& coeffs() const { return coeffs_; }

  /// coeff(−ℓ) = coeff(ℓ)* entrywise within tol·max(1, max entry).
  bool has_hermitian_symmetry(double tol = 1e-12) const;
  double max_abs_coeff() const;

  Derived& operator+=(const Derived& other);
  Derived& operator-=(const Derived& other);
  Derived& operator*=(cplx s);
  friend Derived operator+(Derived a, const Derived& b) { return a += b; }
  friend Derived operator-(Derived a, const Derived& b) { return a -= b; }
  friend Derived operator*(cplx s, Derived a) { return a *= s; }

 private:
  void check_same_shape(const Derived& other) const;

  int n_ = 0;
  int p_ = 0;
  std::vector<CMatrix> coeffs_;
};

/// An element of C(S¹)⁽ⁿ⁾ ⊗ M_p, i.e. an np×np block-Toeplitz matrix.
class BlockToeplitz : public LaurentCoefficients<BlockToeplitz> {
 public:
  using LaurentCoefficients::LaurentCoefficients;

  static BlockToeplitz order_unit(int n, int p);
  /// Reads τ_ℓ off the first block column and block row of an np×np matrix.
  static BlockToeplitz from_assembled(const CMatrix& m, int n, int p);

  bool is_hermitian(double tol = 1e-12) const { return has_hermitian_symmetry(tol); }
  /// Frobenius norm of the assembled matrix, Σ (n−|ℓ|)‖τ_ℓ‖_F² under the root.
  double frobenius_norm() const;
  /// Scalar Toeplitz matrix formed by entry (i, j) of every block.
  BlockToeplitz entry(Eigen::Index i, Eigen::Index j) const;
};

/// An element of C(S¹)₍ₙ₎ ⊗ M_p: F(z) = Σ_ℓ z^ℓ c_ℓ on the unit circle.
class TrigMatrixPoly : public LaurentCoefficients<TrigMatrixPoly> {
 public:
  using LaurentCoefficients::LaurentCoefficients;

  static TrigMatrixPoly constant(int n, const CMatrix& value);
  static TrigMatrixPoly order_unit(int n, int p) { return constant(n, CMatrix::Identity(p, p)); }

  bool is_hermitian_valued(double tol = 1e-12) const { return has_hermitian_symmetry(tol); }
};

/// The flip u_n = Σ e_{i, n−i+1}; conjugation by it reverses Toeplitz coefficients.
struct FlipUnitary {
  int n = 1;
  CMatrix matrix() const;
};

/// r_ℓ: ones on the ℓ-th subdiagonal (superdiagonal for ℓ < 0).
CMatrix shift_power(int n, int l);

/// γ_n(z) = (1, z, …, z^{n−1})ᵗ.
CVector gamma(int n, cplx z);

/// T_n(λ) = γ_n(λ)γ_n(λ)*, coefficients τ_ℓ = λ^ℓ.
BlockToeplitz universal_toeplitz(int n, cplx lambda);

/// T_n(z) as an M_n-valued trigonometric polynomial (c_ℓ = r_ℓ).
TrigMatrixPoly universal_trigpoly(int n);

/// t ⊗ b for scalar t.
BlockToeplitz tensor(const BlockToeplitz& scalar, const CMatrix& b);

CMatrix assemble(const BlockToeplitz& t);

/// F(z) by Horner's rule; Hermitian-valued inputs give exactly Hermitian output.
CMatrix eval(const TrigMatrixPoly& f, cplx z);

/// φ_t(f) = Σ_k τ_{−k} f̂(k) for scalar t and f of the same order.
cplx duality_pair(const BlockToeplitz& t, const TrigMatrixPoly& f);

/// (u_n ⊗ I_p)* T (u_n ⊗ I_p), computed on the assembled matrix and re-read.
BlockToeplitz flip_conjugate(const BlockToeplitz& t);

enum class MapDirection {
  FromDual,      // C(S¹)₍ₙ₎ → M_p, values on χ_k
  FromToeplitz,  // C(S¹)⁽ⁿ⁾ → M_p, values on r_k
};

/// A linear map out of one of the two operator systems, stored by its values
/// on the canonical basis (χ_k or r_k, k = −n+1..n−1).
class DualSystemMap {
 public:
  DualSystemMap(MapDirection direction, int n, int p, std::vector<CMatrix> values);

  MapDirection direction() const { return direction_; }
  int n() const { return n_; }
  int p() const { return p_; }
  const CMatrix& value(int k) const { return values_.at(static_cast<std::size_t>(k + n_ - 1)); }
  const std::vector<CMatrix>& values() const { return values_; }

  /// value(−k) = value(k)* for all k.
  bool has_consistent_adjoints(double tol = 1e-12) const;

  /// FromDual only: Σ_k f̂(k)·value(k) for scalar f.
  CMatrix apply(const TrigMatrixPoly& f) const;
  /// FromToeplitz only: Σ_ℓ τ_ℓ·value(ℓ) for scalar t.
  CMatrix apply(const BlockToeplitz& t) const;

 private:
  MapDirection direction_;
  int n_;
  int p_;
  std::vector<CMatrix> values_;
};

/// T̂: χ_k ↦ τ_{−k}.
DualSystemMap hat_of_toeplitz(const BlockToeplitz& t);
/// F̂: r_k ↦ c_{−k}.
DualSystemMap hat_of_trigpoly(const TrigMatrixPoly& f);

/// Least-squares fit of target by Σ_j T_n(λ_j) ⊗ b_j over PSD blocks b_j, in
/// the Frobenius norm of the assembled matrices.
PsdLsqResult psd_lsq(std::span<const cplx> atoms, const BlockToeplitz& target,
                     const PsdLsqOptions& options = {}, const std::vector<CMatrix>& warm_start = {});

// ---------------------------------------------------------------------------

template <class Derived>
LaurentCoefficients<Derived>::LaurentCoefficients(int n, int p)
    : n_(n), p_(p) {
  if (n < 1 || p < 1) throw Error(ErrorCode::DimensionMismatch, "coefficient table needs n ≥ 1 and p ≥ 1");
  coeffs_.assign(static_cast<std::size_t>(2 * n - 1), CMatrix::Zero(p, p));
}

template <class Derived>
LaurentCoefficients<Derived>::LaurentCoefficients(int n, int p, std::vector<CMatrix> coeffs)
    : n_(n), p_(p), coeffs_(std::move(coeffs)) {
  if (n < 1 || p < 1) throw Error(ErrorCode::DimensionMismatch, "coefficient table needs n ≥ 1 and p ≥ 1");
  if (coeffs_.size() != static_cast<std::size_t>(2 * n - 1)) {
    throw Error(ErrorCode::DimensionMismatch, "expected 2n−1 coefficient blocks");
  }
  for (const auto& c : coeffs_) {
    if (c.rows() != p || c.cols() != p) throw Error(ErrorCode::DimensionMismatch, "coefficient block is not p×p");
  }
}

template <class Derived>
bool LaurentCoefficients<Derived>::has_hermitian_symmetry(double tol) const {
  const double scale = std::max(1.0, max_abs_coeff());
  for (int l = 0; l < n_; ++l) {
    if (max_abs(coeff(-l) - coeff(l).adjoint()) > tol * scale) return false;
  }
  return true;
}

template <class Derived>
double LaurentCoefficients<Derived>::max_abs_coeff() const {
  double m = 0.0;
  for (const auto& c : coeffs_) m = std::max(m, max_abs(c));
  return m;
}

template <class Derived>
void LaurentCoefficients<Derived>::check_same_shape(const Derived& other) const {
  if (other.n() != n_ || other.p() != p_) throw Error(ErrorCode::DimensionMismatch, "coefficient tables differ in shape");
}

template <class Derived>
Derived& LaurentCoefficients<Derived>::operator+=(const Derived& other) {
  check_same_shape(other);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs()[i];
  return static_cast<Derived&>(*this);
}

template <class Derived>
Derived& LaurentCoefficients<Derived>::operator-=(const Derived& other) {
  check_same_shape(other);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= other.coeffs()[i];
  return static_cast<Derived&>(*this);
}

template <class Derived>
Derived& LaurentCoefficients<Derived>::operator*=(cplx s) {
  for (auto& c : coeffs_) c *= s;
  return static_cast<Derived&>(*this);
}

}  // namespace tsep
