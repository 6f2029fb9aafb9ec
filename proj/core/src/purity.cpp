#include <cmath>

#include "tsep/positivity.hpp"
#include "tsep/separability.hpp"

namespace tsep {

PurityResult purity_check(const BlockToeplitz& t, double tol) {
  const PositivityCertificate cert = check_toeplitz_psd(t, tol);
  if (!cert.positive()) throw Error(ErrorCode::NotPositive, "input is not PSD (λ_min " + fmt(cert.margin) + ")");

  const int n = t.n();
  const int p = t.p();
  PurityResult out;
  const CMatrix a = hermitian_part(assemble(t));
  const HermEig eig = herm_eig(a);
  const Eigen::Index dim = a.rows();
  const double top = eig.values(dim - 1);
  const double threshold = tol * tol_scale(a);
  if (top <= threshold) {
    out.reason = "zero element";
    return out;
  }
  if (dim > 1 && eig.values(dim - 2) > threshold) {
    out.reason = "assembled matrix has rank ≥ 2";
    return out;
  }

  // v = a ⊗ ξ with a ∝ γ_n(λ̄): reshape to n×p and split off the left factor.
  const CVector v = eig.vectors.col(dim - 1);
  CMatrix vm(n, p);
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < p; ++i) vm(k, i) = v(static_cast<Eigen::Index>(k) * p + i);
  }
  const HermEig left = herm_eig(hermitian_part(vm * vm.adjoint()));
  if (n > 1 && left.values(n - 2) > 1e-6 * left.values(n - 1)) {
    out.reason = "top eigenvector is not a product vector";
    return out;
  }
  const CVector g = left.vectors.col(n - 1);
  cplx ratio = 1.0;
  if (n > 1) {
    cplx num = 0.0;
    double den = 0.0;
    for (int k = 0; k + 1 < n; ++k) {
      num += std::conj(g(k)) * g(k + 1);
      den += std::norm(g(k));
    }
    ratio = num / den;
    double dev = 0.0;
    for (int k = 0; k + 1 < n; ++k) dev = std::max(dev, std::abs(g(k + 1) - ratio * g(k)));
    if (std::abs(std::abs(ratio) - 1.0) > 1e-6 || dev > 1e-6) {
      out.reason = "left factor is not a geometric vector on the circle";
      return out;
    }
    ratio /= std::abs(ratio);
  }
  const CVector xi = (g.adjoint() * vm).transpose();
  out.pure = true;
  out.lambda = std::conj(ratio);
  out.alpha = top / n;
  out.q = xi * xi.adjoint() / xi.squaredNorm();
  return out;
}

}  // namespace tsep
