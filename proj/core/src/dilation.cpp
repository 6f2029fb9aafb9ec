#include "tsep/dilation.hpp"

#include <algorithm>
#include <cmath>

#include "tsep/errors.hpp"

namespace tsep {

CMatrix DilationFactorization::projection(std::size_t j) const {
  std::size_t offset = 0;
  for (std::size_t k = 0; k < j; ++k) offset += static_cast<std::size_t>(spectrum.at(k).mult);
  CMatrix out = CMatrix::Zero(q, q);
  for (int i = 0; i < spectrum.at(j).mult; ++i) out(static_cast<Eigen::Index>(offset) + i, static_cast<Eigen::Index>(offset) + i) = 1.0;
  return out;
}

DilationFactorization naimark_from_atoms(const AtomicDecomposition& dec) {
  double scale = 1.0;
  for (const auto& atom : dec.atoms) scale = std::max(scale, max_abs(atom.b));

  DilationFactorization fac;
  std::vector<CMatrix> factors;
  for (std::size_t j = 0; j < dec.atoms.size(); ++j) {
    const Atom& atom = dec.atoms[j];
    if (atom.b.rows() != dec.p || atom.b.cols() != dec.p) {
      throw Error(ErrorCode::DimensionMismatch, "atom block is not p×p");
    }
    const cplx lambda = normalize_unit(atom.lambda);
    const HermEig eig = herm_eig(hermitian_part(atom.b));
    if (eig.values(0) < -1e-10 * scale) {
      throw Error(ErrorCode::NotPSD, "atom " + std::to_string(j) + " has eigenvalue " + fmt(eig.values(0)));
    }
    // Keep every eigenvalue that is not round-off; dropping more would add
    // error beyond the decomposition's own residual.
    const double threshold = 1e-14 * scale;
    CMatrix c(0, dec.p);
    for (Eigen::Index k = eig.values.size() - 1; k >= 0; --k) {
      if (eig.values(k) <= threshold) break;
      c.conservativeResize(c.rows() + 1, Eigen::NoChange);
      c.row(c.rows() - 1) = std::sqrt(eig.values(k)) * eig.vectors.col(k).adjoint();
    }
    if (c.rows() == 0) {
      fac.warnings.push_back("atom " + std::to_string(j) + " has a numerically zero block and was dropped");
      continue;
    }
    fac.spectrum.push_back({lambda, static_cast<int>(c.rows())});
    factors.push_back(std::move(c));
  }
  if (factors.empty()) throw Error(ErrorCode::DegenerateAtom, "every atom block is numerically zero");

  for (const auto& c : factors) fac.q += static_cast<int>(c.rows());
  fac.w.resize(fac.q, dec.p);
  fac.u = CMatrix::Zero(fac.q, fac.q);
  Eigen::Index row = 0;
  for (std::size_t j = 0; j < factors.size(); ++j) {
    fac.w.middleRows(row, factors[j].rows()) = factors[j];
    for (Eigen::Index i = 0; i < factors[j].rows(); ++i) fac.u(row + i, row + i) = fac.spectrum[j].lambda;
    row += factors[j].rows();
  }
  return fac;
}

BlockToeplitz universal_at_unitary(int n, const CMatrix& u) {
  if (u.rows() != u.cols() || u.rows() == 0) throw Error(ErrorCode::DimensionMismatch, "u must be square");
  const Eigen::Index q = u.rows();
  if (max_abs(u.adjoint() * u - CMatrix::Identity(q, q)) > 1e-10) {
    throw Error(ErrorCode::NotUnitary, "‖u*u − I‖_max above 1e-10");
  }
  BlockToeplitz t(n, static_cast<int>(q));
  CMatrix power = CMatrix::Identity(q, q);
  for (int l = 0; l < n; ++l) {
    t.coeff(l) = power;
    t.coeff(-l) = power.adjoint();
    power = (power * u).eval();
  }
  return t;
}

FactorizationCheck verify_factorization(const BlockToeplitz& t, const DilationFactorization& fac) {
  const int n = t.n();
  const Eigen::Index p = t.p();
  const Eigen::Index q = fac.q;
  if (fac.u.rows() != q || fac.u.cols() != q || fac.w.rows() != q || fac.w.cols() != p) {
    throw Error(ErrorCode::DimensionMismatch, "factorization shapes do not match the target");
  }
  const CMatrix big_u = assemble(universal_at_unitary(n, fac.u));
  CMatrix lift = CMatrix::Zero(n * q, n * p);
  for (int k = 0; k < n; ++k) lift.block(k * q, k * p, q, p) = fac.w;

  FactorizationCheck check;
  check.residual = (assemble(t) - lift.adjoint() * big_u * lift).norm();

  CMatrix power = CMatrix::Identity(q, q);
  for (int l = 0; l < n; ++l) {
    const CMatrix moment = fac.w.adjoint() * power * fac.w;
    check.coefficient_error = std::max(check.coefficient_error, max_abs(t.coeff(l) - moment));
    check.coefficient_error = std::max(check.coefficient_error, max_abs(t.coeff(-l) - moment.adjoint()));
    power = (power * fac.u).eval();
  }
  return check;
}

}  // namespace tsep
