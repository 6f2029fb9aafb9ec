#include "tsep/toeplitz.hpp"

#include <cmath>
#include <string>

#include "tsep/errors.hpp"

namespace tsep {

cplx normalize_unit(cplx z) {
  const double r = std::abs(z);
  if (!std::isfinite(r) || std::abs(r - 1.0) > 1e-9) {
    throw Error(ErrorCode::NotOnCircle, "|z| = " + fmt(r));
  }
  return z / r;
}

BlockToeplitz BlockToeplitz::order_unit(int n, int p) {
  BlockToeplitz t(n, p);
  t.coeff(0) = CMatrix::Identity(p, p);
  return t;
}

BlockToeplitz BlockToeplitz::from_assembled(const CMatrix& m, int n, int p) {
  if (m.rows() != static_cast<Eigen::Index>(n) * p || m.cols() != m.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "assembled matrix is not np×np");
  }
  BlockToeplitz t(n, p);
  for (int l = 0; l < n; ++l) {
    t.coeff(l) = m.block(static_cast<Eigen::Index>(l) * p, 0, p, p);
    t.coeff(-l) = m.block(0, static_cast<Eigen::Index>(l) * p, p, p);
  }
  return t;
}

double BlockToeplitz::frobenius_norm() const {
  double sum = 0.0;
  for (int l = -n() + 1; l < n(); ++l) sum += (n() - std::abs(l)) * coeff(l).squaredNorm();
  return std::sqrt(sum);
}

BlockToeplitz BlockToeplitz::entry(Eigen::Index i, Eigen::Index j) const {
  BlockToeplitz t(n(), 1);
  for (int l = -n() + 1; l < n(); ++l) t.coeff(l)(0, 0) = coeff(l)(i, j);
  return t;
}

TrigMatrixPoly TrigMatrixPoly::constant(int n, const CMatrix& value) {
  TrigMatrixPoly f(n, static_cast<int>(value.rows()));
  f.coeff(0) = value;
  return f;
}

CMatrix FlipUnitary::matrix() const {
  CMatrix u = CMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i) u(i, n - 1 - i) = 1.0;
  return u;
}

CMatrix shift_power(int n, int l) {
  CMatrix r = CMatrix::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    const int j = k - l;
    if (j >= 0 && j < n) r(k, j) = 1.0;
  }
  return r;
}

CVector gamma(int n, cplx z) {
  CVector g(n);
  cplx power = 1.0;
  for (int k = 0; k < n; ++k) {
    g(k) = power;
    power *= z;
  }
  return g;
}

BlockToeplitz universal_toeplitz(int n, cplx lambda) {
  if (n < 1) throw Error(ErrorCode::DimensionMismatch, "order must be positive");
  const cplx z = normalize_unit(lambda);
  BlockToeplitz t(n, 1);
  cplx power = 1.0;
  for (int l = 0; l < n; ++l) {
    t.coeff(l)(0, 0) = power;
    t.coeff(-l)(0, 0) = std::conj(power);
    power *= z;
  }
  return t;
}

TrigMatrixPoly universal_trigpoly(int n) {
  TrigMatrixPoly f(n, n);
  for (int l = -n + 1; l < n; ++l) f.coeff(l) = shift_power(n, l);
  return f;
}

BlockToeplitz tensor(const BlockToeplitz& scalar, const CMatrix& b) {
  if (scalar.p() != 1) throw Error(ErrorCode::DimensionMismatch, "tensor expects a scalar Toeplitz factor");
  BlockToeplitz t(scalar.n(), static_cast<int>(b.rows()));
  for (int l = -scalar.n() + 1; l < scalar.n(); ++l) t.coeff(l) = scalar.coeff(l)(0, 0) * b;
  return t;
}

CMatrix assemble(const BlockToeplitz& t) {
  const int n = t.n();
  const int p = t.p();
  CMatrix m(static_cast<Eigen::Index>(n) * p, static_cast<Eigen::Index>(n) * p);
  for (int k = 0; k < n; ++k) {
    for (int j = 0; j < n; ++j) {
      m.block(static_cast<Eigen::Index>(k) * p, static_cast<Eigen::Index>(j) * p, p, p) = t.coeff(k - j);
    }
  }
  return m;
}

CMatrix eval(const TrigMatrixPoly& f, cplx z) {
  const cplx u = normalize_unit(z);
  const int n = f.n();
  // z^{−(n−1)} · Σ_{j=0}^{2n−2} z^j c_{j−n+1}, Horner from the top.
  CMatrix acc = f.coeff(n - 1);
  for (int l = n - 2; l >= -n + 1; --l) acc = (u * acc + f.coeff(l)).eval();
  acc *= std::pow(std::conj(u), n - 1);
  if (f.is_hermitian_valued()) return hermitian_part(acc);
  return acc;
}

cplx duality_pair(const BlockToeplitz& t, const TrigMatrixPoly& f) {
  if (t.p() != 1 || f.p() != 1 || t.n() != f.n()) {
    throw Error(ErrorCode::DimensionMismatch, "duality_pair expects scalar elements of equal order");
  }
  cplx sum = 0.0;
  for (int k = -t.n() + 1; k < t.n(); ++k) sum += t.coeff(-k)(0, 0) * f.coeff(k)(0, 0);
  return sum;
}

BlockToeplitz flip_conjugate(const BlockToeplitz& t) {
  const CMatrix u = FlipUnitary{t.n()}.matrix();
  const Eigen::Index p = t.p();
  CMatrix big = CMatrix::Zero(u.rows() * p, u.cols() * p);
  for (Eigen::Index i = 0; i < u.rows(); ++i) {
    for (Eigen::Index j = 0; j < u.cols(); ++j) {
      if (u(i, j) != 0.0) big.block(i * p, j * p, p, p) = u(i, j) * CMatrix::Identity(p, p);
    }
  }
  return BlockToeplitz::from_assembled(big.adjoint() * assemble(t) * big, t.n(), t.p());
}

DualSystemMap::DualSystemMap(MapDirection direction, int n, int p, std::vector<CMatrix> values)
    : direction_(direction), n_(n), p_(p), values_(std::move(values)) {
  if (n < 1 || p < 1 || values_.size() != static_cast<std::size_t>(2 * n - 1)) {
    throw Error(ErrorCode::DimensionMismatch, "map needs 2n−1 basis values");
  }
  for (const auto& v : values_) {
    if (v.rows() != p || v.cols() != p) throw Error(ErrorCode::DimensionMismatch, "basis value is not p×p");
  }
}

bool DualSystemMap::has_consistent_adjoints(double tol) const {
  double scale = 1.0;
  for (const auto& v : values_) scale = std::max(scale, max_abs(v));
  for (int k = 0; k < n_; ++k) {
    if (max_abs(value(-k) - value(k).adjoint()) > tol * scale) return false;
  }
  return true;
}

CMatrix DualSystemMap::apply(const TrigMatrixPoly& f) const {
  if (direction_ != MapDirection::FromDual) {
    throw Error(ErrorCode::DimensionMismatch, "map is defined on Toeplitz matrices, not trig polynomials");
  }
  if (f.p() != 1 || f.n() != n_) throw Error(ErrorCode::DimensionMismatch, "expected a scalar polynomial of order n");
  CMatrix out = CMatrix::Zero(p_, p_);
  for (int k = -n_ + 1; k < n_; ++k) out += f.coeff(k)(0, 0) * value(k);
  return out;
}

CMatrix DualSystemMap::apply(const BlockToeplitz& t) const {
  if (direction_ != MapDirection::FromToeplitz) {
    throw Error(ErrorCode::DimensionMismatch, "map is defined on trig polynomials, not Toeplitz matrices");
  }
  if (t.p() != 1 || t.n() != n_) throw Error(ErrorCode::DimensionMismatch, "expected a scalar Toeplitz matrix of order n");
  CMatrix out = CMatrix::Zero(p_, p_);
  for (int l = -n_ + 1; l < n_; ++l) out += t.coeff(l)(0, 0) * value(l);
  return out;
}

DualSystemMap hat_of_toeplitz(const BlockToeplitz& t) {
  std::vector<CMatrix> values;
  values.reserve(t.coeffs().size());
  for (int k = -t.n() + 1; k < t.n(); ++k) values.push_back(t.coeff(-k));
  return DualSystemMap(MapDirection::FromDual, t.n(), t.p(), std::move(values));
}

DualSystemMap hat_of_trigpoly(const TrigMatrixPoly& f) {
  std::vector<CMatrix> values;
  values.reserve(f.coeffs().size());
  for (int k = -f.n() + 1; k < f.n(); ++k) values.push_back(f.coeff(-k));
  return DualSystemMap(MapDirection::FromToeplitz, f.n(), f.p(), std::move(values));
}

PsdLsqResult psd_lsq(std::span<const cplx> atoms, const BlockToeplitz& target, const PsdLsqOptions& options,
                     const std::vector<CMatrix>& warm_start) {
  const int n = target.n();
  PsdLsqProblem problem;
  problem.p = target.p();
  problem.profiles.resize(static_cast<Eigen::Index>(atoms.size()), 2 * n - 1);
  for (std::size_t j = 0; j < atoms.size(); ++j) {
    const cplx z = normalize_unit(atoms[j]);
    for (int l = -n + 1; l < n; ++l) {
      problem.profiles(static_cast<Eigen::Index>(j), l + n - 1) = l >= 0 ? std::pow(z, l) : std::pow(std::conj(z), -l);
    }
  }
  for (int l = -n + 1; l < n; ++l) {
    problem.weights.push_back(static_cast<double>(n - std::abs(l)));
    problem.targets.push_back(target.coeff(l));
  }
  return psd_lsq(problem, options, warm_start);
}

}  // namespace tsep
