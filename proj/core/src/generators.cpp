#include "tsep/generators.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "tsep/errors.hpp"

namespace tsep {

namespace {

CMatrix complex_normal_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  CMatrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = rng.complex_normal();
  }
  return m;
}

}  // namespace

void check_instance_size(int n, int p) {
  if (n < 1 || n > 12 || p < 1 || p > 8) {
    throw Error(ErrorCode::BadParams,
                "instance size out of range (n = " + std::to_string(n) + ", p = " + std::to_string(p) + ")");
  }
}

CMatrix random_hermitian(int p, Rng& rng) { return hermitian_part(complex_normal_matrix(p, p, rng)); }

CMatrix random_gram(int p, int rank, Rng& rng) {
  const CMatrix x = complex_normal_matrix(rank, p, rng);
  return hermitian_part(x.adjoint() * x);
}

CMatrix random_rank_one_projection(int p, Rng& rng) {
  CVector v = complex_normal_matrix(p, 1, rng).col(0);
  v /= v.norm();
  return v * v.adjoint();
}

CMatrix random_unitary(int q, Rng& rng) {
  CMatrix u = CMatrix::Identity(q, q);
  if (q > 1) {
    for (int r = 0; r < 2 * q * q; ++r) {
      const int i = rng.uniform_int(0, q - 1);
      int j = rng.uniform_int(0, q - 2);
      if (j >= i) ++j;
      const double angle = rng.uniform(0.0, 2.0 * std::numbers::pi);
      const cplx phase = rng.unit_complex();
      const double c = std::cos(angle);
      const double s = std::sin(angle);
      for (int k = 0; k < q; ++k) {
        const cplx ui = u(i, k);
        const cplx uj = u(j, k);
        u(i, k) = c * ui - s * std::conj(phase) * uj;
        u(j, k) = s * phase * ui + c * uj;
      }
    }
  }
  for (int k = 0; k < q; ++k) u.row(k) *= rng.unit_complex();
  return u;
}

BlockToeplitz gen_atoms(int n, int p, int m, Rng& rng, AtomicDecomposition* truth) {
  check_instance_size(n, p);
  if (m < 1 || m > 64) throw Error(ErrorCode::BadParams, "atom count must lie in [1, 64]");
  AtomicDecomposition dec;
  dec.n = n;
  dec.p = p;
  for (int j = 0; j < m; ++j) {
    const cplx lambda = rng.unit_complex();
    dec.atoms.push_back({lambda, random_gram(p, p, rng)});
  }
  BlockToeplitz t = dec.reconstruct();
  if (truth != nullptr) *truth = std::move(dec);
  return t;
}

BlockToeplitz gen_density(int n, int p, Rng& rng) {
  check_instance_size(n, p);
  std::vector<CMatrix> g;
  for (int j = 0; j < n; ++j) g.push_back(complex_normal_matrix(p, p, rng));

  constexpr int kNodes = 4096;
  BlockToeplitz t(n, p);
  CMatrix value(p, p);
  for (int k = 0; k < kNodes; ++k) {
    const double theta = 2.0 * std::numbers::pi * k / kNodes;
    const cplx z = std::polar(1.0, theta);
    value = g[static_cast<std::size_t>(n - 1)];
    for (int j = n - 2; j >= 0; --j) value = (z * value + g[static_cast<std::size_t>(j)]).eval();
    const CMatrix w = value.adjoint() * value;
    cplx e = 1.0;
    const cplx step = std::conj(z);
    for (int l = 0; l < n; ++l) {
      t.coeff(l) += e * w;
      e *= step;
    }
  }
  for (int l = 0; l < n; ++l) t.coeff(l) /= static_cast<double>(kNodes);
  t.coeff(0) = hermitian_part(t.coeff(0));
  for (int l = 1; l < n; ++l) t.coeff(-l) = t.coeff(l).adjoint();
  t *= static_cast<double>(p) / t.coeff(0).trace().real();
  return t;
}

PureInstance gen_pure(int n, int p, Rng& rng) {
  check_instance_size(n, p);
  PureInstance out;
  out.lambda = rng.unit_complex();
  out.alpha = rng.uniform(0.5, 2.0);
  out.q = random_rank_one_projection(p, rng);
  out.t = tensor(universal_toeplitz(n, std::conj(out.lambda)), out.alpha * out.q);
  return out;
}

BlockToeplitz gen_universal(int n, cplx lambda) {
  check_instance_size(n, 1);
  return universal_toeplitz(n, lambda);
}

TrigMatrixPoly gen_dualpure(int n, int p, Rng& rng, CMatrix* w_out) {
  check_instance_size(n, p);
  const CMatrix w = complex_normal_matrix(n, p, rng);
  TrigMatrixPoly f(n, p);
  for (int l = -n + 1; l < n; ++l) f.coeff(l) = w.adjoint() * shift_power(n, -l) * w;
  if (w_out != nullptr) *w_out = w;
  return f;
}

BlockToeplitz random_hermitian_toeplitz(int n, int p, Rng& rng) {
  check_instance_size(n, p);
  BlockToeplitz t(n, p);
  t.coeff(0) = random_hermitian(p, rng);
  for (int l = 1; l < n; ++l) {
    t.coeff(l) = complex_normal_matrix(p, p, rng);
    t.coeff(-l) = t.coeff(l).adjoint();
  }
  return t;
}

TrigMatrixPoly random_hermitian_trigpoly(int n, int p, Rng& rng) {
  check_instance_size(n, p);
  TrigMatrixPoly f(n, p);
  f.coeff(0) = random_hermitian(p, rng);
  for (int l = 1; l < n; ++l) {
    f.coeff(l) = complex_normal_matrix(p, p, rng) / static_cast<double>(1 + l);
    f.coeff(-l) = f.coeff(l).adjoint();
  }
  return f;
}

}  // namespace tsep
