#include "tsep/separability.hpp"

#include <algorithm>
#include <cmath>

#include "internal.hpp"

namespace tsep {

namespace detail {

double golden_minimize(const std::function<double(double)>& f, double a, double b, double width) {
  constexpr double kInv = 0.6180339887498949;
  double c = b - kInv * (b - a);
  double d = a + kInv * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int it = 0; it < 200 && b - a > width; ++it) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInv * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInv * (b - a);
      fd = f(d);
    }
  }
  return fc <= fd ? c : d;
}

std::vector<Atom> identity_atoms(int n, int p, double weight, double phase) {
  std::vector<Atom> atoms;
  atoms.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    atoms.push_back({std::polar(1.0, phase + kTwoPi * k / n), weight * CMatrix::Identity(p, p)});
  }
  return atoms;
}

double clear_phase(int n, const std::vector<Atom>& avoid) {
  if (avoid.empty()) return 0.0;
  const double period = kTwoPi / n;
  double best_phase = 0.0;
  double best_gap = -1.0;
  constexpr int kCandidates = 64;
  for (int c = 0; c < kCandidates; ++c) {
    const double phase = period * c / kCandidates;
    double gap = kTwoPi;
    for (int k = 0; k < n; ++k) {
      const cplx z = std::polar(1.0, phase + kTwoPi * k / n);
      for (const auto& a : avoid) gap = std::min(gap, angular_distance(z, a.lambda));
    }
    if (gap > best_gap) {
      best_gap = gap;
      best_phase = phase;
    }
  }
  return best_phase;
}

}  // namespace detail

BlockToeplitz AtomicDecomposition::reconstruct() const {
  BlockToeplitz t(n, p);
  for (const auto& atom : atoms) {
    cplx power = 1.0;
    for (int l = 0; l < n; ++l) {
      t.coeff(l) += power * atom.b;
      if (l > 0) t.coeff(-l) += std::conj(power) * atom.b;
      power *= atom.lambda;
    }
  }
  return t;
}

double reconstruction_residual(const AtomicDecomposition& dec, const BlockToeplitz& target) {
  if (dec.n != target.n() || dec.p != target.p()) {
    throw Error(ErrorCode::DimensionMismatch, "decomposition and target differ in shape");
  }
  CMatrix sum = CMatrix::Zero(static_cast<Eigen::Index>(dec.n) * dec.p, static_cast<Eigen::Index>(dec.n) * dec.p);
  for (const auto& atom : dec.atoms) {
    const CVector g = gamma(dec.n, atom.lambda);
    const CMatrix outer = g * g.adjoint();
    for (int k = 0; k < dec.n; ++k) {
      for (int j = 0; j < dec.n; ++j) {
        sum.block(static_cast<Eigen::Index>(k) * dec.p, static_cast<Eigen::Index>(j) * dec.p, dec.p, dec.p) +=
            outer(k, j) * atom.b;
      }
    }
  }
  return (sum - assemble(target)).norm();
}

double angular_distance(cplx a, cplx b) {
  return std::abs(std::arg(a * std::conj(b)));
}

AtomicDecomposition decompose_identity(int n) {
  if (n < 1) throw Error(ErrorCode::BadParams, "order must be positive");
  AtomicDecomposition dec;
  dec.n = n;
  dec.p = 1;
  dec.atoms = detail::identity_atoms(n, 1, 1.0 / n, 0.0);
  // Exact roots for the quarter turns keep the small cases free of round-off.
  for (auto& a : dec.atoms) {
    if (std::abs(a.lambda.real()) < 1e-15) a.lambda = {0.0, a.lambda.imag() > 0 ? 1.0 : -1.0};
    if (std::abs(a.lambda.imag()) < 1e-15) a.lambda = {a.lambda.real() > 0 ? 1.0 : -1.0, 0.0};
  }
  dec.residual = reconstruction_residual(dec, BlockToeplitz::order_unit(n, 1));
  return dec;
}

bool is_toeplitz_toeplitz(const BlockToeplitz& t, double tol) {
  if (t.n() != 2 || t.p() != 2) return false;
  const double scale = std::max(1.0, t.max_abs_coeff());
  for (const auto& c : t.coeffs()) {
    if (std::abs(c(0, 0) - c(1, 1)) > tol * scale) return false;
  }
  return true;
}

}  // namespace tsep
