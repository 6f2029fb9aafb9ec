#include "tsep/cp_duality.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tsep/errors.hpp"
#include "tsep/generators.hpp"
#include "tsep/rng.hpp"

namespace tsep {

namespace {

void require_direction(const DualSystemMap& phi, MapDirection d) {
  if (phi.direction() != d) throw Error(ErrorCode::DimensionMismatch, "map has the wrong domain");
}

void require_adjoints(const DualSystemMap& phi) {
  if (!phi.has_consistent_adjoints()) {
    throw Error(ErrorCode::InconsistentAdjoints, "φ(basis_{−k}) differs from φ(basis_k)*");
  }
}

}  // namespace

BlockToeplitz toeplitz_of_dual_map(const DualSystemMap& phi) {
  require_direction(phi, MapDirection::FromDual);
  BlockToeplitz t(phi.n(), phi.p());
  for (int k = -phi.n() + 1; k < phi.n(); ++k) t.coeff(-k) = phi.value(k);
  return t;
}

TrigMatrixPoly trigpoly_of_toeplitz_map(const DualSystemMap& phi) {
  require_direction(phi, MapDirection::FromToeplitz);
  TrigMatrixPoly f(phi.n(), phi.p());
  for (int l = -phi.n() + 1; l < phi.n(); ++l) f.coeff(l) = phi.value(-l);
  return f;
}

PositivityCertificate is_cp_dual_map(const DualSystemMap& phi, double tol) {
  require_direction(phi, MapDirection::FromDual);
  require_adjoints(phi);
  return check_toeplitz_psd(toeplitz_of_dual_map(phi), tol);
}

PositivityCertificate is_cp_toeplitz_map(const DualSystemMap& phi, std::int64_t grid, double tol) {
  require_direction(phi, MapDirection::FromToeplitz);
  require_adjoints(phi);
  return check_trigpoly_psd(trigpoly_of_toeplitz_map(phi), grid, tol);
}

MatrixMap::MatrixMap(int p, int q, std::vector<CMatrix> unit_images, std::string name)
    : p_(p), q_(q), units_(std::move(unit_images)), name_(std::move(name)) {
  if (p < 1 || q < 1 || units_.size() != static_cast<std::size_t>(p) * p) {
    throw Error(ErrorCode::DimensionMismatch, "matrix map needs p² unit images");
  }
  for (const auto& u : units_) {
    if (u.rows() != q || u.cols() != q) throw Error(ErrorCode::DimensionMismatch, "unit image is not q×q");
  }
}

MatrixMap MatrixMap::identity(int p) {
  std::vector<CMatrix> units;
  for (int i = 0; i < p; ++i) {
    for (int j = 0; j < p; ++j) {
      CMatrix e = CMatrix::Zero(p, p);
      e(i, j) = 1.0;
      units.push_back(e);
    }
  }
  return MatrixMap(p, p, std::move(units), "identity");
}

MatrixMap MatrixMap::transpose(int p) {
  std::vector<CMatrix> units;
  for (int i = 0; i < p; ++i) {
    for (int j = 0; j < p; ++j) {
      CMatrix e = CMatrix::Zero(p, p);
      e(j, i) = 1.0;
      units.push_back(e);
    }
  }
  return MatrixMap(p, p, std::move(units), "transpose");
}

MatrixMap MatrixMap::depolarizing(int p) {
  std::vector<CMatrix> units;
  for (int i = 0; i < p; ++i) {
    for (int j = 0; j < p; ++j) {
      units.push_back(i == j ? CMatrix(CMatrix::Identity(p, p) / p) : CMatrix(CMatrix::Zero(p, p)));
    }
  }
  return MatrixMap(p, p, std::move(units), "depolarizing");
}

CMatrix MatrixMap::apply(const CMatrix& x) const {
  if (x.rows() != p_ || x.cols() != p_) throw Error(ErrorCode::DimensionMismatch, "argument is not p×p");
  CMatrix out = CMatrix::Zero(q_, q_);
  for (int i = 0; i < p_; ++i) {
    for (int j = 0; j < p_; ++j) {
      const cplx c = x(i, j);
      if (c != 0.0) out += c * units_[static_cast<std::size_t>(i * p_ + j)];
    }
  }
  return out;
}

BlockToeplitz apply_map_blockwise(const MatrixMap& psi, const BlockToeplitz& t) {
  if (t.p() != psi.p()) throw Error(ErrorCode::DimensionMismatch, "block size differs from the map's domain");
  BlockToeplitz out(t.n(), psi.q());
  for (int l = -t.n() + 1; l < t.n(); ++l) out.coeff(l) = psi.apply(t.coeff(l));
  return out;
}

ProbeReport toeplitz_cp_probe(const MatrixMap& psi, int n_max, int trials, std::uint64_t seed, double tol) {
  if (n_max < 2 || trials < 1) throw Error(ErrorCode::BadParams, "probe needs n_max ≥ 2 and trials ≥ 1");
  check_instance_size(n_max, psi.p());
  ProbeReport report;
  report.seed = seed;
  report.n_max = n_max;
  report.trials = trials;
  report.tol = tol;
  Rng rng(seed);
  for (int n = 2; n <= n_max; ++n) {
    for (int trial = 0; trial < trials; ++trial) {
      const bool atoms = trial % 2 == 0;
      BlockToeplitz input = atoms ? gen_atoms(n, psi.p(), rng.uniform_int(1, 2 * n), rng) : gen_density(n, psi.p(), rng);
      const BlockToeplitz image = apply_map_blockwise(psi, input);
      ++report.checked;
      // A non-Hermitian image already fails positivity; test its Hermitian part.
      const CMatrix a = assemble(image);
      const HermEig eig = herm_eig(hermitian_part(a));
      const double lam = eig.values(0);
      const bool hermitian = is_hermitian(a, 1e-10);
      if (lam < -tol * tol_scale(a) || !hermitian) {
        report.violations.push_back({n, trial, atoms ? "atoms" : "density", std::move(input), lam, eig.vectors.col(0)});
      }
      report.max_negative_eigenvalue = std::min(report.max_negative_eigenvalue, lam);
    }
  }
  return report;
}

PointEvaluationFit fit_point_evaluation(const DualSystemMap& phi, double tol) {
  require_direction(phi, MapDirection::FromDual);
  PointEvaluationFit fit;
  const CMatrix& v0 = phi.value(0);
  double scale = 1.0;
  for (const auto& v : phi.values()) scale = std::max(scale, max_abs(v));
  fit.alpha = v0.trace().real();
  if (fit.alpha <= tol * scale) {
    fit.max_error = std::numeric_limits<double>::infinity();
    return fit;
  }
  fit.q = hermitian_part(v0) / fit.alpha;
  if (phi.n() > 1) {
    const cplx t1 = phi.value(1).trace() / fit.alpha;
    fit.lambda = std::abs(t1) > 0.0 ? t1 / std::abs(t1) : cplx(1.0);
  }
  fit.max_error = max_abs(fit.q * fit.q - fit.q) * fit.alpha;
  cplx power = 1.0;
  for (int k = 0; k < phi.n(); ++k) {
    const CMatrix model = fit.alpha * power * fit.q;
    fit.max_error = std::max(fit.max_error, max_abs(phi.value(k) - model));
    fit.max_error = std::max(fit.max_error, max_abs(phi.value(-k) - model.adjoint()));
    power *= fit.lambda;
  }
  fit.matches = fit.max_error <= tol * scale;
  return fit;
}

}  // namespace tsep
