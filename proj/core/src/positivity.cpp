#include "tsep/positivity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>

#include <Eigen/Cholesky>

#include "tsep/errors.hpp"
#include "tsep/parallel.hpp"

namespace tsep {

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Positive: return "Positive";
    case Verdict::StrictlyPositive: return "StrictlyPositive";
    case Verdict::NotPositive: return "NotPositive";
  }
  return "?";
}

PositivityCertificate check_toeplitz_psd(const BlockToeplitz& t, double tol) {
  if (!t.is_hermitian()) throw Error(ErrorCode::NotHermitian, "block-Toeplitz element is not Hermitian");
  const CMatrix m = hermitian_part(assemble(t));
  const HermEig eig = herm_eig(m);
  PositivityCertificate cert;
  cert.tol = tol;
  cert.scale = tol_scale(m);
  cert.margin = eig.values(0);
  if (cert.margin < -tol * cert.scale) {
    cert.verdict = Verdict::NotPositive;
    cert.witness = eig.vectors.col(0);
  } else if (cert.margin >= tol * cert.scale) {
    cert.verdict = Verdict::StrictlyPositive;
  } else {
    cert.verdict = Verdict::Positive;
  }
  return cert;
}

std::int64_t default_grid(const TrigMatrixPoly& f) {
  return std::max<std::int64_t>(256, std::int64_t{8} * f.n() * f.p());
}

namespace {

double spectral_norm(const CMatrix& c) {
  if (c.size() == 0) return 0.0;
  const RVector values = herm_eig(hermitian_part(c.adjoint() * c)).values;
  return std::sqrt(std::max(values(values.size() - 1), 0.0));
}

struct Bounds {
  double lipschitz = 0.0;
  double curvature = 0.0;
  double scale = 1.0;

  double penalty(std::int64_t grid) const {
    const double h = std::numbers::pi / static_cast<double>(grid);
    return std::min(lipschitz * h, 0.5 * curvature * h * h);
  }
};

Bounds bounds_of(const TrigMatrixPoly& f) {
  Bounds b;
  double norm_sum = 0.0;
  for (int l = -f.n() + 1; l < f.n(); ++l) {
    const double s = spectral_norm(f.coeff(l));
    norm_sum += s;
    b.curvature += static_cast<double>(l) * l * s;
  }
  b.lipschitz = 2.0 * (f.n() - 1) * norm_sum;
  b.scale = std::max(1.0, f.max_abs_coeff());
  return b;
}

// Horner on e^{iθ}, shifted by e^{−i(n−1)θ}; Hermitian part taken.
class Sampler {
 public:
  explicit Sampler(const TrigMatrixPoly& f) : f_(f), acc_(f.p(), f.p()) {}

  const CMatrix& at(double theta) {
    const int n = f_.n();
    const cplx z = std::polar(1.0, theta);
    acc_ = f_.coeff(n - 1);
    for (int l = n - 2; l >= -n + 1; --l) {
      acc_ *= z;
      acc_ += f_.coeff(l);
    }
    acc_ *= std::polar(1.0, -(n - 1) * theta);
    acc_ = (0.5 * (acc_ + acc_.adjoint())).eval();
    return acc_;
  }

 private:
  const TrigMatrixPoly& f_;
  CMatrix acc_;
};

bool positive_definite_shifted(const CMatrix& a, double beta) {
  if (a.rows() <= 2) return min_eigenvalue(a) > beta;
  CMatrix shifted = a;
  shifted.diagonal().array() -= beta;
  Eigen::LLT<CMatrix> llt(shifted);
  return llt.info() == Eigen::Success;
}

struct Pass {
  double min_exact = std::numeric_limits<double>::infinity();
  std::int64_t argmin = -1;
  bool all_strict = true;
  bool all_positive = true;
};

double theta_of(std::int64_t k, std::int64_t grid) {
  return 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(grid);
}

// exact: λ_min at every sample. Otherwise a Cholesky test against the two
// thresholds first, and λ_min only where both fail.
Pass sample_grid(const TrigMatrixPoly& f, std::int64_t grid, bool exact, double beta_strict, double beta_pos) {
  Pass total;
  std::mutex mutex;
  parallel_for(static_cast<std::size_t>(grid), [&](std::size_t begin, std::size_t end) {
    Sampler sampler(f);
    Pass local;
    for (std::size_t k = begin; k < end; ++k) {
      const CMatrix& value = sampler.at(theta_of(static_cast<std::int64_t>(k), grid));
      if (!exact) {
        if (positive_definite_shifted(value, beta_strict)) continue;
        local.all_strict = false;
        if (positive_definite_shifted(value, beta_pos)) continue;
      }
      const double lam = min_eigenvalue(value);
      if (lam < local.min_exact) {
        local.min_exact = lam;
        local.argmin = static_cast<std::int64_t>(k);
      }
      if (lam < beta_strict) local.all_strict = false;
      if (lam < beta_pos) local.all_positive = false;
    }
    std::lock_guard<std::mutex> lock(mutex);
    if (local.min_exact < total.min_exact ||
        (local.min_exact == total.min_exact && local.argmin >= 0 && local.argmin < total.argmin)) {
      total.min_exact = local.min_exact;
      total.argmin = local.argmin;
    }
    total.all_strict = total.all_strict && local.all_strict;
    total.all_positive = total.all_positive && local.all_positive;
  });
  return total;
}

void require_hermitian_valued(const TrigMatrixPoly& f) {
  if (!f.is_hermitian_valued()) {
    throw Error(ErrorCode::NotHermitianValued, "trigonometric polynomial is not Hermitian-valued");
  }
}

void require_grid(const TrigMatrixPoly& f, std::int64_t grid) {
  if (grid < std::int64_t{8} * f.n() * f.p() || grid > kMaxGrid) {
    throw Error(ErrorCode::BadParams, "grid size must lie in [8np, 2^20], got " + std::to_string(grid));
  }
}

PositivityCertificate make_negative(const TrigMatrixPoly& f, const Pass& pass, std::int64_t grid, double tol,
                                    const Bounds& b, int levels) {
  PositivityCertificate cert;
  cert.verdict = Verdict::NotPositive;
  cert.tol = tol;
  cert.scale = b.scale;
  const double theta = theta_of(pass.argmin, grid);
  Sampler sampler(f);
  const HermEig eig = herm_eig(sampler.at(theta));
  cert.margin = eig.values(0);
  cert.witness = eig.vectors.col(0);
  cert.witness_theta = theta;
  cert.grid = GridCertificate{grid, cert.margin, b.lipschitz, b.curvature, b.penalty(grid), levels};
  return cert;
}

// Classifies one pass, or nullopt when nothing could be certified.
std::optional<PositivityCertificate> classify(const TrigMatrixPoly& f, const Pass& pass, double best_min,
                                              std::int64_t grid, double tol, const Bounds& b, int levels) {
  if (pass.argmin >= 0 && pass.min_exact < -tol * b.scale) return make_negative(f, pass, grid, tol, b, levels);
  if (!pass.all_positive) return std::nullopt;
  PositivityCertificate cert;
  cert.verdict = pass.all_strict ? Verdict::StrictlyPositive : Verdict::Positive;
  cert.tol = tol;
  cert.scale = b.scale;
  cert.margin = std::min(best_min, pass.min_exact);
  cert.grid = GridCertificate{grid, cert.margin, b.lipschitz, b.curvature, b.penalty(grid), levels};
  return cert;
}

}  // namespace

std::optional<PositivityCertificate> check_trigpoly_psd_at(const TrigMatrixPoly& f, std::int64_t grid, double tol) {
  require_hermitian_valued(f);
  require_grid(f, grid);
  const Bounds b = bounds_of(f);
  const double pen = b.penalty(grid);
  const Pass pass = sample_grid(f, grid, true, tol * b.scale + pen, -tol * b.scale + pen);
  return classify(f, pass, pass.min_exact, grid, tol, b, 1);
}

PositivityCertificate check_trigpoly_psd(const TrigMatrixPoly& f, std::int64_t grid, double tol) {
  require_hermitian_valued(f);
  if (grid == 0) grid = default_grid(f);
  require_grid(f, grid);
  const Bounds b = bounds_of(f);

  Pass pass = sample_grid(f, grid, true, tol * b.scale + b.penalty(grid), -tol * b.scale + b.penalty(grid));
  double best = pass.min_exact;
  int levels = 1;
  if (auto cert = classify(f, pass, best, grid, tol, b, levels)) return *cert;

  while (grid < kMaxGrid) {
    // Finer grids can only lower the smallest sample, so skip the levels whose
    // penalty alone already rules out a certificate.
    std::int64_t next = grid * 2;
    while (next < kMaxGrid && b.penalty(next) > best + tol * b.scale) next *= 2;
    grid = std::min(next, kMaxGrid);
    ++levels;
    const double pen = b.penalty(grid);
    pass = sample_grid(f, grid, false, tol * b.scale + pen, -tol * b.scale + pen);
    best = std::min(best, pass.min_exact);
    if (auto cert = classify(f, pass, best, grid, tol, b, levels)) return *cert;
  }
  throw Error(ErrorCode::GridExhausted,
              "no certificate at K = 2^20 (smallest sample " + fmt(best) + ")");
}

}  // namespace tsep
