#include "tsep/entanglement.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "tsep/errors.hpp"
#include "tsep/positivity.hpp"

namespace tsep {

std::string_view to_string(EntanglementVerdict v) {
  switch (v) {
    case EntanglementVerdict::Entangled: return "Entangled";
    case EntanglementVerdict::SeparableFound: return "SeparableFound";
    case EntanglementVerdict::Undecided: return "Undecided";
  }
  return "?";
}

namespace {

constexpr double kMinSine = 1e-6;

void require_positive(const TrigMatrixPoly& f) {
  if (f.max_abs_coeff() == 0.0) throw Error(ErrorCode::ZeroInput, "F is identically zero");
  const PositivityCertificate cert = check_trigpoly_psd(f);
  if (!cert.positive()) {
    throw Error(ErrorCode::NotPositive, "F is not pointwise PSD (λ_min " + fmt(cert.margin) + ")");
  }
}

// sin of the angle between the lines spanned by unit vectors u and v.
double line_sine(const CVector& u, const CVector& v) {
  return (v - u * u.dot(v)).norm();
}

}  // namespace

EntanglementCertificate rank_one_range_witness(const TrigMatrixPoly& f, int samples, double tol) {
  if (samples < 2) throw Error(ErrorCode::BadParams, "need at least two samples");
  require_positive(f);

  EntanglementCertificate cert;
  // A 2×2 minor of F is a trig polynomial of degree ≤ 2(n−1), so it cannot
  // vanish at 4(n−1)+1 points without vanishing everywhere.
  cert.samples = std::max(samples, 4 * (f.n() - 1) + 1);
  const double threshold = tol * std::max(1.0, f.max_abs_coeff());

  std::vector<std::pair<double, CVector>> rank_one;
  for (int k = 0; k < cert.samples; ++k) {
    const double theta = 2.0 * std::numbers::pi * k / cert.samples;
    const HermEig eig = herm_eig(eval(f, std::polar(1.0, theta)));
    int rank = 0;
    for (Eigen::Index i = 0; i < eig.values.size(); ++i) rank += eig.values(i) > threshold ? 1 : 0;
    cert.ranks.push_back(rank);
    cert.max_rank = std::max(cert.max_rank, rank);
    if (rank == 1) rank_one.emplace_back(theta, eig.vectors.col(eig.values.size() - 1));
  }
  if (cert.max_rank != 1 || rank_one.size() < 2) return cert;

  const CVector& ref = rank_one.front().second;
  std::size_t best = 1;
  double best_sine = line_sine(ref, rank_one[1].second);
  for (std::size_t k = 2; k < rank_one.size(); ++k) {
    const double s = line_sine(ref, rank_one[k].second);
    if (s > best_sine) {
      best_sine = s;
      best = k;
    }
  }
  if (best_sine >= kMinSine) {
    cert.verdict = EntanglementVerdict::Entangled;
    cert.evidence = RangeEvidence{rank_one.front().first, rank_one[best].first, ref, rank_one[best].second, best_sine};
  }
  return cert;
}

namespace {

// Coefficients of a scalar Laurent polynomial, ℓ = −(n−1)..n−1.
using Profile = CVector;

Profile multiply(const Profile& a, const Profile& b, int n) {
  Profile out = Profile::Zero(2 * n - 1);
  for (int i = -n + 1; i < n; ++i) {
    for (int j = -n + 1; j < n; ++j) {
      const int l = i + j;
      if (l > -n && l < n) out(l + n - 1) += a(i + n - 1) * b(j + n - 1);
    }
  }
  return out;
}

std::vector<Profile> dictionary(int n, const DualSearchOptions& options) {
  std::vector<Profile> out;
  Profile one = Profile::Zero(2 * n - 1);
  one(n - 1) = 1.0;
  out.push_back(one);
  for (int r = 0; r < options.radii; ++r) {
    const double radius = 1.0 - 0.75 * r / std::max(1, options.radii - 1);
    for (int a = 0; a < options.angles; ++a) {
      const cplx rho = std::polar(radius, 2.0 * std::numbers::pi * a / options.angles);
      // |z − ρ|² / (1 + |ρ|²) = 1 − (ρ̄ z + ρ z̄)/(1 + |ρ|²)
      Profile base = Profile::Zero(2 * n - 1);
      if (n == 1) continue;
      const double norm = 1.0 + radius * radius;
      base(n - 1) = 1.0;
      base(n) = -std::conj(rho) / norm;
      base(n - 2) = -rho / norm;
      Profile power = base;
      for (int d = 1; d < n; ++d) {
        out.push_back(power);
        power = multiply(power, base, n);
      }
    }
  }
  return out;
}

TrigMatrixPoly model_of(const std::vector<Profile>& dict, const std::vector<std::size_t>& active,
                        const std::vector<CMatrix>& blocks, int n, int p) {
  TrigMatrixPoly m(n, p);
  for (std::size_t j = 0; j < active.size(); ++j) {
    for (int l = -n + 1; l < n; ++l) m.coeff(l) += dict[active[j]](l + n - 1) * blocks[j];
  }
  return m;
}

double grid_residual(const TrigMatrixPoly& diff, int points, double offset) {
  double worst = 0.0;
  for (int k = 0; k < points; ++k) {
    const double theta = 2.0 * std::numbers::pi * (k + offset) / points;
    const RVector values = herm_eig(eval(diff, std::polar(1.0, theta))).values;
    worst = std::max({worst, std::abs(values(0)), std::abs(values(values.size() - 1))});
  }
  return worst;
}

}  // namespace

EntanglementCertificate separability_search_dual(const TrigMatrixPoly& f, const DualSearchOptions& options) {
  if (options.tol <= 0.0 || options.max_terms < 1 || options.angles < 1 || options.radii < 1 || options.grid < 0) {
    throw Error(ErrorCode::BadParams, "separability_search_dual: invalid options");
  }
  require_positive(f);
  const int n = f.n();
  const int p = f.p();
  EntanglementCertificate cert;
  cert.grid = options.grid > 0 ? options.grid : std::max(64, 8 * n);
  const double target = options.tol * std::max(1.0, f.max_abs_coeff());

  const std::vector<Profile> dict = dictionary(n, options);
  cert.dictionary_size = static_cast<int>(dict.size());
  std::vector<double> norms;
  for (const auto& d : dict) norms.push_back(d.norm());

  std::vector<std::size_t> active;
  std::vector<CMatrix> blocks;
  TrigMatrixPoly residual = f;

  PsdLsqOptions lsq;
  lsq.max_iterations = 400;
  lsq.stationarity_tol = 1e-13;
  lsq.residual_target = 0.1 * target;
  lsq.throw_on_budget = false;

  // Entangled inputs plateau well above tol; stop once progress stalls.
  double plateau = std::numeric_limits<double>::infinity();
  int stalled = 0;
  for (int round = 0; round < options.max_terms + 10; ++round) {
    // Steepest admissible direction: λ_max(Σ_ℓ conj f̂_j(ℓ) R_ℓ) per unit profile.
    double best_score = 0.0;
    std::size_t best = dict.size();
    for (std::size_t j = 0; j < dict.size(); ++j) {
      if (std::find(active.begin(), active.end(), j) != active.end()) continue;
      CMatrix s = CMatrix::Zero(p, p);
      for (int l = -n + 1; l < n; ++l) s += std::conj(dict[j](l + n - 1)) * residual.coeff(l);
      const RVector ev = herm_eig(hermitian_part(s)).values;
      const double score = ev(ev.size() - 1) / norms[j];
      if (score > best_score * (1.0 + 1e-12)) {
        best_score = score;
        best = j;
      }
    }
    if (best < dict.size() && static_cast<int>(active.size()) < options.max_terms) {
      active.push_back(best);
      blocks.push_back(CMatrix::Zero(p, p));
    }
    if (active.empty()) break;

    PsdLsqProblem problem;
    problem.p = p;
    problem.profiles.resize(static_cast<Eigen::Index>(active.size()), 2 * n - 1);
    for (std::size_t j = 0; j < active.size(); ++j) problem.profiles.row(static_cast<Eigen::Index>(j)) = dict[active[j]].transpose();
    for (int l = -n + 1; l < n; ++l) {
      problem.weights.push_back(1.0);
      problem.targets.push_back(f.coeff(l));
    }
    blocks = psd_lsq(problem, lsq, blocks).blocks;

    const TrigMatrixPoly model = model_of(dict, active, blocks, n, p);
    residual = f - model;
    cert.residual = grid_residual(residual, cert.grid, 0.0);
    if (cert.residual <= target) {
      cert.verify_residual = grid_residual(residual, 4 * cert.grid, 0.5);
      if (cert.verify_residual <= 2.0 * target) {
        cert.verdict = EntanglementVerdict::SeparableFound;
        for (std::size_t j = 0; j < active.size(); ++j) {
          if (blocks[j].norm() == 0.0) continue;
          TrigMatrixPoly term(n, 1);
          for (int l = -n + 1; l < n; ++l) term.coeff(l)(0, 0) = dict[active[j]](l + n - 1);
          cert.terms.push_back({std::move(term), blocks[j]});
        }
      }
      return cert;
    }
    if (best == dict.size() && static_cast<int>(active.size()) >= options.max_terms) break;
    if (cert.residual < 0.99 * plateau) {
      plateau = cert.residual;
      stalled = 0;
    } else if (++stalled >= 8) {
      break;
    }
  }
  return cert;
}

TrigMatrixPoly dual_pure_element(const CMatrix& w) {
  if (w.rows() < 1 || w.cols() < 1) throw Error(ErrorCode::DimensionMismatch, "w must be n×p");
  if (max_abs(w) == 0.0) throw Error(ErrorCode::ZeroInput, "w is zero");
  const int n = static_cast<int>(w.rows());
  TrigMatrixPoly f(n, static_cast<int>(w.cols()));
  for (int l = -n + 1; l < n; ++l) f.coeff(l) = w.adjoint() * shift_power(n, -l) * w;
  return f;
}

}  // namespace tsep
