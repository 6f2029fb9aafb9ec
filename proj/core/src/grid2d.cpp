#include <algorithm>
#include <cmath>
#include <map>

#include "internal.hpp"
#include "tsep/positivity.hpp"
#include "tsep/separability.hpp"

namespace tsep {

namespace {

// Coefficient x_{ℓm}: block τ_ℓ, entry (1,0) for m = 1, (0,1) for m = −1,
// (0,0) for m = 0. Weighted by its multiplicity in the assembled 4×4 matrix.
struct Slot {
  int l;
  int m;
  double weight;
};

std::vector<Slot> slots() {
  std::vector<Slot> out;
  for (int l = -1; l <= 1; ++l) {
    for (int m = -1; m <= 1; ++m) out.push_back({l, m, std::sqrt(double((2 - std::abs(l)) * (2 - std::abs(m))))});
  }
  return out;
}

cplx coefficient(const BlockToeplitz& x, int l, int m) {
  const CMatrix& c = x.coeff(l);
  if (m == 0) return c(0, 0);
  return m > 0 ? c(1, 0) : c(0, 1);
}

struct Candidate {
  double theta;
  double phi;
};

struct Solve {
  std::vector<Candidate> atoms;
  std::vector<double> weights;
  double residual = 0.0;
};

Solve solve(const std::vector<Candidate>& candidates, const BlockToeplitz& x) {
  const auto sl = slots();
  const auto rows = static_cast<Eigen::Index>(2 * sl.size());
  RMatrix m(rows, static_cast<Eigen::Index>(candidates.size()));
  RVector y(rows);
  for (std::size_t s = 0; s < sl.size(); ++s) {
    const cplx target = coefficient(x, sl[s].l, sl[s].m);
    y(static_cast<Eigen::Index>(2 * s)) = sl[s].weight * target.real();
    y(static_cast<Eigen::Index>(2 * s + 1)) = sl[s].weight * target.imag();
    for (std::size_t j = 0; j < candidates.size(); ++j) {
      const cplx e = std::polar(sl[s].weight, sl[s].l * candidates[j].theta + sl[s].m * candidates[j].phi);
      m(static_cast<Eigen::Index>(2 * s), static_cast<Eigen::Index>(j)) = e.real();
      m(static_cast<Eigen::Index>(2 * s + 1), static_cast<Eigen::Index>(j)) = e.imag();
    }
  }
  NnlsOptions opts;
  opts.kkt_tol = 1e-14;
  const RVector w = nnls(m, y, opts);
  Solve out;
  for (std::size_t j = 0; j < candidates.size(); ++j) {
    if (w(static_cast<Eigen::Index>(j)) > 0.0) {
      out.atoms.push_back(candidates[j]);
      out.weights.push_back(w(static_cast<Eigen::Index>(j)));
    }
  }
  out.residual = (m * w - y).norm();
  return out;
}

ToeplitzToeplitzDecomposition package(const Solve& s, double drop) {
  ToeplitzToeplitzDecomposition dec;
  dec.block.n = 2;
  dec.block.p = 2;
  std::map<double, std::size_t> by_theta;
  for (std::size_t j = 0; j < s.atoms.size(); ++j) {
    if (s.weights[j] <= drop) continue;
    const cplx lambda = std::polar(1.0, s.atoms[j].theta);
    const cplx mu = std::polar(1.0, s.atoms[j].phi);
    dec.products.push_back({lambda, mu, s.weights[j]});
    const CMatrix t2 = assemble(universal_toeplitz(2, mu));
    auto it = by_theta.find(s.atoms[j].theta);
    if (it == by_theta.end()) {
      by_theta.emplace(s.atoms[j].theta, dec.block.atoms.size());
      dec.block.atoms.push_back({lambda, s.weights[j] * t2});
    } else {
      dec.block.atoms[it->second].b += s.weights[j] * t2;
    }
  }
  return dec;
}

}  // namespace

ToeplitzToeplitzDecomposition decompose_toeplitz_toeplitz(const BlockToeplitz& x, const Grid2dOptions& options) {
  if (options.grid < 4 || options.tol <= 0.0 || options.refinements < 0) {
    throw Error(ErrorCode::BadParams, "grid2d: invalid options");
  }
  if (!x.is_hermitian()) throw Error(ErrorCode::NotHermitian, "element is not Hermitian");
  if (!is_toeplitz_toeplitz(x)) {
    throw Error(ErrorCode::DimensionMismatch, "expected n = p = 2 with Toeplitz blocks");
  }
  const PositivityCertificate cert = check_toeplitz_psd(x);
  if (cert.verdict != Verdict::StrictlyPositive) {
    throw Error(ErrorCode::NotStrictlyPositive, "λ_min = " + fmt(cert.margin));
  }

  const double scale = detail::decomposition_scale(x);
  const double target = options.tol * scale;
  const double h0 = detail::kTwoPi / options.grid;

  std::vector<Candidate> candidates;
  candidates.reserve(static_cast<std::size_t>(options.grid) * options.grid);
  for (int a = 0; a < options.grid; ++a) {
    for (int b = 0; b < options.grid; ++b) candidates.push_back({h0 * a, h0 * b});
  }
  Solve current = solve(candidates, x);

  // Local grids around the active atoms, shrinking by 4 each pass.
  double h = h0;
  for (int r = 0; r < options.refinements && current.residual > 0.25 * target; ++r) {
    h *= 0.25;
    std::vector<Candidate> local = current.atoms;
    for (const auto& atom : current.atoms) {
      for (int a = -4; a <= 4; ++a) {
        for (int b = -4; b <= 4; ++b) {
          if (a == 0 && b == 0) continue;
          local.push_back({detail::wrap_angle(atom.theta + a * h), detail::wrap_angle(atom.phi + b * h)});
        }
      }
    }
    Solve next = solve(local, x);
    if (next.residual < current.residual) current = std::move(next);
  }

  ToeplitzToeplitzDecomposition dec = package(current, 1e-14 * scale);
  dec.block.residual = reconstruction_residual(dec.block, x);
  if (dec.block.residual > target) {
    throw BudgetExhaustedError("grid2d residual " + fmt(dec.block.residual) + " above target " +
                                   fmt(target),
                               dec.block);
  }
  return dec;
}

}  // namespace tsep
