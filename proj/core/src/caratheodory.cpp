#include <algorithm>
#include <cmath>

#include "internal.hpp"
#include "tsep/positivity.hpp"
#include "tsep/separability.hpp"

namespace tsep {

namespace {

constexpr int kScanGrid = 8192;
constexpr double kRootAccept = 1e-6;

// Σ_k v_k z^k at z = e^{iθ}.
cplx kernel_poly(const CVector& v, double theta) {
  const cplx z = std::polar(1.0, theta);
  cplx acc = 0.0;
  for (Eigen::Index k = v.size() - 1; k >= 0; --k) acc = acc * z + v(k);
  return acc;
}

// Local minima of a sampled periodic function, refined by golden section.
std::vector<double> refined_minima(const std::function<double(double)>& f) {
  std::vector<double> samples(kScanGrid);
  const double h = detail::kTwoPi / kScanGrid;
  for (int k = 0; k < kScanGrid; ++k) samples[static_cast<std::size_t>(k)] = f(h * k);
  std::vector<double> out;
  for (int k = 0; k < kScanGrid; ++k) {
    const double prev = samples[static_cast<std::size_t>((k + kScanGrid - 1) % kScanGrid)];
    const double next = samples[static_cast<std::size_t>((k + 1) % kScanGrid)];
    const double here = samples[static_cast<std::size_t>(k)];
    if (here <= prev && here < next) {
      out.push_back(detail::wrap_angle(detail::golden_minimize(f, h * (k - 1), h * (k + 1))));
    }
  }
  return out;
}

std::vector<double> roots_on_circle(const std::function<double(double)>& modulus_sq) {
  std::vector<double> roots;
  for (double theta : refined_minima(modulus_sq)) {
    if (std::sqrt(std::max(modulus_sq(theta), 0.0)) <= kRootAccept) roots.push_back(theta);
  }
  return roots;
}

// Moment equations for ℓ = 0..n−1, rows weighted so the least-squares norm is
// the Frobenius norm of the assembled difference.
struct Moments {
  RMatrix m;
  RVector y;
};

double row_weight(int n, int l) { return l == 0 ? std::sqrt(double(n)) : std::sqrt(2.0 * (n - l)); }

Moments moment_system(const std::vector<double>& thetas, const BlockToeplitz& t) {
  const int n = t.n();
  Moments sys;
  sys.m.resize(2 * n, static_cast<Eigen::Index>(thetas.size()));
  sys.y.resize(2 * n);
  for (int l = 0; l < n; ++l) {
    const double w = row_weight(n, l);
    for (std::size_t j = 0; j < thetas.size(); ++j) {
      const cplx e = std::polar(1.0, l * thetas[j]);
      sys.m(2 * l, static_cast<Eigen::Index>(j)) = w * e.real();
      sys.m(2 * l + 1, static_cast<Eigen::Index>(j)) = w * e.imag();
    }
    sys.y(2 * l) = w * t.coeff(l)(0, 0).real();
    sys.y(2 * l + 1) = w * t.coeff(l)(0, 0).imag();
  }
  return sys;
}

struct Fit {
  std::vector<double> thetas;
  std::vector<double> weights;
  double residual = 0.0;
};

double fit_residual(const std::vector<double>& thetas, const std::vector<double>& weights, const BlockToeplitz& t) {
  const Moments sys = moment_system(thetas, t);
  RVector x(static_cast<Eigen::Index>(weights.size()));
  for (std::size_t j = 0; j < weights.size(); ++j) x(static_cast<Eigen::Index>(j)) = weights[j];
  return (sys.m * x - sys.y).norm();
}

Fit solve_weights(const std::vector<double>& thetas, const BlockToeplitz& t, double drop) {
  Fit fit;
  if (thetas.empty()) {
    fit.residual = fit_residual({}, {}, t);
    return fit;
  }
  const Moments sys = moment_system(thetas, t);
  const RVector x = nnls(sys.m, sys.y);
  for (std::size_t j = 0; j < thetas.size(); ++j) {
    if (x(static_cast<Eigen::Index>(j)) > drop) {
      fit.thetas.push_back(thetas[j]);
      fit.weights.push_back(x(static_cast<Eigen::Index>(j)));
    }
  }
  fit.residual = fit_residual(fit.thetas, fit.weights, t);
  return fit;
}

// Gauss–Newton on (θ_j, α_j) against the same weighted moment equations.
// Steps are accepted only when they lower the residual and keep α_j > 0.
void polish(Fit& fit, const BlockToeplitz& t) {
  const int n = t.n();
  const auto m = static_cast<Eigen::Index>(fit.thetas.size());
  if (m == 0) return;
  for (int it = 0; it < 30; ++it) {
    RMatrix jac(2 * n, 2 * m);
    RVector r(2 * n);
    for (int l = 0; l < n; ++l) {
      const double w = row_weight(n, l);
      cplx model = 0.0;
      for (Eigen::Index j = 0; j < m; ++j) {
        const cplx e = std::polar(1.0, l * fit.thetas[static_cast<std::size_t>(j)]);
        const double a = fit.weights[static_cast<std::size_t>(j)];
        model += a * e;
        const cplx d_theta = cplx(0.0, l) * a * e;
        jac(2 * l, j) = w * d_theta.real();
        jac(2 * l + 1, j) = w * d_theta.imag();
        jac(2 * l, m + j) = w * e.real();
        jac(2 * l + 1, m + j) = w * e.imag();
      }
      const cplx diff = model - t.coeff(l)(0, 0);
      r(2 * l) = w * diff.real();
      r(2 * l + 1) = w * diff.imag();
    }
    const double current = r.norm();
    if (current == 0.0) return;
    const RVector step = jac.colPivHouseholderQr().solve(-r);
    bool accepted = false;
    for (double scale = 1.0; scale > 1e-4; scale *= 0.5) {
      Fit trial = fit;
      bool ok = true;
      for (Eigen::Index j = 0; j < m; ++j) {
        trial.thetas[static_cast<std::size_t>(j)] += scale * step(j);
        trial.weights[static_cast<std::size_t>(j)] += scale * step(m + j);
        if (trial.weights[static_cast<std::size_t>(j)] <= 0.0) ok = false;
      }
      if (!ok) continue;
      trial.residual = fit_residual(trial.thetas, trial.weights, t);
      if (trial.residual < current) {
        fit = std::move(trial);
        accepted = true;
        break;
      }
    }
    if (!accepted || fit.residual >= 0.999 * current) return;
  }
}

}  // namespace

AtomicDecomposition caratheodory_scalar(const BlockToeplitz& t, double tol) {
  if (t.p() != 1) throw Error(ErrorCode::DimensionMismatch, "caratheodory_scalar needs p = 1");
  const PositivityCertificate cert = check_toeplitz_psd(t, tol);
  if (!cert.positive()) throw Error(ErrorCode::NotPositive, "input is not PSD (λ_min " + fmt(cert.margin) + ")");

  const int n = t.n();
  const double scale = detail::decomposition_scale(t);
  const double d = std::max(cert.margin, 0.0);
  BlockToeplitz shifted = t;
  shifted.coeff(0)(0, 0) -= d;

  Fit fit;
  if (shifted.max_abs_coeff() > tol * scale) {
    const CMatrix a = hermitian_part(assemble(shifted));
    const HermEig eig = herm_eig(a);
    const CVector v = eig.vectors.col(0);
    const double drop = 1e-12 * scale;

    // Atoms are the conjugates of the unit-circle roots of q.
    auto to_atoms = [](std::vector<double> roots) {
      for (double& r : roots) r = detail::wrap_angle(-r);
      return roots;
    };
    const auto q_sq = [&](double theta) { return std::norm(kernel_poly(v, theta)); };
    fit = solve_weights(to_atoms(roots_on_circle(q_sq)), shifted, drop);
    polish(fit, shifted);

    if (fit.residual > tol * scale) {
      // Common zeros of the whole kernel.
      const CMatrix kernel = kernel_basis(a, tol);
      if (kernel.cols() > 1) {
        const auto music = [&](double theta) {
          double s = 0.0;
          for (Eigen::Index c = 0; c < kernel.cols(); ++c) s += std::norm(kernel_poly(kernel.col(c), theta));
          return s;
        };
        Fit alt = solve_weights(to_atoms(roots_on_circle(music)), shifted, drop);
        polish(alt, shifted);
        if (alt.residual < fit.residual) fit = std::move(alt);
      }
    }
    if (fit.residual > tol * scale) {
      throw Error(ErrorCode::DecompositionFailed,
                  "moment residual " + fmt(fit.residual) + " above tolerance after kernel filtering");
    }
  }

  AtomicDecomposition dec;
  dec.n = n;
  dec.p = 1;
  for (std::size_t j = 0; j < fit.thetas.size(); ++j) {
    dec.atoms.push_back({std::polar(1.0, fit.thetas[j]), CMatrix::Constant(1, 1, fit.weights[j])});
  }
  // A negligible shift is left out rather than spread over n tiny atoms.
  if (d * std::sqrt(double(n)) > 1e-3 * tol * scale) {
    const auto id = detail::identity_atoms(n, 1, d / n, detail::clear_phase(n, dec.atoms));
    dec.atoms.insert(dec.atoms.end(), id.begin(), id.end());
  }
  dec.residual = reconstruction_residual(dec, t);
  if (dec.residual > tol * scale) {
    throw Error(ErrorCode::DecompositionFailed, "reconstruction residual " + fmt(dec.residual));
  }
  return dec;
}

}  // namespace tsep
