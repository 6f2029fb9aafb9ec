#include <algorithm>
#include <cmath>
#include <numbers>

#include "internal.hpp"
#include "tsep/parallel.hpp"
#include "tsep/positivity.hpp"
#include "tsep/separability.hpp"

namespace tsep {

namespace {

double max_eigenvalue(const CMatrix& a) {
  if (a.rows() <= 2) return -min_eigenvalue(-a);
  return herm_eig(a).values(a.rows() - 1);
}

// s(θ) = λ_max(Σ_ℓ (n−|ℓ|) e^{−iℓθ} R_ℓ), the compression of R by γ_n ⊗ I.
class Scorer {
 public:
  explicit Scorer(const BlockToeplitz& residual) : r_(residual) {}

  double operator()(double theta) const {
    const int n = r_.n();
    CMatrix s = n * r_.coeff(0);
    for (int l = 1; l < n; ++l) {
      const cplx e = std::polar(static_cast<double>(n - l), -l * theta);
      s += e * r_.coeff(l) + std::conj(e) * r_.coeff(-l);
    }
    return max_eigenvalue(hermitian_part(s));
  }

 private:
  const BlockToeplitz& r_;
};

// Argmax over the uniform grid (smallest θ on ties), then golden refinement.
std::pair<double, double> best_angle(const BlockToeplitz& residual, int grid) {
  const Scorer score(residual);
  std::vector<double> values(static_cast<std::size_t>(grid));
  const double h = detail::kTwoPi / grid;
  parallel_for(values.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) values[k] = score(h * static_cast<double>(k));
  });
  std::size_t arg = 0;
  for (std::size_t k = 1; k < values.size(); ++k) {
    if (values[k] > values[arg]) arg = k;
  }
  const double centre = h * static_cast<double>(arg);
  const double theta = detail::golden_minimize([&](double t) { return -score(t); }, centre - h, centre + h);
  const double refined = score(theta);
  if (refined >= values[arg]) return {detail::wrap_angle(theta), refined};
  return {centre, values[arg]};
}

AtomicDecomposition make_decomposition(const BlockToeplitz& t, const std::vector<cplx>& atoms,
                                       const std::vector<CMatrix>& blocks) {
  AtomicDecomposition dec;
  dec.n = t.n();
  dec.p = t.p();
  for (std::size_t j = 0; j < atoms.size(); ++j) dec.atoms.push_back({atoms[j], blocks[j]});
  return dec;
}

// Joint Levenberg–Marquardt on angles θ_j and factors b_j = C_j* C_j.
//
// Grid angles are only accurate to the refinement width, and with the angles
// frozen the block fit converges slowly on near-collinear atoms, which stalls
// the pursuit on low-rank T. The residual has 2np² real rows (ℓ ≥ 0, mirrored
// slots folded into the weights) and is usually far shorter than the unknown
// vector, so steps solve (JJᵗ + μI) y = r and move by −Jᵗ y.
class JointPolish {
 public:
  JointPolish(const BlockToeplitz& t) : t_(t), n_(t.n()), p_(t.p()) {
    for (int l = 0; l < n_; ++l) sqrt_w_.push_back(std::sqrt(l == 0 ? n_ : 2.0 * (n_ - l)));
  }

  void run(std::vector<double>& theta, std::vector<CMatrix>& blocks, int iterations) const {
    const std::size_t m = theta.size();
    std::vector<CMatrix> c(m);
    for (std::size_t j = 0; j < m; ++j) {
      const HermEig eig = herm_eig(hermitian_part(blocks[j]));
      RVector root = eig.values.cwiseMax(0.0).cwiseSqrt();
      c[j] = root.asDiagonal() * eig.vectors.adjoint();
    }
    RVector r = residual(theta, c);
    double f = r.squaredNorm();
    double mu = 1e-3 * std::max(f, 1e-300);
    for (int it = 0; it < iterations && f > 0.0; ++it) {
      const RMatrix jac = jacobian(theta, c);
      const RMatrix gram = jac * jac.transpose();
      bool accepted = false;
      for (int attempt = 0; attempt < 10 && !accepted; ++attempt) {
        RMatrix h = gram;
        h.diagonal().array() += mu;
        const RVector step = -(jac.transpose() * h.ldlt().solve(r));
        std::vector<double> th = theta;
        std::vector<CMatrix> cc = c;
        apply_step(step, th, cc);
        const RVector rt = residual(th, cc);
        const double ft = rt.squaredNorm();
        if (std::isfinite(ft) && ft < f) {
          const double gain = f - ft;
          theta = std::move(th);
          c = std::move(cc);
          r = rt;
          f = ft;
          mu = std::max(mu / 5.0, 1e-15 * f);
          accepted = true;
          if (gain <= 1e-12 * f) it = iterations;
        } else {
          mu *= 8.0;
        }
      }
      if (!accepted) break;
    }
    for (std::size_t j = 0; j < m; ++j) blocks[j] = c[j].adjoint() * c[j];
  }

 private:
  Eigen::Index rows() const { return static_cast<Eigen::Index>(2 * n_) * p_ * p_; }

  // Real and imaginary parts of √w_ℓ (τ_ℓ − Σ_j e^{iℓθ_j} C_j* C_j), ℓ ≥ 0.
  RVector residual(const std::vector<double>& theta, const std::vector<CMatrix>& c) const {
    RVector r(rows());
    std::vector<CMatrix> b(theta.size());
    for (std::size_t j = 0; j < theta.size(); ++j) b[j] = c[j].adjoint() * c[j];
    Eigen::Index row = 0;
    for (int l = 0; l < n_; ++l) {
      CMatrix d = t_.coeff(l);
      for (std::size_t j = 0; j < theta.size(); ++j) d -= std::polar(1.0, l * theta[j]) * b[j];
      d *= sqrt_w_[static_cast<std::size_t>(l)];
      for (Eigen::Index i = 0; i < d.size(); ++i) {
        r(row++) = d(i).real();
        r(row++) = d(i).imag();
      }
    }
    return r;
  }

  // Columns per atom: θ_j, then Re and Im of each entry of C_j.
  RMatrix jacobian(const std::vector<double>& theta, const std::vector<CMatrix>& c) const {
    const Eigen::Index per = 1 + 2 * p_ * p_;
    RMatrix jac(rows(), per * static_cast<Eigen::Index>(theta.size()));
    auto put = [&](Eigen::Index col, const std::vector<CMatrix>& d) {
      Eigen::Index row = 0;
      for (int l = 0; l < n_; ++l) {
        const CMatrix& dl = d[static_cast<std::size_t>(l)];
        for (Eigen::Index i = 0; i < dl.size(); ++i) {
          jac(row++, col) = dl(i).real();
          jac(row++, col) = dl(i).imag();
        }
      }
    };
    std::vector<CMatrix> d(static_cast<std::size_t>(n_));
    for (std::size_t j = 0; j < theta.size(); ++j) {
      const Eigen::Index base = per * static_cast<Eigen::Index>(j);
      const CMatrix b = c[j].adjoint() * c[j];
      std::vector<cplx> phase;
      for (int l = 0; l < n_; ++l) phase.push_back(-sqrt_w_[static_cast<std::size_t>(l)] * std::polar(1.0, l * theta[j]));
      for (int l = 0; l < n_; ++l) d[static_cast<std::size_t>(l)] = phase[static_cast<std::size_t>(l)] * cplx(0.0, l) * b;
      put(base, d);
      for (int a = 0; a < p_; ++a) {
        for (int k = 0; k < p_; ++k) {
          // dC = E_ak gives dB = E_ka C + C* E_ak; dC = iE_ak gives i(C* E_ak − E_ka C).
          CMatrix left = CMatrix::Zero(p_, p_);
          left.row(k) = c[j].row(a);
          CMatrix right = CMatrix::Zero(p_, p_);
          right.col(k) = c[j].row(a).adjoint();
          const CMatrix d_re = left + right;
          const CMatrix d_im = cplx(0.0, 1.0) * (right - left);
          const Eigen::Index col = base + 1 + 2 * (a * p_ + k);
          for (int l = 0; l < n_; ++l) d[static_cast<std::size_t>(l)] = phase[static_cast<std::size_t>(l)] * d_re;
          put(col, d);
          for (int l = 0; l < n_; ++l) d[static_cast<std::size_t>(l)] = phase[static_cast<std::size_t>(l)] * d_im;
          put(col + 1, d);
        }
      }
    }
    return jac;
  }

  void apply_step(const RVector& step, std::vector<double>& theta, std::vector<CMatrix>& c) const {
    const Eigen::Index per = 1 + 2 * p_ * p_;
    for (std::size_t j = 0; j < theta.size(); ++j) {
      const Eigen::Index base = per * static_cast<Eigen::Index>(j);
      theta[j] += std::clamp(step(base), -std::numbers::pi / n_, std::numbers::pi / n_);
      for (int a = 0; a < p_; ++a) {
        for (int k = 0; k < p_; ++k) {
          const Eigen::Index col = base + 1 + 2 * (a * p_ + k);
          c[j](a, k) += cplx(step(col), step(col + 1));
        }
      }
    }
  }

  const BlockToeplitz& t_;
  int n_;
  int p_;
  std::vector<double> sqrt_w_;
};

// Atoms that slid together are fused; their blocks add.
void merge_close(std::vector<double>& theta, std::vector<CMatrix>& blocks) {
  for (std::size_t j = 0; j < theta.size(); ++j) {
    for (std::size_t k = theta.size(); k-- > j + 1;) {
      if (angular_distance(std::polar(1.0, theta[j]), std::polar(1.0, theta[k])) < detail::kMergeAngle) {
        blocks[j] += blocks[k];
        theta.erase(theta.begin() + static_cast<std::ptrdiff_t>(k));
        blocks.erase(blocks.begin() + static_cast<std::ptrdiff_t>(k));
      }
    }
  }
}

}  // namespace

AtomicDecomposition decompose_block(const BlockToeplitz& t, const GreedyOptions& options) {
  if (options.tol <= 0.0 || options.max_atoms < 1 || options.max_rounds < 1 || options.grid < 8) {
    throw Error(ErrorCode::BadParams, "decompose_block: invalid budget");
  }
  const PositivityCertificate cert = check_toeplitz_psd(t);
  if (!cert.positive()) throw Error(ErrorCode::NotPositive, "input is not PSD (λ_min " + fmt(cert.margin) + ")");

  const double scale = detail::decomposition_scale(t);
  const double target = options.tol * scale;
  const double drop = 1e-12 * scale;

  std::vector<cplx> atoms;
  std::vector<CMatrix> blocks;
  BlockToeplitz residual = t;
  double residual_norm = t.frobenius_norm();

  AtomicDecomposition best = make_decomposition(t, atoms, blocks);
  best.residual = residual_norm;
  if (residual_norm <= target) return best;

  PsdLsqOptions lsq;
  lsq.max_iterations = options.inner_iterations;
  lsq.stationarity_tol = 1e-13;
  lsq.residual_target = 0.5 * target;
  lsq.throw_on_budget = false;

  for (int round = 1; round <= options.max_rounds; ++round) {
    const auto [theta, value] = best_angle(residual, options.grid);
    const cplx candidate = std::polar(1.0, theta);
    const bool duplicate = std::any_of(atoms.begin(), atoms.end(), [&](cplx a) {
      return angular_distance(a, candidate) < detail::kMergeAngle;
    });
    if (value > 0.0 && !duplicate && static_cast<int>(atoms.size()) < options.max_atoms) {
      atoms.push_back(candidate);
      blocks.push_back(CMatrix::Zero(t.p(), t.p()));
    }
    if (atoms.empty()) break;

    const PsdLsqResult fit = psd_lsq(atoms, t, lsq, blocks);
    std::vector<cplx> kept_atoms;
    std::vector<CMatrix> kept_blocks;
    for (std::size_t j = 0; j < atoms.size(); ++j) {
      if (fit.blocks[j].norm() > drop) {
        kept_atoms.push_back(atoms[j]);
        kept_blocks.push_back(fit.blocks[j]);
      }
    }
    blocks = std::move(kept_blocks);

    std::vector<double> angles;
    for (cplx a : kept_atoms) angles.push_back(std::arg(a));
    JointPolish(t).run(angles, blocks, 30);
    merge_close(angles, blocks);
    atoms.clear();
    for (double th : angles) atoms.push_back(std::polar(1.0, detail::wrap_angle(th)));

    AtomicDecomposition current = make_decomposition(t, atoms, blocks);
    residual = t - current.reconstruct();
    residual_norm = residual.frobenius_norm();
    current.residual = residual_norm;
    if (residual_norm < best.residual) best = current;
    if (residual_norm <= target) {
      best.residual = reconstruction_residual(best, t);
      return best;
    }
  }
  best.residual = reconstruction_residual(best, t);
  throw BudgetExhaustedError("greedy pursuit stopped at residual " + fmt(best.residual) +
                                 " (target " + fmt(target) + ")",
                             std::move(best));
}

}  // namespace tsep
