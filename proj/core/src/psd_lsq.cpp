#include <algorithm>
#include <cmath>

#include "tsep/errors.hpp"
#include "tsep/matcore.hpp"

namespace tsep {

namespace {

// Blocks are stored flattened, one row per atom, entry (i, k) of block j at
// column i + p·k. Coefficient residuals use the same layout with one row per
// slot, so the forward and adjoint maps are single matrix products.
class FlatOperator {
 public:
  explicit FlatOperator(const PsdLsqProblem& problem)
      : p_(problem.p),
        profiles_(problem.profiles),
        weights_(Eigen::Map<const RVector>(problem.weights.data(),
                                           static_cast<Eigen::Index>(problem.weights.size()))) {
    const Eigen::Index slots = profiles_.cols();
    target_.resize(slots, p_ * p_);
    for (Eigen::Index l = 0; l < slots; ++l) {
      target_.row(l) = Eigen::Map<const CVector>(problem.targets[static_cast<std::size_t>(l)].data(),
                                                 p_ * p_)
                           .transpose();
    }
    weighted_conj_ = profiles_.conjugate() * weights_.asDiagonal();
  }

  Eigen::Index atoms() const { return profiles_.rows(); }
  Eigen::Index p() const { return p_; }

  // Returns ½ Σ w_ℓ ‖R_ℓ‖² and leaves R in `residual`.
  double objective(const CMatrix& flat, CMatrix& residual) const {
    residual.noalias() = profiles_.transpose() * flat;
    residual -= target_;
    double sum = 0.0;
    for (Eigen::Index l = 0; l < residual.rows(); ++l) sum += weights_(l) * residual.row(l).squaredNorm();
    return 0.5 * sum;
  }

  void gradient(const CMatrix& residual, CMatrix& grad) const {
    grad.noalias() = weighted_conj_ * residual;
  }

  double target_norm() const {
    double sum = 0.0;
    for (Eigen::Index l = 0; l < target_.rows(); ++l) sum += weights_(l) * target_.row(l).squaredNorm();
    return std::sqrt(sum);
  }

  RMatrix gram() const { return (weighted_conj_ * profiles_.transpose()).real(); }

 private:
  Eigen::Index p_;
  CMatrix profiles_;
  RVector weights_;
  CMatrix target_;
  CMatrix weighted_conj_;
};

void project_row(CMatrix& flat, Eigen::Index row, Eigen::Index p) {
  if (p == 1) {
    flat(row, 0) = std::max(flat(row, 0).real(), 0.0);
    return;
  }
  CMatrix block(p, p);
  for (Eigen::Index k = 0; k < p; ++k) {
    for (Eigen::Index i = 0; i < p; ++i) block(i, k) = flat(row, i + p * k);
  }
  block = hermitian_part(block);
  if (p == 2) {
    const double a = block(0, 0).real();
    const double d = block(1, 1).real();
    const double r = std::hypot(0.5 * (a - d), std::abs(block(0, 1)));
    const double lo = 0.5 * (a + d) - r;
    const double hi = 0.5 * (a + d) + r;
    if (lo < 0.0) {
      if (hi <= 0.0) {
        block.setZero();
      } else {
        block = (hi / (2.0 * r)) * (block - lo * CMatrix::Identity(2, 2));
      }
    }
  } else {
    block = project_psd(block);
  }
  for (Eigen::Index k = 0; k < p; ++k) {
    for (Eigen::Index i = 0; i < p; ++i) flat(row, i + p * k) = block(i, k);
  }
}

void project_all(CMatrix& flat, Eigen::Index p) {
  for (Eigen::Index j = 0; j < flat.rows(); ++j) project_row(flat, j, p);
}

double top_eigenvalue(const RMatrix& gram) {
  const Eigen::Index m = gram.rows();
  if (m == 0) return 0.0;
  double gershgorin = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) gershgorin = std::max(gershgorin, gram.row(i).cwiseAbs().sum());
  RVector v = RVector::Ones(m) / std::sqrt(static_cast<double>(m));
  double estimate = 0.0;
  for (int it = 0; it < 300; ++it) {
    RVector next = gram * v;
    const double norm = next.norm();
    if (norm == 0.0) return gershgorin;
    const double rayleigh = v.dot(next);
    v = next / norm;
    if (it > 10 && std::abs(rayleigh - estimate) <= 1e-12 * std::abs(rayleigh)) {
      estimate = rayleigh;
      break;
    }
    estimate = rayleigh;
  }
  // Power iteration approaches from below; a small margin keeps 1/L a safe step.
  return std::min(gershgorin, 1.02 * estimate);
}

}  // namespace

PsdLsqResult psd_lsq(const PsdLsqProblem& problem, const PsdLsqOptions& options,
                     const std::vector<CMatrix>& warm_start) {
  const Eigen::Index slots = problem.profiles.cols();
  const Eigen::Index p = problem.p;
  if (static_cast<Eigen::Index>(problem.weights.size()) != slots ||
      static_cast<Eigen::Index>(problem.targets.size()) != slots) {
    throw Error(ErrorCode::DimensionMismatch, "psd_lsq: slot counts disagree");
  }
  for (const auto& t : problem.targets) {
    if (t.rows() != p || t.cols() != p) throw Error(ErrorCode::DimensionMismatch, "psd_lsq: target block size");
  }

  const FlatOperator op(problem);
  const Eigen::Index m = op.atoms();
  PsdLsqResult result;
  result.lipschitz = top_eigenvalue(op.gram());
  const double scale = std::max(1.0, op.target_norm());

  CMatrix x = CMatrix::Zero(m, p * p);
  if (!warm_start.empty()) {
    if (static_cast<Eigen::Index>(warm_start.size()) != m) {
      throw Error(ErrorCode::DimensionMismatch, "psd_lsq: warm start size");
    }
    for (Eigen::Index j = 0; j < m; ++j) {
      x.row(j) = Eigen::Map<const CVector>(warm_start[static_cast<std::size_t>(j)].data(), p * p).transpose();
    }
    project_all(x, p);
  }

  CMatrix residual;
  CMatrix grad;
  double fx = op.objective(x, residual);
  auto finish = [&](bool converged, double stationarity) {
    result.blocks.resize(static_cast<std::size_t>(m));
    for (Eigen::Index j = 0; j < m; ++j) {
      CMatrix block(p, p);
      for (Eigen::Index k = 0; k < p; ++k) {
        for (Eigen::Index i = 0; i < p; ++i) block(i, k) = x(j, i + p * k);
      }
      result.blocks[static_cast<std::size_t>(j)] = hermitian_part(block);
    }
    result.residual = std::sqrt(2.0 * std::max(fx, 0.0));
    result.converged = converged;
    result.stationarity = stationarity;
    return result;
  };

  if (m == 0 || result.lipschitz == 0.0) {
    return finish(true, 0.0);
  }
  const double step = 1.0 / result.lipschitz;

  auto stationarity_at = [&](const CMatrix& point) {
    CMatrix r;
    op.objective(point, r);
    CMatrix g;
    op.gradient(r, g);
    CMatrix moved = point - step * g;
    project_all(moved, p);
    return result.lipschitz * (point - moved).norm();
  };

  CMatrix y = x;
  CMatrix z;
  double t = 1.0;
  double stationarity = stationarity_at(x);
  if (stationarity <= options.stationarity_tol * scale ||
      (options.residual_target > 0.0 && std::sqrt(2.0 * fx) <= options.residual_target)) {
    return finish(true, stationarity);
  }

  for (int it = 1; it <= options.max_iterations; ++it) {
    op.objective(y, residual);
    op.gradient(residual, grad);
    z = y - step * grad;
    project_all(z, p);
    const double fz = op.objective(z, residual);
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    if (fz <= fx) {
      CMatrix previous = std::move(x);
      x = z;
      fx = fz;
      y = x + ((t - 1.0) / t_next) * (x - previous);
      t = t_next;
    } else {
      // Monotone restart: keep x, drop momentum.
      y = x;
      t = 1.0;
    }
    if (options.record_objective) result.objective.push_back(fx);
    result.iterations = it;

    if (options.residual_target > 0.0 && std::sqrt(2.0 * fx) <= options.residual_target) {
      return finish(true, stationarity_at(x));
    }
    if (it % 10 == 0 || it == options.max_iterations) {
      stationarity = stationarity_at(x);
      if (stationarity <= options.stationarity_tol * scale) return finish(true, stationarity);
    }
  }

  if (options.throw_on_budget) {
    throw Error(ErrorCode::NoConvergence,
                "psd_lsq: iteration budget exhausted (stationarity " + fmt(stationarity) + ")");
  }
  return finish(false, stationarity);
}

}  // namespace tsep
