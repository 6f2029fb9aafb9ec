#include "tsep/matcore.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "tsep/errors.hpp"

namespace tsep {

namespace {

constexpr int kMaxSweeps = 64;
constexpr double kOffDiagonalTol = 1e-13;

double off_diagonal_norm(const CMatrix& a) {
  double sum = 0.0;
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      if (i != j) sum += std::norm(a(i, j));
    }
  }
  return std::sqrt(sum);
}

void require_hermitian(const CMatrix& a) {
  if (a.rows() != a.cols()) {
    throw Error(ErrorCode::NotHermitian, "matrix is not square");
  }
  if (!is_hermitian(a)) {
    throw Error(ErrorCode::NotHermitian, "matrix differs from its adjoint");
  }
}

}  // namespace

double max_abs(const CMatrix& a) {
  return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

double tol_scale(const CMatrix& a) { return std::max(1.0, max_abs(a)); }

bool is_hermitian(const CMatrix& a, double rel_tol) {
  if (a.rows() != a.cols()) return false;
  const double scale = max_abs(a);
  const double dev = max_abs(a - a.adjoint());
  return dev <= rel_tol * scale;
}

CMatrix hermitian_part(const CMatrix& a) { return 0.5 * (a + a.adjoint()); }

HermEig herm_eig(const CMatrix& input) {
  require_hermitian(input);
  const Eigen::Index n = input.rows();
  CMatrix a = hermitian_part(input);
  CMatrix v = CMatrix::Identity(n, n);
  const double norm = a.norm();

  int sweep = 0;
  for (;; ++sweep) {
    if (off_diagonal_norm(a) <= kOffDiagonalTol * norm) break;
    if (sweep == kMaxSweeps) {
      throw Error(ErrorCode::NoConvergence, "Jacobi sweep budget exhausted");
    }
    for (Eigen::Index p = 0; p + 1 < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const cplx apq = a(p, q);
        const double mag = std::abs(apq);
        if (mag == 0.0) continue;
        const cplx phase = apq / mag;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double tau = (aqq - app) / (2.0 * mag);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        // G = [[c, s·e^{iφ}], [−s·e^{−iφ}, c]] on coordinates (p, q).
        const cplx gpq = s * phase;
        const cplx gqp = -s * std::conj(phase);
        for (Eigen::Index k = 0; k < n; ++k) {
          const cplx akp = a(k, p);
          const cplx akq = a(k, q);
          a(k, p) = c * akp + gqp * akq;
          a(k, q) = gpq * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const cplx apk = a(p, k);
          const cplx aqk = a(q, k);
          a(p, k) = c * apk + std::conj(gqp) * aqk;
          a(q, k) = std::conj(gpq) * apk + c * aqk;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const cplx vkp = v(k, p);
          const cplx vkq = v(k, q);
          v(k, p) = c * vkp + gqp * vkq;
          v(k, q) = gpq * vkp + c * vkq;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
      }
    }
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index i, Eigen::Index j) {
    return a(i, i).real() < a(j, j).real();
  });

  HermEig out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values(k) = a(order[k], order[k]).real();
    out.vectors.col(k) = v.col(order[k]);
  }
  out.sweeps = sweep;
  return out;
}

double min_eigenvalue(const CMatrix& a) {
  require_hermitian(a);
  if (a.rows() == 0) return 0.0;
  if (a.rows() == 1) return a(0, 0).real();
  if (a.rows() == 2) {
    const double p = a(0, 0).real();
    const double q = a(1, 1).real();
    const double h = 0.5 * (p - q);
    return 0.5 * (p + q) - std::hypot(h, std::abs(a(0, 1)));
  }
  return herm_eig(a).values(0);
}

PsdTest is_psd(const CMatrix& a, double tol) {
  const HermEig eig = herm_eig(a);
  PsdTest out;
  if (a.rows() == 0) {
    out.psd = true;
    return out;
  }
  out.min_eigenvalue = eig.values(0);
  out.witness = eig.vectors.col(0);
  out.psd = out.min_eigenvalue >= -tol * tol_scale(a);
  return out;
}

CMatrix kernel_basis(const CMatrix& a, double tol) {
  const HermEig eig = herm_eig(a);
  const double threshold = tol * max_abs(a);
  Eigen::Index count = 0;
  while (count < eig.values.size() && eig.values(count) <= threshold) ++count;
  return eig.vectors.leftCols(count);
}

CMatrix psd_factor(const CMatrix& b, double tol) {
  const HermEig eig = herm_eig(b);
  const Eigen::Index n = b.rows();
  if (n > 0 && eig.values(0) < -tol * tol_scale(b)) {
    throw Error(ErrorCode::NotPSD, "negative eigenvalue " + fmt(eig.values(0)));
  }
  const double threshold = tol * max_abs(b);
  std::vector<Eigen::Index> kept;
  for (Eigen::Index k = n - 1; k >= 0; --k) {
    if (eig.values(k) > threshold) kept.push_back(k);
  }
  CMatrix c(static_cast<Eigen::Index>(kept.size()), n);
  for (std::size_t r = 0; r < kept.size(); ++r) {
    const Eigen::Index k = kept[r];
    c.row(static_cast<Eigen::Index>(r)) = std::sqrt(eig.values(k)) * eig.vectors.col(k).adjoint();
  }
  return c;
}

CMatrix project_psd(const CMatrix& a) {
  const Eigen::Index n = a.rows();
  if (n == 1) return CMatrix::Constant(1, 1, std::max(a(0, 0).real(), 0.0));
  const HermEig eig = herm_eig(hermitian_part(a));
  if (n == 0 || eig.values(0) >= 0.0) return hermitian_part(a);
  CMatrix out = CMatrix::Zero(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    if (eig.values(k) > 0.0) {
      out.noalias() += eig.values(k) * eig.vectors.col(k) * eig.vectors.col(k).adjoint();
    }
  }
  return out;
}

RVector nnls(const RMatrix& m, const RVector& y, const NnlsOptions& options) {
  const Eigen::Index cols = m.cols();
  if (m.rows() != y.size()) {
    throw Error(ErrorCode::DimensionMismatch, "nnls: rows(M) != size(y)");
  }
  if (!m.allFinite() || !y.allFinite()) {
    throw Error(ErrorCode::BadParams, "nnls: non-finite input");
  }
  const int budget = options.max_iterations > 0 ? options.max_iterations
                                                : static_cast<int>(3 * cols + 50);
  const double tol = options.kkt_tol * std::max(1.0, m.norm() * y.norm());

  RVector x = RVector::Zero(cols);
  std::vector<bool> passive(static_cast<std::size_t>(cols), false);
  std::vector<bool> blocked(static_cast<std::size_t>(cols), false);

  auto solve_passive = [&](RVector& z) {
    std::vector<Eigen::Index> idx;
    for (Eigen::Index j = 0; j < cols; ++j) {
      if (passive[j]) idx.push_back(j);
    }
    z.setZero(cols);
    if (idx.empty()) return;
    RMatrix sub(m.rows(), static_cast<Eigen::Index>(idx.size()));
    for (std::size_t k = 0; k < idx.size(); ++k) sub.col(static_cast<Eigen::Index>(k)) = m.col(idx[k]);
    const RVector zs = sub.colPivHouseholderQr().solve(y);
    for (std::size_t k = 0; k < idx.size(); ++k) z(idx[k]) = zs(static_cast<Eigen::Index>(k));
  };

  RVector w = m.transpose() * (y - m * x);
  for (int iter = 0;; ++iter) {
    Eigen::Index best = -1;
    double best_w = tol;
    for (Eigen::Index j = 0; j < cols; ++j) {
      if (!passive[j] && !blocked[j] && w(j) > best_w) {
        best_w = w(j);
        best = j;
      }
    }
    if (best < 0) break;
    if (iter >= budget) {
      throw Error(ErrorCode::NoConvergence, "nnls: iteration budget exhausted");
    }
    passive[best] = true;

    RVector z;
    solve_passive(z);
    if (z(best) <= 0.0) {
      // Entering column cannot move off the bound in exact arithmetic; keep it
      // out until x changes to avoid cycling on round-off.
      passive[best] = false;
      blocked[best] = true;
      continue;
    }
    for (int inner = 0; inner <= cols; ++inner) {
      double alpha = 1.0;
      Eigen::Index leaving = -1;
      for (Eigen::Index j = 0; j < cols; ++j) {
        if (passive[j] && z(j) <= 0.0) {
          const double denom = x(j) - z(j);
          const double ratio = denom > 0.0 ? x(j) / denom : 0.0;
          if (leaving < 0 || ratio < alpha) {
            alpha = ratio;
            leaving = j;
          }
        }
      }
      if (leaving < 0) break;
      x += alpha * (z - x);
      x(leaving) = 0.0;
      for (Eigen::Index j = 0; j < cols; ++j) {
        if (passive[j] && x(j) <= 0.0) {
          passive[j] = false;
          x(j) = 0.0;
        }
      }
      solve_passive(z);
    }
    for (Eigen::Index j = 0; j < cols; ++j) x(j) = passive[j] ? std::max(z(j), 0.0) : 0.0;
    std::fill(blocked.begin(), blocked.end(), false);
    w = m.transpose() * (y - m * x);
  }
  return x;
}

}  // namespace tsep
