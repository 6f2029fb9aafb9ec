#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "tsep/errors.hpp"
#include "tsep/generators.hpp"
#include "tsep/matcore.hpp"
#include "tsep/rng.hpp"

using namespace tsep;

namespace {

CMatrix random_matrix(int rows, int cols, Rng& rng) {
  CMatrix m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) m(i, j) = rng.complex_normal();
  }
  return m;
}

}  // namespace

TEST(HermEig, IdentityIsDiagonal) {
  const HermEig e = herm_eig(CMatrix::Identity(2, 2));
  EXPECT_DOUBLE_EQ(e.values(0), 1.0);
  EXPECT_DOUBLE_EQ(e.values(1), 1.0);
  EXPECT_LE((e.vectors - CMatrix::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(HermEig, AllOnesTwoByTwo) {
  CMatrix a(2, 2);
  a << 1.0, 1.0, 1.0, 1.0;
  const HermEig e = herm_eig(a);
  EXPECT_NEAR(e.values(0), 0.0, 1e-15);
  EXPECT_NEAR(e.values(1), 2.0, 1e-15);
}

TEST(HermEig, ReconstructsRandomHermitianUpTo32) {
  Rng rng(11);
  for (int dim : {1, 2, 3, 6, 9, 16, 32}) {
    const CMatrix h = random_hermitian(dim, rng);
    const HermEig e = herm_eig(h);
    const CMatrix back = e.vectors * e.values.cast<cplx>().asDiagonal() * e.vectors.adjoint();
    EXPECT_LE((back - h).norm(), 1e-10 * h.norm()) << "dim " << dim;
    EXPECT_LE((e.vectors.adjoint() * e.vectors - CMatrix::Identity(dim, dim)).cwiseAbs().maxCoeff(), 1e-10);
    for (Eigen::Index i = 1; i < e.values.size(); ++i) EXPECT_LE(e.values(i - 1), e.values(i));
    const RVector ref = oracle::eigenvalues(h);
    EXPECT_LE((ref - e.values).cwiseAbs().maxCoeff(), 1e-11 * std::max(1.0, h.norm()));
  }
}

TEST(HermEig, RejectsNonHermitian) {
  CMatrix a(2, 2);
  a << 1.0, 2.0, 0.0, 1.0;
  try {
    herm_eig(a);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotHermitian);
  }
}

TEST(MinEigenvalue, MatchesEigenOnSmallOrders) {
  Rng rng(5);
  for (int dim = 1; dim <= 5; ++dim) {
    for (int trial = 0; trial < 20; ++trial) {
      const CMatrix h = random_hermitian(dim, rng);
      EXPECT_NEAR(min_eigenvalue(h), oracle::min_eig(h), 1e-12 * std::max(1.0, h.norm()));
    }
  }
}

TEST(IsPsd, ZeroMatrix) {
  const PsdTest t = is_psd(CMatrix::Zero(3, 3));
  EXPECT_TRUE(t.psd);
  EXPECT_EQ(t.min_eigenvalue, 0.0);
}

TEST(IsPsd, SmallNegativeEigenvalueWithWitness) {
  CMatrix a = CMatrix::Zero(2, 2);
  a(0, 0) = 1.0;
  a(1, 1) = -1e-3;
  const PsdTest t = is_psd(a, 1e-8);
  EXPECT_FALSE(t.psd);
  EXPECT_NEAR(t.min_eigenvalue, -1e-3, 1e-15);
  EXPECT_NEAR(std::abs(t.witness(1)), 1.0, 1e-12);
  EXPECT_NEAR(std::abs(t.witness(0)), 0.0, 1e-12);
}

TEST(IsPsd, GramMatricesAndShiftThresholds) {
  Rng rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    const int dim = 1 + trial % 6;
    const CMatrix b = random_matrix(dim + 1, dim, rng);
    EXPECT_TRUE(is_psd(b.adjoint() * b).psd);

    const CMatrix a = random_hermitian(dim, rng);
    const double lmin = oracle::min_eig(a);
    const double eps = 1e-6 * a.norm();
    const CMatrix id = CMatrix::Identity(dim, dim);
    EXPECT_TRUE(is_psd(a - (lmin - eps) * id).psd);
    EXPECT_FALSE(is_psd(a - (lmin + eps) * id).psd);
  }
}

TEST(KernelBasis, IdentityHasNone) { EXPECT_EQ(kernel_basis(CMatrix::Identity(3, 3)).cols(), 0); }

TEST(KernelBasis, RankOneComplement) {
  CMatrix a(2, 2);
  a << 1.0, 1.0, 1.0, 1.0;
  const CMatrix k = kernel_basis(a);
  ASSERT_EQ(k.cols(), 1);
  EXPECT_NEAR(std::abs(k(0, 0) + k(1, 0)), 0.0, 1e-14);
  EXPECT_NEAR(k.col(0).norm(), 1.0, 1e-14);
}

TEST(KernelBasis, TensorRankOracle) {
  Rng rng(13);
  for (int dim = 2; dim <= 5; ++dim) {
    CVector v = random_matrix(dim, 1, rng).col(0);
    v.normalize();
    const CMatrix a = oracle::kron(v * v.adjoint(), CMatrix::Identity(2, 2));
    const CMatrix k = kernel_basis(a);
    EXPECT_EQ(k.cols(), 2 * (dim - 1));
    EXPECT_LE((k.adjoint() * k - CMatrix::Identity(k.cols(), k.cols())).cwiseAbs().maxCoeff(), 1e-12);
    for (Eigen::Index c = 0; c < k.cols(); ++c) {
      EXPECT_LE((a * k.col(c)).norm(), kDefaultTol * std::sqrt(static_cast<double>(a.rows())));
    }
  }
}

TEST(PsdFactor, Examples) {
  const CMatrix c = psd_factor(CMatrix::Identity(2, 2));
  EXPECT_LE((c.adjoint() * c - CMatrix::Identity(2, 2)).norm(), 1e-12);

  CMatrix b = CMatrix::Zero(2, 2);
  b(0, 0) = 2.0;
  const CMatrix f = psd_factor(b);
  ASSERT_EQ(f.rows(), 1);
  EXPECT_NEAR(std::abs(f(0, 0)), std::sqrt(2.0), 1e-14);
  EXPECT_NEAR(std::abs(f(0, 1)), 0.0, 1e-14);
}

TEST(PsdFactor, RandomGramRankTwo) {
  Rng rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    const CMatrix x = random_matrix(2, 4, rng);
    const CMatrix g = x.adjoint() * x;
    const CMatrix c = psd_factor(g);
    EXPECT_EQ(c.rows(), 2);
    EXPECT_LE((c.adjoint() * c - g).norm(), 1e-10 * std::max(1.0, g.norm()));
    // Refactoring the product keeps it.
    const CMatrix c2 = psd_factor(c.adjoint() * c);
    EXPECT_NEAR((c2.adjoint() * c2).norm(), g.norm(), 1e-10 * g.norm());
  }
}

TEST(PsdFactor, RejectsIndefinite) {
  CMatrix a = CMatrix::Identity(2, 2);
  a(1, 1) = -1.0;
  try {
    psd_factor(a);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotPSD);
  }
}

TEST(Nnls, Examples) {
  const RMatrix id = RMatrix::Identity(2, 2);
  RVector y(2);
  y << 1.0, 2.0;
  RVector x = nnls(id, y);
  EXPECT_NEAR(x(0), 1.0, 1e-14);
  EXPECT_NEAR(x(1), 2.0, 1e-14);
  y << -1.0, 2.0;
  x = nnls(id, y);
  EXPECT_EQ(x(0), 0.0);
  EXPECT_NEAR(x(1), 2.0, 1e-14);
}

TEST(Nnls, ConsistentOverdeterminedRecoveryAndKkt) {
  Rng rng(19);
  for (int trial = 0; trial < 20; ++trial) {
    const int rows = 12;
    const int cols = 6;
    RMatrix m(rows, cols);
    for (int i = 0; i < rows; ++i) {
      for (int j = 0; j < cols; ++j) m(i, j) = rng.normal();
    }
    RVector x0(cols);
    for (int j = 0; j < cols; ++j) x0(j) = (j % 3 == 0) ? 0.0 : rng.uniform(0.5, 2.0);
    const RVector x = nnls(m, m * x0);
    EXPECT_LE((x - x0).cwiseAbs().maxCoeff(), 1e-8);

    // KKT on an inconsistent system.
    RVector y(rows);
    for (int i = 0; i < rows; ++i) y(i) = rng.normal();
    const RVector z = nnls(m, y);
    const RVector grad = m.transpose() * (m * z - y);
    const double scale = std::max(1.0, m.norm() * y.norm());
    for (int j = 0; j < cols; ++j) {
      EXPECT_GE(z(j), 0.0);
      if (z(j) > 0.0) {
        EXPECT_LE(std::abs(grad(j)), 1e-9 * scale);
      } else {
        EXPECT_GE(grad(j), -1e-9 * scale);
      }
    }
  }
}
