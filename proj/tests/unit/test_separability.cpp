#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "tsep/dilation.hpp"
#include "tsep/errors.hpp"
#include "tsep/generators.hpp"
#include "tsep/separability.hpp"

using namespace tsep;

namespace {

constexpr double kPi = std::numbers::pi;

template <class F>
void expect_code(ErrorCode code, F&& f) {
  try {
    f();
    ADD_FAILURE() << "no error raised";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), code) << e.what();
  }
}

// Angles at least `gap` apart on the circle.
std::vector<double> separated_angles(int m, double gap, Rng& rng) {
  std::vector<double> out;
  while (static_cast<int>(out.size()) < m) {
    const double t = rng.uniform(0.0, 2.0 * kPi);
    bool ok = true;
    for (double s : out) ok = ok && angular_distance(std::polar(1.0, s), std::polar(1.0, t)) >= gap;
    if (ok) out.push_back(t);
  }
  return out;
}

void expect_sound(const AtomicDecomposition& dec, const BlockToeplitz& t) {
  const double scale = std::max(1.0, t.frobenius_norm());
  for (std::size_t i = 0; i < dec.atoms.size(); ++i) {
    const Atom& a = dec.atoms[i];
    EXPECT_NEAR(std::abs(a.lambda), 1.0, 1e-12);
    EXPECT_GE(oracle::min_eig(a.b), -1e-10 * scale);
    for (std::size_t j = 0; j < i; ++j) EXPECT_GT(angular_distance(a.lambda, dec.atoms[j].lambda), 1e-6);
  }
  EXPECT_NEAR(oracle::decomposition_residual(dec, t), dec.residual, 1e-10 * scale);
}

CMatrix e(int p, int i) {
  CMatrix m = CMatrix::Zero(p, p);
  m(i, i) = 1.0;
  return m;
}

BlockToeplitz product_atom(cplx lambda, cplx mu) {
  return tensor(universal_toeplitz(2, lambda), assemble(universal_toeplitz(2, mu)));
}

}  // namespace

TEST(DecomposeIdentity, Examples) {
  const AtomicDecomposition one = decompose_identity(1);
  ASSERT_EQ(one.atoms.size(), 1u);
  EXPECT_EQ(one.atoms[0].lambda, cplx(1.0));
  EXPECT_EQ(one.atoms[0].b(0, 0), cplx(1.0));

  const AtomicDecomposition two = decompose_identity(2);
  ASSERT_EQ(two.atoms.size(), 2u);
  EXPECT_NEAR(std::abs(two.atoms[0].lambda - 1.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(two.atoms[1].lambda + 1.0), 0.0, 1e-15);
  for (const auto& a : two.atoms) EXPECT_NEAR(a.b(0, 0).real(), 0.5, 1e-15);

  const AtomicDecomposition four = decompose_identity(4);
  const cplx expected[] = {1.0, cplx(0, 1), -1.0, cplx(0, -1)};
  ASSERT_EQ(four.atoms.size(), 4u);
  for (int k = 0; k < 4; ++k) {
    EXPECT_NEAR(std::abs(four.atoms[k].lambda - expected[k]), 0.0, 1e-15);
    EXPECT_NEAR(four.atoms[k].b(0, 0).real(), 0.25, 1e-15);
  }
}

TEST(DecomposeIdentity, ExactForAllOrders) {
  for (int n = 1; n <= 12; ++n) {
    const AtomicDecomposition dec = decompose_identity(n);
    EXPECT_LE(oracle::decomposition_residual(dec, BlockToeplitz::order_unit(n, 1)), 1e-13);
    EXPECT_LE(dec.residual, 1e-13);
  }
}

TEST(Caratheodory, PureInputIsOneAtom) {
  Rng rng(201);
  for (int n = 1; n <= 8; ++n) {
    const cplx lambda = rng.unit_complex();
    const BlockToeplitz t = universal_toeplitz(n, lambda);
    const AtomicDecomposition dec = caratheodory_scalar(t);
    if (n == 1) {
      EXPECT_LE(dec.residual, 1e-12);
      continue;
    }
    ASSERT_EQ(dec.atoms.size(), 1u) << "n " << n;
    EXPECT_LE(angular_distance(dec.atoms[0].lambda, lambda), 1e-8);
    EXPECT_NEAR(dec.atoms[0].b(0, 0).real(), 1.0, 1e-8);
  }
}

TEST(Caratheodory, IdentityOfOrderTwo) {
  const AtomicDecomposition dec = caratheodory_scalar(BlockToeplitz::order_unit(2, 1));
  ASSERT_EQ(dec.atoms.size(), 2u);
  std::vector<double> re;
  for (const auto& a : dec.atoms) {
    re.push_back(a.lambda.real());
    EXPECT_NEAR(a.b(0, 0).real(), 0.5, 1e-12);
  }
  std::sort(re.begin(), re.end());
  EXPECT_NEAR(re[0], -1.0, 1e-12);
  EXPECT_NEAR(re[1], 1.0, 1e-12);
  EXPECT_LE(oracle::decomposition_residual(dec, BlockToeplitz::order_unit(2, 1)), 1e-12);
}

TEST(Caratheodory, RecoversThreeAtomsAtOrderFive) {
  Rng rng(203);
  for (int trial = 0; trial < 20; ++trial) {
    const std::vector<double> angles = separated_angles(3, 0.1, rng);
    AtomicDecomposition truth;
    truth.n = 5;
    BlockToeplitz t(5, 1);
    for (double a : angles) {
      const double w = rng.uniform(0.5, 2.0);
      truth.atoms.push_back({std::polar(1.0, a), CMatrix::Constant(1, 1, w)});
      t += BlockToeplitz(cplx(w) * universal_toeplitz(5, std::polar(1.0, a)));
    }
    const AtomicDecomposition dec = caratheodory_scalar(t);
    const auto [angle_err, weight_err] = oracle::match_scalar_atoms(truth.atoms, dec.atoms);
    EXPECT_LE(angle_err, 1e-8);
    EXPECT_LE(weight_err, 1e-8);
    expect_sound(dec, t);
  }
}

TEST(Caratheodory, FullRankInputsWithinTolerance) {
  Rng rng(205);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 1 + trial % 8;
    const BlockToeplitz t = gen_density(n, 1, rng);
    const AtomicDecomposition dec = caratheodory_scalar(t);
    EXPECT_LE(static_cast<int>(dec.atoms.size()), 2 * n);
    EXPECT_LE(dec.residual, kDefaultTol * std::max(1.0, t.frobenius_norm()));
    expect_sound(dec, t);
  }
}

TEST(Caratheodory, RejectsIndefinite) {
  BlockToeplitz t(2, 1);
  t.coeff(0)(0, 0) = 1.0;
  t.coeff(1)(0, 0) = 2.0;
  t.coeff(-1)(0, 0) = 2.0;
  expect_code(ErrorCode::NotPositive, [&] { caratheodory_scalar(t); });
}

TEST(DecomposeBlock, PureElementIsOneAtom) {
  Rng rng(207);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 2 + trial % 5;
    const int p = 1 + trial % 3;
    const cplx lambda = rng.unit_complex();
    const CMatrix q = random_rank_one_projection(p, rng);
    const BlockToeplitz t = tensor(universal_toeplitz(n, std::conj(lambda)), q);
    const AtomicDecomposition dec = decompose_block(t);
    EXPECT_LE(dec.residual, 1e-10);
    ASSERT_EQ(dec.atoms.size(), 1u);
    EXPECT_LE(angular_distance(dec.atoms[0].lambda, std::conj(lambda)), 1e-9);
    EXPECT_LE((dec.atoms[0].b - q).cwiseAbs().maxCoeff(), 1e-9);
    expect_sound(dec, t);
  }
}

TEST(DecomposeBlock, OrderUnitWithFewAtoms) {
  const BlockToeplitz t = BlockToeplitz::order_unit(2, 2);
  const AtomicDecomposition dec = decompose_block(t);
  EXPECT_LE(dec.residual, 1e-8);
  EXPECT_LE(dec.atoms.size(), 4u);
  expect_sound(dec, t);
}

TEST(DecomposeBlock, DensityInstances) {
  Rng rng(209);
  for (int trial = 0; trial < 12; ++trial) {
    const int n = 2 + trial % 4;
    const int p = 1 + trial % 3;
    const BlockToeplitz t = gen_density(n, p, rng);
    const AtomicDecomposition dec = decompose_block(t);
    EXPECT_LE(dec.residual, 1e-6 * std::max(1.0, t.frobenius_norm()));
    EXPECT_LE(dec.atoms.size(), 60u);
    expect_sound(dec, t);
  }
}

TEST(DecomposeBlock, FiniteSpectrumRecoversSpectralAtoms) {
  // Identifiable regime: at most n−1 distinct, well-separated eigenvalues.
  Rng rng(211);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 3 + trial % 4;
    const int p = 1 + trial % 2;
    const int m = 1 + trial % (n - 1);
    const std::vector<double> angles = separated_angles(m, 0.3, rng);
    std::vector<int> mult;
    int q = 0;
    for (int j = 0; j < m; ++j) {
      mult.push_back(1 + rng.uniform_int(0, 1));
      q += mult.back();
    }
    CMatrix w(q, p);
    for (int i = 0; i < q; ++i) {
      for (int k = 0; k < p; ++k) w(i, k) = rng.complex_normal();
    }
    CMatrix u = CMatrix::Zero(q, q);
    std::vector<CMatrix> blocks;
    for (int j = 0, at = 0; j < m; at += mult[static_cast<std::size_t>(j)], ++j) {
      const int r = mult[static_cast<std::size_t>(j)];
      u.block(at, at, r, r) = std::polar(1.0, angles[static_cast<std::size_t>(j)]) * CMatrix::Identity(r, r);
      blocks.push_back(w.middleRows(at, r).adjoint() * w.middleRows(at, r));
    }
    // (1 ⊗ w)* T_n(u) (1 ⊗ w), built coefficientwise as w* u^ℓ w.
    const BlockToeplitz t = [&] {
      BlockToeplitz out(n, p);
      CMatrix power = CMatrix::Identity(q, q);
      for (int l = 0; l < n; ++l) {
        out.coeff(l) = w.adjoint() * power * w;
        out.coeff(-l) = out.coeff(l).adjoint();
        power = u * power;
      }
      return out;
    }();
    EXPECT_GE(oracle::min_eig(oracle::assemble(t)), -1e-10 * std::max(1.0, t.frobenius_norm()));

    GreedyOptions o;
    o.tol = 1e-9;
    const AtomicDecomposition dec = decompose_block(t, o);
    EXPECT_LE(dec.residual, 1e-8) << "trial " << trial;
    ASSERT_EQ(static_cast<int>(dec.atoms.size()), m) << "trial " << trial;
    for (int j = 0; j < m; ++j) {
      const cplx lambda = std::polar(1.0, angles[static_cast<std::size_t>(j)]);
      const auto it = std::min_element(dec.atoms.begin(), dec.atoms.end(), [&](const Atom& a, const Atom& b) {
        return angular_distance(a.lambda, lambda) < angular_distance(b.lambda, lambda);
      });
      EXPECT_LE(angular_distance(it->lambda, lambda), 1e-7);
      EXPECT_LE((it->b - blocks[static_cast<std::size_t>(j)]).cwiseAbs().maxCoeff(),
                1e-6 * std::max(1.0, blocks[static_cast<std::size_t>(j)].norm()));
    }
  }
}

TEST(DecomposeBlock, BudgetCarriesBestSoFar) {
  Rng rng(213);
  const BlockToeplitz t = gen_density(4, 2, rng);
  GreedyOptions o;
  o.max_atoms = 1;
  o.max_rounds = 2;
  try {
    decompose_block(t, o);
    FAIL();
  } catch (const BudgetExhaustedError& e) {
    EXPECT_EQ(e.code(), ErrorCode::BudgetExhausted);
    EXPECT_LE(e.best().atoms.size(), 1u);
    EXPECT_NEAR(oracle::decomposition_residual(e.best(), t), e.best().residual, 1e-10);
  }
}

TEST(DecomposeBlock, RejectsIndefinite) {
  BlockToeplitz t = BlockToeplitz::order_unit(2, 2);
  t.coeff(1) = 2.0 * CMatrix::Identity(2, 2);
  t.coeff(-1) = 2.0 * CMatrix::Identity(2, 2);
  expect_code(ErrorCode::NotPositive, [&] { decompose_block(t); });
}

TEST(ToeplitzToeplitz, Identity) {
  const BlockToeplitz x = BlockToeplitz::order_unit(2, 2);
  ASSERT_TRUE(is_toeplitz_toeplitz(x));
  const ToeplitzToeplitzDecomposition dec = decompose_toeplitz_toeplitz(x);
  EXPECT_LE(dec.block.residual, 1e-10);
  // Weighted product atoms reconstruct I₄ by Kronecker products.
  CMatrix sum = CMatrix::Zero(4, 4);
  for (const auto& a : dec.products) {
    EXPECT_GE(a.weight, 0.0);
    sum += a.weight * oracle::kron(oracle::rank_one_toeplitz(2, a.lambda), oracle::rank_one_toeplitz(2, a.mu));
  }
  EXPECT_LE((sum - CMatrix::Identity(4, 4)).norm(), 1e-10);
  expect_sound(dec.block, x);
}

TEST(ToeplitzToeplitz, ProductPlusIdentity) {
  Rng rng(215);
  for (int trial = 0; trial < 5; ++trial) {
    const cplx lambda = rng.unit_complex();
    const cplx mu = rng.unit_complex();
    const BlockToeplitz x = product_atom(lambda, mu) + BlockToeplitz(cplx(0.1) * BlockToeplitz::order_unit(2, 2));
    const ToeplitzToeplitzDecomposition dec = decompose_toeplitz_toeplitz(x);
    EXPECT_LE(dec.block.residual, 1e-7 * std::max(1.0, x.frobenius_norm()));
    expect_sound(dec.block, x);
  }
}

TEST(ToeplitzToeplitz, RandomProductsPlusIdentity) {
  Rng rng(217);
  for (int trial = 0; trial < 5; ++trial) {
    BlockToeplitz x = BlockToeplitz(cplx(0.05) * BlockToeplitz::order_unit(2, 2));
    for (int j = 0; j < 5; ++j) x += BlockToeplitz(cplx(rng.uniform(0.2, 1.0)) * product_atom(rng.unit_complex(), rng.unit_complex()));
    const ToeplitzToeplitzDecomposition dec = decompose_toeplitz_toeplitz(x);
    EXPECT_LE(dec.block.residual, 1e-7 * std::max(1.0, x.frobenius_norm()));
    expect_sound(dec.block, x);
  }
}

TEST(ToeplitzToeplitz, Preconditions) {
  expect_code(ErrorCode::NotStrictlyPositive, [] { decompose_toeplitz_toeplitz(product_atom(1.0, 1.0)); });
  Rng rng(219);
  const BlockToeplitz general = gen_density(2, 2, rng);
  EXPECT_FALSE(is_toeplitz_toeplitz(general));
  expect_code(ErrorCode::DimensionMismatch, [&] { decompose_toeplitz_toeplitz(general); });
}

TEST(Purity, PureElement) {
  Rng rng(221);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + trial % 8;
    const int p = 1 + trial % 4;
    const PureInstance inst = gen_pure(n, p, rng);
    const PurityResult r = purity_check(inst.t);
    ASSERT_TRUE(r.pure) << r.reason;
    EXPECT_EQ(oracle::rank(oracle::assemble(inst.t), 1e-9), 1);
    if (n > 1) EXPECT_LE(angular_distance(r.lambda, inst.lambda), 1e-9);
    EXPECT_NEAR(r.alpha, inst.alpha, 1e-9 * std::max(1.0, inst.alpha));
    EXPECT_LE((r.q - inst.q).cwiseAbs().maxCoeff(), 1e-9);

    // T̂ is α·(evaluation at λ)·Q on the monomials.
    if (n > 1) {
      const DualSystemMap hat = hat_of_toeplitz(inst.t);
      for (int k = -n + 1; k < n; ++k) {
        EXPECT_LE((hat.value(k) - r.alpha * std::pow(r.lambda, k) * r.q).cwiseAbs().maxCoeff(), 1e-10);
      }
    }
  }
}

TEST(Purity, ExamplesNotPure) {
  CMatrix q1 = e(2, 0);
  CMatrix q2 = e(2, 1);
  const BlockToeplitz two = tensor(universal_toeplitz(3, 1.0), q1) + tensor(universal_toeplitz(3, -1.0), q2);
  EXPECT_FALSE(purity_check(two).pure);
  for (int n = 2; n <= 5; ++n) EXPECT_FALSE(purity_check(BlockToeplitz::order_unit(n, 2)).pure);

  BlockToeplitz bad(2, 1);
  bad.coeff(0)(0, 0) = 1.0;
  bad.coeff(1)(0, 0) = 2.0;
  bad.coeff(-1)(0, 0) = 2.0;
  expect_code(ErrorCode::NotPositive, [&] { purity_check(bad); });
}

TEST(Purity, PureImpliesRankOne) {
  Rng rng(223);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 2 + trial % 4;
    const int p = 1 + trial % 3;
    BlockToeplitz t = (trial % 2 == 0) ? gen_pure(n, p, rng).t : gen_atoms(n, p, 1 + trial % 3, rng);
    const PurityResult r = purity_check(t);
    if (r.pure) EXPECT_EQ(oracle::rank(oracle::assemble(t), 1e-9), 1);
  }
}
