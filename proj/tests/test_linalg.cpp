#include <random>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "lure/error.hpp"
#include "lure/linalg.hpp"

using namespace lure;
using linalg::SymMatrix;

namespace {

Matrix random_matrix(Eigen::Index r, Eigen::Index c, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Matrix m(r, c);
  for (Eigen::Index j = 0; j < c; ++j)
    for (Eigen::Index i = 0; i < r; ++i) m(i, j) = u(rng);
  return m;
}

}  // namespace

TEST(SymMatrix, WritesAreMirrored) {
  SymMatrix s(3);
  s.set(0, 2, 4.5);
  EXPECT_EQ(s(2, 0), 4.5);
  EXPECT_EQ(s.matrix(), s.matrix().transpose());
}

TEST(SymMatrix, FromSymmetrizes) {
  Matrix a(2, 2);
  a << 1, 2, 4, 3;
  const SymMatrix s = SymMatrix::from(a);
  EXPECT_EQ(s(0, 1), 3.0);
  EXPECT_EQ(s(1, 0), 3.0);
}

TEST(SymMatrix, FromRejectsRectangular) {
  try {
    (void)SymMatrix::from(Matrix::Zero(2, 3));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Structural);
  }
}

TEST(SymEig, Identity) {
  const auto e = linalg::sym_eig(SymMatrix::identity(2));
  EXPECT_DOUBLE_EQ(e.values(0), 1.0);
  EXPECT_DOUBLE_EQ(e.values(1), 1.0);
}

TEST(SymEig, DiagonalSortedDescending) {
  SymMatrix s(2);
  s.set(0, 0, -1.0);
  s.set(1, 1, 3.0);
  const auto e = linalg::sym_eig(s);
  EXPECT_DOUBLE_EQ(e.values(0), 3.0);
  EXPECT_DOUBLE_EQ(e.values(1), -1.0);
}

TEST(SymEig, TwoByTwo) {
  Matrix a(2, 2);
  a << 2, 1, 1, 2;
  const auto e = linalg::sym_eig(SymMatrix::from(a));
  EXPECT_NEAR(e.values(0), 3.0, 1e-14);
  EXPECT_NEAR(e.values(1), 1.0, 1e-14);
}

TEST(SymEig, ReconstructionOnRandomMatrices) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::Index n = 1 + trial % 9;
    const Matrix g = random_matrix(n, n, rng) * 10.0;
    const SymMatrix s = SymMatrix::from(g);
    const auto e = linalg::sym_eig(s);
    const Matrix q = e.vectors;
    const double bound = 1e-10 * (1.0 + s.matrix().norm());
    EXPECT_LE((q * e.values.asDiagonal() * q.transpose() - s.matrix()).norm(), bound);
    EXPECT_LE((q.transpose() * q - Matrix::Identity(n, n)).norm(), 1e-10);
    for (Eigen::Index i = 1; i < n; ++i) EXPECT_GE(e.values(i - 1), e.values(i));
  }
}

TEST(SpectralNorm, Zero) { EXPECT_EQ(linalg::spectral_norm(Matrix::Zero(2, 2)), 0.0); }

TEST(SpectralNorm, Diagonal) {
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 0.5;
  d(1, 1) = -0.9;
  EXPECT_NEAR(linalg::spectral_norm(d), 0.9, 1e-15);
}

TEST(SpectralNorm, SlopeExampleFeedthrough) {
  // The example's D exceeds unit gain; the value is pinned, not assumed < 1.
  EXPECT_NEAR(linalg::spectral_norm(fx::slope_example().D), 1.5739602598, 1e-9);
}

TEST(SpectralNorm, TransposeInvariant) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    const Matrix m = random_matrix(1 + trial % 4, 1 + trial % 6, rng);
    EXPECT_NEAR(linalg::spectral_norm(m), linalg::spectral_norm(m.transpose()), 1e-12);
  }
}

TEST(RankFactor, RankOneOuterProduct) {
  const Vector h = fx::vec({1.0, 2.0});
  const auto rf = linalg::numerical_rank_and_factor(SymMatrix::from(h * h.transpose()));
  ASSERT_EQ(rf.rank, 1);
  const Vector f = rf.factor.col(0);
  EXPECT_NEAR(std::abs(f.dot(h)), h.squaredNorm(), 1e-12);
  EXPECT_NEAR(f.norm(), h.norm(), 1e-12);
}

TEST(RankFactor, IdentityIsFullRank) {
  EXPECT_EQ(linalg::numerical_rank_and_factor(SymMatrix::identity(2)).rank, 2);
}

TEST(RankFactor, IndefiniteIsConeViolation) {
  SymMatrix s(2);
  s.set(0, 0, 1.0);
  s.set(1, 1, -0.5);
  try {
    (void)linalg::numerical_rank_and_factor(s);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ConeViolation);
  }
}

TEST(RankFactor, FactorBoundOnRandomPsd) {
  std::mt19937_64 rng(17);
  const double tol = 1e-6;
  for (int trial = 0; trial < 40; ++trial) {
    const Eigen::Index n = 2 + trial % 6;
    const Eigen::Index r = 1 + trial % n;
    Matrix g = random_matrix(n, r, rng);
    // a tail below the threshold must not count toward the rank
    const Matrix s = g * g.transpose() + 1e-9 * Matrix::Identity(n, n);
    const auto rf = linalg::numerical_rank_and_factor(SymMatrix::from(s), tol);
    EXPECT_EQ(rf.rank, r);
    EXPECT_LE((s - rf.factor * rf.factor.transpose()).norm(), 10.0 * tol * s.trace());
  }
}

TEST(RankFactor, RatioOfLeadingEigenvalues) {
  SymMatrix s(3);
  s.set(0, 0, 4.0);
  s.set(1, 1, 1.0);
  EXPECT_DOUBLE_EQ(linalg::numerical_rank_and_factor(s).ratio(), 0.25);
}
