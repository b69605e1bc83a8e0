#include <gtest/gtest.h>

#include "lure/matrix_cones.hpp"

using namespace lure;
using cones::ConeTag;

namespace {

Matrix mat2(double a, double b, double c, double d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

}  // namespace

TEST(AbsD, NegatesOffDiagonalMagnitudes) {
  EXPECT_EQ(cones::abs_d(mat2(1, 2, -3, 4)), mat2(1, -2, -3, 4));
  const Matrix z = mat2(2, -1, 0, 3);
  EXPECT_EQ(cones::abs_d(z), z);
  EXPECT_EQ(cones::abs_d(Matrix::Identity(3, 3)), Matrix::Identity(3, 3));
}

TEST(AbsD, IdempotentOnZMatrices) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Matrix m = cones::random_member(ConeTag::DHD, 4, seed);
    EXPECT_EQ(cones::abs_d(cones::abs_d(m)), cones::abs_d(m));
    EXPECT_EQ(cones::abs_d(m), m);
  }
}

TEST(ProjSplit, Examples) {
  const auto s = cones::proj_split(mat2(1, 2, 3, 4));
  EXPECT_EQ(s.diag, mat2(1, 0, 0, 4));
  EXPECT_EQ(s.offdiag, mat2(0, 2, 3, 0));
  const auto d = cones::proj_split(mat2(5, 0, 0, 6));
  EXPECT_EQ(d.offdiag, Matrix::Zero(2, 2));
  const auto h = cones::proj_split(mat2(0, 7, 8, 0));
  EXPECT_EQ(h.diag, Matrix::Zero(2, 2));
}

TEST(ProjSplit, RecomposesAndIsIdempotent) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Matrix m = cones::random_member(ConeTag::DD, 5, seed);
    const auto s = cones::proj_split(m);
    EXPECT_EQ(s.diag + s.offdiag, m);
    EXPECT_EQ(cones::proj_split(s.diag).diag, s.diag);
    EXPECT_EQ(cones::proj_split(s.diag).offdiag, Matrix::Zero(5, 5));
  }
}

TEST(IsMember, Examples) {
  EXPECT_TRUE(cones::is_member(Matrix::Identity(3, 3), ConeTag::DHD).member);
  const auto bad = cones::is_member(mat2(1, -3, 0, 1), ConeTag::DHD);
  EXPECT_FALSE(bad.member);
  EXPECT_NEAR(bad.worst_violation, 2.0, 1e-15);
  const Matrix sym = mat2(1, 0.5, 0.5, 1);
  EXPECT_TRUE(cones::is_member(sym, ConeTag::DD).member);
  EXPECT_FALSE(cones::is_member(sym, ConeTag::DHD).member);
}

TEST(IsMember, Z0NeedsZeroDiagonal) {
  EXPECT_TRUE(cones::is_member(mat2(0, -1, -2, 0), ConeTag::Z0).member);
  EXPECT_FALSE(cones::is_member(mat2(0.1, -1, -2, 0), ConeTag::Z0).member);
  EXPECT_FALSE(cones::is_member(mat2(0, 1, -2, 0), ConeTag::Z0).member);
}

TEST(RandomMember, ScalarDhdIsNonnegative) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Matrix m = cones::random_member(ConeTag::DHD, 1, seed);
    EXPECT_GE(m(0, 0), 0.0);
  }
}

TEST(RandomMember, Z0Structure) {
  const Matrix m = cones::random_member(ConeTag::Z0, 2, 3);
  EXPECT_EQ(m(0, 0), 0.0);
  EXPECT_EQ(m(1, 1), 0.0);
  EXPECT_LE(m(0, 1), 0.0);
  EXPECT_LE(m(1, 0), 0.0);
}

TEST(RandomMember, PassesItsOwnMembershipExactly) {
  for (ConeTag tag : {ConeTag::Z, ConeTag::Z0, ConeTag::DHD, ConeTag::DD, ConeTag::Diag, ConeTag::OffDiag}) {
    for (int m = 1; m <= 5; ++m) {
      for (std::uint64_t seed = 0; seed < 10; ++seed) {
        EXPECT_TRUE(cones::is_member(cones::random_member(tag, m, seed), tag, 0.0).member)
            << cones::to_string(tag) << " m=" << m << " seed=" << seed;
      }
    }
  }
}

TEST(RandomMember, DeterministicPerSeed) {
  EXPECT_EQ(cones::random_member(ConeTag::DD, 4, 9), cones::random_member(ConeTag::DD, 4, 9));
  EXPECT_NE(cones::random_member(ConeTag::DD, 4, 9), cones::random_member(ConeTag::DD, 4, 10));
}

TEST(RandomMember, DhdMembersAreDd) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const Matrix m = cones::random_member(ConeTag::DHD, 1 + seed % 5, seed);
    EXPECT_TRUE(cones::is_member(m, ConeTag::DD, 0.0).member);
  }
}
