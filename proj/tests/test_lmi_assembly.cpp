#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "lagrangian.hpp"
#include "lure/error.hpp"
#include "lure/lmi_assembly.hpp"
#include "lure/sdp_engine.hpp"

using namespace lure;
using lmi::LmiKind;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::Input;
}

// P = sum_k (A^T)^k A^k solves A^T P A - P = -I for Schur A.
Matrix lyapunov_solution(const Matrix& a) {
  Matrix p = Matrix::Zero(a.rows(), a.cols());
  Matrix term = Matrix::Identity(a.rows(), a.cols());
  for (int k = 0; k < 2000 && term.norm() > 1e-18; ++k) {
    p += term;
    term = a.transpose() * term * a;
  }
  return p;
}

}  // namespace

TEST(BuildPrimal, DecoupledSystemAtLyapunovSolution) {
  const auto sys = fx::decoupled_system();
  const auto problem = lmi::build_primal(sys, {LmiKind::PrimalDHD, true});
  const Matrix P = lyapunov_solution(sys.A);
  const Matrix lmi = problem.strict_lmi()->expr.evaluate(problem.pack({{"P", P}, {"M", Matrix::Zero(1, 1)}}));
  Matrix expect = Matrix::Zero(3, 3);
  expect.topLeftCorner(2, 2) = -Matrix::Identity(2, 2);
  EXPECT_LE((lmi - expect).cwiseAbs().maxCoeff(), 1e-12);

  const auto r = sdp::solve(problem);
  EXPECT_EQ(r.status, sdp::SolveStatus::Feasible);
  ASSERT_TRUE(r.margin);
  EXPECT_GT(*r.margin, 1e-7);
}

TEST(BuildPrimal, SlopeExampleIsNotStrictlyFeasible) {
  const auto r = sdp::solve(lmi::build_primal(fx::slope_example(), {LmiKind::PrimalDHD, true}));
  ASSERT_TRUE(r.margin);
  EXPECT_LT(*r.margin, 1e-7);
}

TEST(BuildPrimal, ScalarDhdConeIsNonnegativity) {
  const auto problem = lmi::build_primal(fx::decoupled_system(), {LmiKind::PrimalDHD, true});
  const Matrix P = Matrix::Zero(2, 2);
  auto violation = [&](double mval) {
    return sdp::evaluate_residuals(problem, problem.pack({{"P", P}, {"M", Matrix::Constant(1, 1, mval)}})).inequality;
  };
  EXPECT_EQ(violation(1.0), 0.0);
  EXPECT_EQ(violation(0.0), 0.0);
  EXPECT_DOUBLE_EQ(violation(-0.25), 0.25);
}

TEST(BuildPrimal, NonReducedAppendsMinusP) {
  const auto sys = fx::decoupled_system();
  const auto problem = lmi::build_primal(sys, {LmiKind::PrimalDHD, false});
  EXPECT_EQ(problem.strict_lmi()->expr.rows(), 5);
  const Matrix P = 3.0 * Matrix::Identity(2, 2);
  const Matrix v = problem.strict_lmi()->expr.evaluate(problem.pack({{"P", P}}));
  EXPECT_EQ(v.bottomRightCorner(2, 2), -P);
}

TEST(BuildPrimal, GeneralBandAllowedOnlyUnreduced) {
  auto sys = fx::decoupled_system();
  sys.band = SlopeBand(-0.5, 2.0);
  EXPECT_NO_THROW(lmi::build_primal(sys, {LmiKind::PrimalDD, false}));
  EXPECT_EQ(kind_of([&] { lmi::build_primal(sys, {LmiKind::PrimalDHD, true}); }), ErrorKind::Structural);
  EXPECT_EQ(kind_of([&] { lmi::build_primal(sys, {LmiKind::DualDHD, true}); }), ErrorKind::Structural);
}

TEST(BuildPrimal, DdVariablesAndMultiplier) {
  const auto problem = lmi::build_primal(fx::slope_example(), {LmiKind::PrimalDD, true});
  EXPECT_TRUE(problem.has_variable("Md"));
  EXPECT_TRUE(problem.has_variable("Mod"));
  EXPECT_TRUE(problem.has_variable("Mbar"));
  EXPECT_FALSE(problem.has_variable("M"));
  Matrix md = Matrix::Identity(4, 4) * 2.0;
  Matrix mod = Matrix::Constant(4, 4, 0.3);
  const Matrix eff = lmi::primal_multiplier(problem, {{"Md", md}, {"Mod", mod}, {"Mbar", Matrix::Zero(4, 4)}});
  Matrix expect = mod;
  expect.diagonal() = md.diagonal();
  EXPECT_EQ(eff, expect);
}

TEST(BuildDual, RefusesOtherModes) {
  auto sys = fx::slope_example();
  EXPECT_EQ(kind_of([&] { lmi::build_dual(sys, {LmiKind::DualDHD, false}); }), ErrorKind::UnsupportedMode);
  EXPECT_EQ(kind_of([&] { lmi::build_dual(sys, {LmiKind::PrimalDHD, true}); }), ErrorKind::UnsupportedMode);
  sys.band = SlopeBand(0.0, 2.0);
  EXPECT_EQ(kind_of([&] { lmi::build_dual(sys, {LmiKind::DualDHD, true}); }), ErrorKind::UnsupportedMode);
}

TEST(BuildDual, ExamplesAreFeasible) {
  const auto dhd = sdp::solve(lmi::build_dual(fx::slope_example(), {LmiKind::DualDHD, true}));
  EXPECT_EQ(dhd.status, sdp::SolveStatus::Feasible);
  const auto dd = sdp::solve(lmi::build_dual(fx::odd_example(), {LmiKind::DualDD, true}));
  EXPECT_EQ(dd.status, sdp::SolveStatus::Feasible);
  EXPECT_NEAR(dd.at("H").trace(), 1.0, 1e-8);
}

TEST(BuildDual, DecoupledSystemIsNotFeasible) {
  const auto r = sdp::solve(lmi::build_dual(fx::decoupled_system(), {LmiKind::DualDHD, true}));
  EXPECT_NE(r.status, sdp::SolveStatus::Feasible);
}

TEST(BuildDual, SignCutIsADiagonalInequality) {
  const auto sys = fx::slope_example();
  auto problem = lmi::build_dual(sys, {LmiKind::DualDHD, true});
  const std::size_t before = problem.inequalities().size();
  lmi::add_sign_cut(problem, sys);
  ASSERT_EQ(problem.inequalities().size(), before + 1);
  EXPECT_EQ(problem.inequalities().back().label, "sign_cut");
  EXPECT_EQ(problem.inequalities().back().mask, sdp::EntryMask::Diagonal);
}

TEST(CouplingMatrix, RankOneSpecialisation) {
  const auto sys = fx::odd_example();
  const Vector h = fx::vec({0.3, -1.1, 0.2, 0.5, -0.7, 0.05});
  const Vector h1 = h.head(2), h2 = h.tail(4);
  const Matrix y = lmi::coupling_matrix(sys, h * h.transpose());
  const Matrix expect = h2 * (sys.C * h1 + sys.D * h2 - h2).transpose();
  EXPECT_LE((y - expect).cwiseAbs().maxCoeff(), 1e-15);
  const Matrix lyap = lmi::lyapunov_block(sys, h * h.transpose());
  const Vector next = sys.A * h1 + sys.B * h2;
  EXPECT_LE((lyap - (next * next.transpose() - h1 * h1.transpose())).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Lagrangian, IdentityHoldsForBothPairs) {
  for (const bool odd : {false, true}) {
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
      const auto sys = odd ? fx::odd_example() : fx::slope_example();
      const auto c = fx::lagrangian_identity(sys, odd, seed);
      EXPECT_LE(c.residual(), 1e-10 * c.scale) << "odd=" << odd << " seed=" << seed;
    }
  }
}
