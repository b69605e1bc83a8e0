#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "lure/matrix_cones.hpp"
#include "oracle.hpp"

using namespace lure;

TEST(SampleSlopeFn, DegenerateBandIsZero) {
  const auto phi = oracle::sample_slope_fn(SlopeBand(0.0, 0.0), 4, false);
  for (double z : {-10.0, -1.0, 0.0, 0.3, 7.0}) EXPECT_EQ(phi(z), 0.0);
}

TEST(SampleSlopeFn, OddIsExactlyAntisymmetric) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto phi = oracle::sample_slope_fn(SlopeBand(0.0, 1.0), seed, true);
    for (double z : {0.01, 0.4, 1.3, 2.9, 5.0, 40.0}) EXPECT_EQ(phi(-z), -phi(z));
    EXPECT_EQ(phi(0.0), 0.0);
  }
}

TEST(SampleSlopeFn, DifferenceQuotientsStayInBand) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const SlopeBand band(-0.3, 1.2);
    const auto phi = oracle::sample_slope_fn(band, seed, seed % 2 == 0);
    const auto a = oracle::audit_difference_quotients(phi, 1000, seed);
    EXPECT_EQ(a.pairs, 1000);
    EXPECT_GE(a.min_quotient, band.mu() - 1e-9);
    EXPECT_LE(a.max_quotient, band.nu() + 1e-9);
  }
}

TEST(AuditMultiplier, DhdWithSlopeRestricted) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const int m = 1 + static_cast<int>(seed % 5);
    const auto a = oracle::audit_multiplier_inequality(cones::random_member(cones::ConeTag::DHD, m, seed),
                                                       SlopeBand(0.0, 1.0),
                                                       oracle::sample_slope_fn(SlopeBand(0.0, 1.0), seed, false), 50, seed);
    EXPECT_GE(a.min_form, -1e-9 * a.scale);
  }
}

TEST(AuditMultiplier, DdWithOddSlopeRestricted) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const int m = 1 + static_cast<int>(seed % 5);
    const auto a = oracle::audit_multiplier_inequality(cones::random_member(cones::ConeTag::DD, m, seed),
                                                       SlopeBand(0.0, 1.0),
                                                       oracle::sample_slope_fn(SlopeBand(0.0, 1.0), seed, true), 50, seed);
    EXPECT_GE(a.min_form, -1e-9 * a.scale);
  }
}

TEST(AuditMultiplier, DdWithoutOddnessCanFail) {
  // Documents why the DD multiplier needs odd maps; the outcome is recorded, not asserted.
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Matrix m = cones::random_member(cones::ConeTag::DD, 2, seed);
    if (cones::is_member(m, cones::ConeTag::DHD, 0.0).member) continue;
    const auto a = oracle::audit_multiplier_inequality(m, SlopeBand(0.0, 1.0),
                                                       oracle::sample_slope_fn(SlopeBand(0.0, 1.0), seed, false), 200, seed);
    worst = std::min(worst, a.min_form / a.scale);
  }
  RecordProperty("most_negative_relative_form", std::to_string(worst));
  SUCCEED();
}

TEST(AuditDuality, DecoupledAndSlopeExample) {
  const auto d = oracle::audit_duality(fx::decoupled_system());
  EXPECT_TRUE(d.primal_decisive);
  EXPECT_FALSE(d.dual_decisive);
  const auto s = oracle::audit_duality(fx::slope_example());
  EXPECT_FALSE(s.primal_decisive);
  EXPECT_TRUE(s.dual_decisive);
}

TEST(RandomSystem, MeetsItsTargets) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto sys = oracle::random_system(2, 2, seed);
    EXPECT_NEAR(spectral_radius(sys.A), 0.8, 1e-12);
    EXPECT_NEAR(linalg::spectral_norm(sys.D), 0.5, 1e-12);
  }
}
