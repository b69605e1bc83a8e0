#pragma once

#include <string>

#include "lure/linalg.hpp"

namespace lure {

/// Sector of admissible slopes, mu <= 0 <= nu.
class SlopeBand {
 public:
  SlopeBand() = default;
  SlopeBand(double mu, double nu);

  [[nodiscard]] double mu() const noexcept { return mu_; }
  [[nodiscard]] double nu() const noexcept { return nu_; }
  [[nodiscard]] bool is_unit() const noexcept { return mu_ == 0.0 && nu_ == 1.0; }

  friend bool operator==(const SlopeBand&, const SlopeBand&) = default;

 private:
  double mu_ = 0.0;
  double nu_ = 1.0;
};

enum class NonlinearityClass { SlopeRestricted, SlopeRestrictedOdd };

const char* to_string(NonlinearityClass c) noexcept;
NonlinearityClass parse_nonlinearity_class(const std::string& tag);

/// The LTI block G of the Lur'e loop x+ = Ax + Bw, z = Cx + Dw, w = Phi(z).
struct StateSpaceSystem {
  Matrix A;
  Matrix B;
  Matrix C;
  Matrix D;
  SlopeBand band;
  NonlinearityClass nonlinearity = NonlinearityClass::SlopeRestricted;

  [[nodiscard]] Eigen::Index states() const noexcept { return A.rows(); }
  [[nodiscard]] Eigen::Index channels() const noexcept { return B.cols(); }
};

struct ValidationReport {
  Eigen::Index states = 0;
  Eigen::Index channels = 0;
  double spectral_radius = 0.0;
  double schur_margin = 0.0;  // 1 - rho(A)
  double d_norm = 0.0;
  double gain_margin = 0.0;   // 1 - ||D||
  bool unit_band = false;     // (mu, nu) = (0, 1)
  bool gain_assumption = false;  // ||D|| < 1
  /// Reduced primal/dual and detection are only defined for the unit band.
  [[nodiscard]] bool reduced_admissible() const noexcept { return unit_band; }
};

/// Throws Structural on dimension mismatch or non-finite entries and
/// AssumptionViolated when rho(A) >= 1. ||D|| >= 1 is reported, not refused.
ValidationReport validate(const StateSpaceSystem& sys);

double spectral_radius(const Matrix& a);

}  // namespace lure
