#pragma once

#include <string>
#include <vector>

#include "lure/system_model.hpp"

namespace lure::detect {

struct Breakpoint {
  double z = 0.0;
  double w = 0.0;
  friend bool operator==(const Breakpoint&, const Breakpoint&) = default;
};

/// Scalar piecewise-linear map through sorted breakpoints, constant outside
/// the hull [z_1, z_l].
class PiecewiseLinearMap {
 public:
  PiecewiseLinearMap() = default;
  /// Throws Structural unless z is strictly increasing, finite and non-empty.
  PiecewiseLinearMap(std::vector<Breakpoint> breakpoints, bool odd);

  [[nodiscard]] const std::vector<Breakpoint>& breakpoints() const noexcept { return points_; }
  [[nodiscard]] bool odd() const noexcept { return odd_; }
  [[nodiscard]] std::size_t size() const noexcept { return points_.size(); }
  [[nodiscard]] double operator()(double z) const;
  /// Largest |segment slope|; the Lipschitz constant of the map.
  [[nodiscard]] double lipschitz() const;

 private:
  std::vector<Breakpoint> points_;
  bool odd_ = false;
};

double eval_pwl(const PiecewiseLinearMap& phi, double z);

struct SlopeReport {
  bool ok = false;
  double min_slope = 0.0;
  double max_slope = 0.0;
  bool through_origin = false;
  bool antisymmetric = true;  // checked only for odd maps
  std::vector<std::string> violations;
};

SlopeReport verify_slope(const PiecewiseLinearMap& phi, const SlopeBand& band, double eps = 1e-9);

}  // namespace lure::detect
