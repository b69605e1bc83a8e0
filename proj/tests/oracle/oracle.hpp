#pragma once

// Brute-force validators for the test suites. Everything here is computed
// from raw definitions; nothing calls into the multiplier or LMI code.

#include <cstdint>
#include <vector>

#include "lure/sdp_engine.hpp"
#include "lure/system_model.hpp"

namespace lure::oracle {

/// Random piecewise-linear scalar map with phi(0) = 0. `slopes[i + 1]` applies
/// on [knots[i], knots[i + 1]]; the first and last slopes extend to -inf and +inf.
struct SampledSlopeFn {
  std::vector<double> knots;   // strictly increasing, contains 0
  std::vector<double> values;  // phi at each knot
  std::vector<double> slopes;  // knots.size() + 1 entries
  bool odd = false;

  double operator()(double z) const;
};

SampledSlopeFn sample_slope_fn(const SlopeBand& band, std::uint64_t seed, bool odd,
                               int knots_per_side = 4);

struct QuotientAudit {
  double min_quotient = 0.0;
  double max_quotient = 0.0;
  int pairs = 0;
};

/// (phi(a) - phi(b)) / (a - b) over random pairs.
QuotientAudit audit_difference_quotients(const SampledSlopeFn& phi, int pairs, std::uint64_t seed);

/// [zeta; w]^T V^T [0 M; M^T 0] V [zeta; w] with V = [nu I, -I; -mu I, I],
/// multiplied out entry by entry.
double raw_multiplier_form(const Matrix& m, const SlopeBand& band, const Vector& zeta, const Vector& w);

struct MultiplierAudit {
  double min_form = 0.0;
  double scale = 0.0;  // max over trials of sum |M_ij| * (|zeta|^2 + |w|^2)
  int trials = 0;
};

/// Minimum of the multiplier quadratic form over random zeta with w = phi(zeta).
MultiplierAudit audit_multiplier_inequality(const Matrix& m, const SlopeBand& band,
                                            const SampledSlopeFn& phi, int trials, std::uint64_t seed);

struct DualityAudit {
  sdp::SolveStatus primal_status = sdp::SolveStatus::NumericalLimit;
  double primal_margin = 0.0;
  sdp::SolveStatus dual_status = sdp::SolveStatus::NumericalLimit;
  bool primal_decisive = false;  // margin >= 1e-7
  bool dual_decisive = false;    // feasible with raw residuals within tolerance
  [[nodiscard]] bool both() const noexcept { return primal_decisive && dual_decisive; }
};

/// Solves the reduced primal and the reduced dual independently.
DualityAudit audit_duality(const StateSpaceSystem& sys, std::uint64_t seed = 0);

/// n x n A with rho(A) = rho, m x m D with |D| = d_norm, other entries in [-1, 1].
StateSpaceSystem random_system(int n, int m, std::uint64_t seed, double rho = 0.8, double d_norm = 0.5,
                               NonlinearityClass cls = NonlinearityClass::SlopeRestricted);

}  // namespace lure::oracle
