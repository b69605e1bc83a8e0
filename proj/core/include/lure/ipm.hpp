#pragma once

#include <vector>

#include "lure/linalg.hpp"

namespace lure::sdp {

/// One block of the product cone: a PSD block of order `size` or a
/// nonnegative orthant of dimension `size` (stored as a column vector).
struct BlockSpec {
  bool psd = true;
  Eigen::Index size = 0;
};

using BlockVec = std::vector<Matrix>;

/// SDPA-style pair
///   (P) min <C, X>  s.t. <A_k, X> = b_k, X in K
///   (D) max b^T y   s.t. sum_k y_k A_k + Z = C, Z in K.
struct StandardForm {
  std::vector<BlockSpec> blocks;
  std::vector<BlockVec> A;
  Vector b;
  BlockVec C;

  [[nodiscard]] int constraints() const noexcept { return static_cast<int>(A.size()); }
  [[nodiscard]] BlockVec zeros() const;
};

struct IpmSettings {
  int max_iterations = 200;
  double gap_tol = 1e-11;
  double feas_tol = 1e-12;
  double infeas_tol = 1e-9;    // Farkas certificate residual
  double step_fraction = 0.98;
  bool trace = false;  // one line per iteration on stderr
};

enum class IpmOutcome { Optimal, PrimalInfeasible, DualInfeasible, IterationLimit, Stalled };

const char* to_string(IpmOutcome o) noexcept;

struct IpmResult {
  IpmOutcome outcome = IpmOutcome::IterationLimit;
  BlockVec X;
  Vector y;
  BlockVec Z;
  int iterations = 0;
  double primal_infeasibility = 0.0;  // ||b - A(X)|| / (1 + ||b||)
  double dual_infeasibility = 0.0;    // ||C - Z - A^T y|| / (1 + ||C||)
  double relative_gap = 0.0;
  double primal_objective = 0.0;
  double dual_objective = 0.0;
};

/// Infeasible-start primal-dual path following, HKM search direction with a
/// Mehrotra predictor-corrector. Dense; meant for a few dozen constraints.
IpmResult solve_standard_form(const StandardForm& sf, const IpmSettings& settings = {});

double inner(const BlockVec& a, const BlockVec& b);

}  // namespace lure::sdp
