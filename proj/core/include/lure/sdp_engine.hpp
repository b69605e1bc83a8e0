#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "lure/conic_problem.hpp"
#include "lure/ipm.hpp"

namespace lure::sdp {

/// Every engine tolerance in one place.
struct EngineSettings {
  int max_iterations = 200;
  double gap_tol = 1e-11;
  double feas_tol = 1e-12;
  // acceptance of a "feasible" result, checked on the raw constraints
  double equality_tol = 1e-8;  // relative to 1 + max |constant|
  double cone_tol = 1e-9;
  // rank reduction
  int max_rank_rounds = 10;
  double rank_tol = 1e-6;
  std::uint64_t seed = 0;  // 0: start from the warm iterate's own eigenvectors
  bool polish = true;      // rank-1 active-set refinement after rank reduction
  double active_tol = 1e-8;  // LP entries below this (relative) are treated as zero when polishing
  bool trace = false;
};

enum class SolveStatus { Feasible, Infeasible, NumericalLimit };

const char* to_string(SolveStatus s) noexcept;

struct SolveResult {
  SolveStatus status = SolveStatus::NumericalLimit;
  Vector scalars;
  std::map<std::string, Matrix> assignment;
  Residuals residuals;
  std::optional<double> margin;  // strict-LMI problems only
  IpmOutcome ipm_outcome = IpmOutcome::IterationLimit;
  int iterations = 0;
  // rank reduction trail: lambda_2 / lambda_1 after the warm start and each round
  std::vector<double> rank_trail;
  int rank_rounds = 0;
  bool polished = false;

  [[nodiscard]] const Matrix& at(const std::string& name) const;
};

/// Compiles the problem to standard form and runs the interior-point method.
SolveResult solve(const SdpFeasibilityProblem& problem, const EngineSettings& settings = {});

/// Reweighted trace minimisation: re-solves with objective <W_k, H>, W_k the
/// projector onto the non-dominant eigenvectors of the current H, until
/// lambda_2 / lambda_1 <= rank_tol or max_rank_rounds rounds. Returns the
/// iterate with the smallest ratio.
SolveResult reduce_rank(const SdpFeasibilityProblem& problem, const SolveResult& warm,
                        const EngineSettings& settings = {}, const std::string& psd_var = "H");

/// Refines a numerically rank-1 solution: with H = h h^T and every LP scalar
/// below active_tol held at zero, Gauss-Newton drives the equalities (and the
/// active inequalities) to round-off. The refined point is returned only if
/// its raw residuals are no worse and every cone constraint still holds.
SolveResult polish_rank_one(const SdpFeasibilityProblem& problem, const SolveResult& result,
                            const EngineSettings& settings = {}, const std::string& psd_var = "H");

/// Feasible iff the raw residuals are within the settings' tolerances.
bool within_tolerance(const Residuals& r, const EngineSettings& settings);

/// Lowering used by solve(); exposed for tests and debug dumps.
struct Compiled {
  StandardForm form;
  bool dual_form = false;  // variables live in y
  int margin_index = -1;   // index of t in y for strict-LMI problems
  std::vector<int> y_index;  // scalar -> y position, -1 when pinned to zero
};

Compiled compile(const SdpFeasibilityProblem& problem);

}  // namespace lure::sdp
