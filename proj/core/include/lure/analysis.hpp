#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lure/instability_detector.hpp"
#include "lure/lmi_assembly.hpp"
#include "lure/loop_simulator.hpp"
#include "lure/sdp_engine.hpp"
#include "lure/system_model.hpp"

namespace lure::report {

enum class Verdict { AbsolutelyStable, NotAbsolutelyStable, Inconclusive };

const char* to_string(Verdict v) noexcept;

/// Process exit codes of `lure analyze`.
namespace exit_code {
inline constexpr int kStable = 0;
inline constexpr int kInputError = 1;
inline constexpr int kNumericFailure = 2;
inline constexpr int kNotAbsolutelyStable = 10;
inline constexpr int kInconclusive = 20;
}  // namespace exit_code

int exit_code_for(Verdict v) noexcept;

struct AnalysisOptions {
  double rank_tol = 1e-6;
  double eq_tol = 1e-6;          // certificate ||A h1 + B h2 - h1|| / ||h1||
  double primal_margin = 1e-7;   // strict feasibility threshold on t*
  double sim_tol = 1e-8;         // equilibrium check, relative to ||h1||
  int equilibrium_steps = 1000;
  int max_ipm_iters = 200;
  std::uint64_t seed = 0;
  double display_norm = 1.0;     // |h1| of the rescaled certificate in reports
  lmi::AssemblySettings assembly;
};

struct PrimalSummary {
  lmi::LmiKind kind = lmi::LmiKind::PrimalDHD;
  bool reduced = true;
  sdp::SolveStatus status = sdp::SolveStatus::NumericalLimit;
  double margin = 0.0;
  Matrix P;
  Matrix M;
  sdp::Residuals residuals;
  int iterations = 0;
  bool strictly_feasible = false;
};

struct DualSummary {
  lmi::LmiKind kind = lmi::LmiKind::DualDHD;
  sdp::SolveStatus status = sdp::SolveStatus::NumericalLimit;  // uncut reduced dual
  sdp::Residuals residuals;
  int iterations = 0;
  bool sign_cut = false;  // certificate came from the sign-cut retry
  std::vector<double> rank_trail;
  int rank_rounds = 0;
  std::optional<detect::DualCertificate> certificate;
  std::optional<detect::Inconclusive> inconclusive;
};

struct EquilibriumCheck {
  int steps = 0;
  double contraction = 0.0;      // ||D|| * Lip(phi)
  double loop_residual = 0.0;    // ||A h1 + B w(h1) - h1|| / ||h1||
  double max_deviation = 0.0;    // max_k ||x(k) - h1|| / ||h1||
  bool ok = false;
};

struct AnalysisReport {
  Verdict verdict = Verdict::Inconclusive;
  std::string reason;
  ValidationReport validation;
  NonlinearityClass nonlinearity = NonlinearityClass::SlopeRestricted;
  SlopeBand band;
  std::optional<PrimalSummary> primal;
  std::optional<DualSummary> dual;
  std::optional<detect::PiecewiseLinearMap> phi;
  std::optional<detect::SlopeReport> slope;
  std::optional<EquilibriumCheck> equilibrium;
  AnalysisOptions options;
};

/// Primal LMI first; on failure the reduced dual, rank reduction, certificate
/// extraction, nonlinearity construction and an equilibrium simulation.
/// Throws the validation errors of validate().
AnalysisReport analyze(const StateSpaceSystem& sys, const AnalysisOptions& options = {});

}  // namespace lure::report
