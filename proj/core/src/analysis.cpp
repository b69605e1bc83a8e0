#include "lure/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "lure/error.hpp"

namespace lure::report {

const char* to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::AbsolutelyStable: return "absolutely_stable";
    case Verdict::NotAbsolutelyStable: return "not_absolutely_stable";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

int exit_code_for(Verdict v) noexcept {
  switch (v) {
    case Verdict::AbsolutelyStable: return exit_code::kStable;
    case Verdict::NotAbsolutelyStable: return exit_code::kNotAbsolutelyStable;
    case Verdict::Inconclusive: return exit_code::kInconclusive;
  }
  return exit_code::kInconclusive;
}

namespace {

sdp::EngineSettings engine_settings(const AnalysisOptions& o) {
  sdp::EngineSettings s;
  s.max_iterations = o.max_ipm_iters;
  s.rank_tol = o.rank_tol;
  s.seed = o.seed;
  return s;
}

detect::DetectorSettings detector_settings(const AnalysisOptions& o) {
  detect::DetectorSettings s;
  s.rank_tol = o.rank_tol;
  s.equilibrium_tol = o.eq_tol;
  return s;
}

PrimalSummary run_primal(const StateSpaceSystem& sys, const AnalysisOptions& o) {
  PrimalSummary p;
  p.kind = sys.nonlinearity == NonlinearityClass::SlopeRestrictedOdd ? lmi::LmiKind::PrimalDD
                                                                      : lmi::LmiKind::PrimalDHD;
  p.reduced = sys.band.is_unit();
  const auto problem = lmi::build_primal(sys, {p.kind, p.reduced}, o.assembly);
  const auto r = sdp::solve(problem, engine_settings(o));
  p.status = r.status;
  p.margin = r.margin.value_or(-std::numeric_limits<double>::infinity());
  p.P = r.at("P");
  p.M = lmi::primal_multiplier(problem, r.assignment);
  p.residuals = r.residuals;
  p.iterations = r.iterations;
  p.strictly_feasible = r.status == sdp::SolveStatus::Feasible && p.margin >= o.primal_margin;
  return p;
}

struct DualAttempt {
  sdp::SolveResult reduced;
  detect::Extraction extraction;
};

DualAttempt attempt(const StateSpaceSystem& sys, const sdp::SdpFeasibilityProblem& problem,
                    const sdp::SolveResult& first, const AnalysisOptions& o) {
  const auto settings = engine_settings(o);
  sdp::SolveResult reduced = sdp::reduce_rank(problem, first, settings);
  detect::Extraction ex = detect::extract_certificate(sys, reduced, sys.nonlinearity, detector_settings(o));
  return {std::move(reduced), std::move(ex)};
}

}  // namespace

AnalysisReport analyze(const StateSpaceSystem& sys, const AnalysisOptions& options) {
  AnalysisReport rep;
  rep.options = options;
  rep.validation = validate(sys);
  rep.nonlinearity = sys.nonlinearity;
  rep.band = sys.band;
  const bool odd = sys.nonlinearity == NonlinearityClass::SlopeRestrictedOdd;

  rep.primal = run_primal(sys, options);
  if (rep.primal->strictly_feasible) {
    rep.verdict = Verdict::AbsolutelyStable;
    rep.reason = "primal LMI strictly feasible";
    return rep;
  }
  if (!sys.band.is_unit()) {
    rep.verdict = Verdict::Inconclusive;
    rep.reason = "primal LMI not strictly feasible; detection is only defined for slope band (0, 1)";
    return rep;
  }

  DualSummary d;
  d.kind = odd ? lmi::LmiKind::DualDD : lmi::LmiKind::DualDHD;
  const auto settings = engine_settings(options);
  auto problem = lmi::build_dual(sys, {d.kind, true});
  const sdp::SolveResult first = sdp::solve(problem, settings);
  d.status = first.status;
  d.residuals = first.residuals;
  d.iterations = first.iterations;
  if (first.status != sdp::SolveStatus::Feasible) {
    if (rep.primal->status == sdp::SolveStatus::NumericalLimit &&
        first.status == sdp::SolveStatus::NumericalLimit) {
      throw Error(ErrorKind::NumericFailure, "neither the primal nor the dual LMI solve converged");
    }
    rep.dual = std::move(d);
    rep.verdict = Verdict::Inconclusive;
    rep.reason = std::string("primal LMI not strictly feasible and dual is ") + sdp::to_string(first.status);
    return rep;
  }

  DualAttempt a = attempt(sys, problem, first, options);
  if (!std::holds_alternative<detect::DualCertificate>(a.extraction)) {
    // The reweighting may land on the A h1 + B h2 = -h1 face; cut it off and retry.
    auto cut = problem;
    lmi::add_sign_cut(cut, sys);
    const sdp::SolveResult cut_first = sdp::solve(cut, settings);
    if (cut_first.status == sdp::SolveStatus::Feasible) {
      DualAttempt b = attempt(sys, cut, cut_first, options);
      if (std::holds_alternative<detect::DualCertificate>(b.extraction)) {
        a = std::move(b);
        d.sign_cut = true;
      }
    }
  }
  d.rank_trail = a.reduced.rank_trail;
  d.rank_rounds = a.reduced.rank_rounds;
  d.residuals = a.reduced.residuals;
  if (const auto* inc = std::get_if<detect::Inconclusive>(&a.extraction)) {
    d.inconclusive = *inc;
    rep.dual = std::move(d);
    rep.verdict = Verdict::Inconclusive;
    rep.reason = std::string("dual feasible but no usable rank-1 certificate (") +
                 detect::to_string(inc->reason) + "): " + inc->detail;
    return rep;
  }
  d.certificate = std::get<detect::DualCertificate>(a.extraction);
  rep.dual = d;
  // The certificate is homogeneous; phi* and the equilibrium live at the display scale.
  const detect::DualCertificate cert = detect::rescale(*d.certificate, options.display_norm);

  try {
    rep.phi = detect::build_pwl(cert, odd);
  } catch (const Error& e) {
    rep.verdict = Verdict::Inconclusive;
    rep.reason = std::string("nonlinearity construction failed: ") + e.what();
    return rep;
  }
  rep.slope = detect::verify_slope(*rep.phi, SlopeBand(0.0, 1.0));
  if (!rep.slope->ok) {
    rep.verdict = Verdict::Inconclusive;
    rep.reason = "constructed nonlinearity violates the slope band";
    return rep;
  }

  EquilibriumCheck eq;
  eq.steps = options.equilibrium_steps;
  eq.contraction = rep.validation.d_norm * rep.phi->lipschitz();
  if (!(eq.contraction < 1.0)) {
    rep.equilibrium = eq;
    rep.verdict = Verdict::Inconclusive;
    rep.reason = "algebraic loop with the constructed nonlinearity is not a contraction";
    return rep;
  }
  const double h1n = cert.h1.norm();
  const sim::LoopSolution at_h1 = sim::solve_loop(sys, *rep.phi, cert.h1);
  eq.loop_residual = (sys.A * cert.h1 + sys.B * at_h1.w - cert.h1).norm() / h1n;
  const sim::Trajectory traj = sim::simulate(sys, *rep.phi, cert.h1, options.equilibrium_steps);
  for (const auto& x : traj.states) eq.max_deviation = std::max(eq.max_deviation, (x - cert.h1).norm() / h1n);
  eq.ok = eq.max_deviation <= options.sim_tol && eq.loop_residual <= options.sim_tol;
  rep.equilibrium = eq;
  if (!eq.ok) {
    std::ostringstream os;
    os << "equilibrium simulation drifted: max_k |x(k) - h1| / |h1| = " << eq.max_deviation;
    rep.verdict = Verdict::Inconclusive;
    rep.reason = os.str();
    return rep;
  }
  rep.verdict = Verdict::NotAbsolutelyStable;
  rep.reason = odd ? "rank-1 dual certificate yields an odd slope-restricted nonlinearity with a nonzero equilibrium"
                   : "rank-1 dual certificate yields a slope-restricted nonlinearity with a nonzero equilibrium";
  return rep;
}

}  // namespace lure::report
