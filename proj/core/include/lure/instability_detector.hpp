#pragma once

#include <optional>
#include <string>
#include <variant>

#include "lure/piecewise_linear.hpp"
#include "lure/sdp_engine.hpp"
#include "lure/system_model.hpp"

namespace lure::detect {

/// Rank-1 solution of the reduced dual LMI and the equilibrium data it induces.
struct DualCertificate {
  linalg::SymMatrix H;
  Vector f;
  Vector g;
  Matrix X;
  std::optional<Matrix> Z;  // DD duals only
  int rank = 0;
  double eig_ratio = 0.0;   // lambda_2 / lambda_1
  Vector h1;
  Vector h2;
  Vector z_star;  // C h1 + D h2
  Vector w_star;  // h2
  double factor_error = 0.0;          // ||H - h h^T||_F / trace(H)
  double equilibrium_residual = 0.0;  // ||A h1 + B h2 - h1|| / ||h1||
  double sign_margin = 0.0;           // min_i (A h1 + B h2)_i (h1)_i / ||h1||^2
};

enum class InconclusiveReason { Rank, Sign };

const char* to_string(InconclusiveReason r) noexcept;

struct Inconclusive {
  InconclusiveReason reason = InconclusiveReason::Rank;
  int rank = 0;
  double eig_ratio = 0.0;
  std::string detail;
};

using Extraction = std::variant<DualCertificate, Inconclusive>;

struct DetectorSettings {
  double rank_tol = 1e-6;
  double sign_tol = 1e-9;         // relative to ||h1||^2
  double equilibrium_tol = 1e-6;  // relative to ||h1||
  double h1_zero_tol = 1e-9;      // relative to ||(h1; h2)||
  double merge_tol = 1e-7;        // relative to max(1, ||z*||)
};

/// Rank test, (h1, h2) split, sign condition and equilibrium branch check.
/// The factor sign is fixed so that the largest-magnitude entry of h1 is
/// positive. Throws InternalContradiction when h1 ~ 0.
Extraction extract_certificate(const StateSpaceSystem& sys, const sdp::SolveResult& dual,
                               NonlinearityClass nonlinearity,
                               const DetectorSettings& settings = {});

/// Certificate for the factor s h with s chosen so that |h1| = h1_norm; H, f,
/// g, X and Z scale by s^2. Every dual constraint is homogeneous, so validity
/// is unchanged.
DualCertificate rescale(const DualCertificate& cert, double h1_norm);

/// The same certificate for the factor -h.
DualCertificate flip_sign(const DualCertificate& cert);

/// Destabilizing nonlinearity through (0, 0) and (z*_i, w*_i) [and
/// (-z*_i, -w*_i) when odd]. Coincident z nodes are merged; throws
/// CertificateInconsistent when merged nodes disagree in w.
PiecewiseLinearMap build_pwl(const DualCertificate& cert, bool odd, double merge_tol = 1e-7);

}  // namespace lure::detect
