#pragma once

#include "lure/conic_problem.hpp"
#include "lure/system_model.hpp"

namespace lure::lmi {

enum class LmiKind { PrimalDHD, PrimalDD, DualDHD, DualDD };

const char* to_string(LmiKind k) noexcept;

struct LmiSpec {
  LmiKind kind = LmiKind::PrimalDHD;
  bool reduced = true;  // (mu, nu) = (0, 1) form: P free symmetric, dual with equality
};

/// Scale caps that make the homogeneous primal margin problem bounded.
struct AssemblySettings {
  double p_bound = 1e4;       // |P_ij| <= p_bound
  double m_diag_bound = 1e4;  // M_ii <= m_diag_bound (bounds the whole cone slice)
  double margin_cap = 1.0;    // t <= margin_cap
};

/// Primal stability LMI
///   [A B]^T P [A B] - [I 0]^T P [I 0] + [C D; 0 I]^T Pi(M) [C D; 0 I] < 0
/// with M in DHD (variables P, M) or M = Md + Mod in DD (variables P, Md,
/// Mod, Mbar). The non-reduced form adds P - tI >= 0.
sdp::SdpFeasibilityProblem build_primal(const StateSpaceSystem& sys, LmiSpec spec,
                                        const AssemblySettings& settings = {});

/// Reduced dual LMI over H >= 0, f, g >= 0, X (and Z) in Z0, trace(H) = 1.
/// Throws UnsupportedMode unless the band is (0, 1) and the kind is a dual.
sdp::SdpFeasibilityProblem build_dual(const StateSpaceSystem& sys, LmiSpec spec);

/// Adds diag([A B] H [I 0]^T) >= 0, which for H = h h^T is exactly
/// P_d((A h1 + B h2) h1^T) >= 0.
void add_sign_cut(sdp::SdpFeasibilityProblem& dual, const StateSpaceSystem& sys);

/// Effective multiplier matrix M of a primal solution (M, or Md + Mod).
Matrix primal_multiplier(const sdp::SdpFeasibilityProblem& primal,
                         const std::map<std::string, Matrix>& assignment);

/// [A B] H [A B]^T - [I 0] H [I 0]^T.
Matrix lyapunov_block(const StateSpaceSystem& sys, const Matrix& h);
/// Y(H) = [0 I] H ([C D] - [0 I])^T.
Matrix coupling_matrix(const StateSpaceSystem& sys, const Matrix& h);

}  // namespace lure::lmi
