#pragma once

#include <cstdint>

#include "lure/linalg.hpp"

namespace lure::cones {

enum class ConeTag { Z, Z0, DHD, DD, Diag, OffDiag };

const char* to_string(ConeTag tag) noexcept;

inline constexpr double kDefaultMembershipTol = 1e-9;

/// Diagonal kept, off-diagonal entries replaced by -|m_ij|.
Matrix abs_d(const Matrix& m);

struct ProjSplit {
  Matrix diag;
  Matrix offdiag;
};

ProjSplit proj_split(const Matrix& m);

struct Membership {
  bool member = false;
  double worst_violation = 0.0;  // 0 when every condition holds with slack
};

Membership is_member(const Matrix& m, ConeTag cone, double tol = kDefaultMembershipTol);

/// Deterministic sample of the cone (passes is_member with tol = 0).
Matrix random_member(ConeTag cone, int m, std::uint64_t seed);

}  // namespace lure::cones
