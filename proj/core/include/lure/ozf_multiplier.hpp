#pragma once

#include "lure/linalg.hpp"
#include "lure/system_model.hpp"

namespace lure::ozf {

/// Static O'Shea-Zames-Falb multiplier
///   pi = V^T [0 M; M^T 0] V,   V = [nu I, -I; -mu I, I].
/// For (mu, nu) = (0, 1) this is [0 M; M^T -(M + M^T)].
struct Multiplier {
  linalg::SymMatrix pi;
  Matrix source;
  SlopeBand band;
};

/// The congruence factor V of the multiplier for channel count m.
Matrix congruence_factor(const SlopeBand& band, Eigen::Index m);

Multiplier build_multiplier(const Matrix& m, const SlopeBand& band);

/// [zeta; w]^T pi [zeta; w].
double quad_form(const Multiplier& mult, const Vector& zeta, const Vector& w);

}  // namespace lure::ozf
