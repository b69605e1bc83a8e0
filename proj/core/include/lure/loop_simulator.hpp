#pragma once

#include <vector>

#include "lure/piecewise_linear.hpp"
#include "lure/system_model.hpp"

namespace lure::sim {

struct LoopSettings {
  double tol = 1e-12;  // ||dw|| <= tol * (1 + ||w||)
  int max_iterations = 10000;
};

struct LoopSolution {
  Vector w;
  double residual = 0.0;  // ||w - Phi(C x + D w)||
  int iterations = 0;
  std::vector<double> increments;  // ||w_{k+1} - w_k|| per iteration
};

/// Solves w = Phi(C x + D w) by fixed-point iteration from w = 0. Requires
/// ||D|| * Lip(phi) < 1 (UnsupportedMode otherwise); NumericFailure at the cap.
LoopSolution solve_loop(const StateSpaceSystem& sys, const detect::PiecewiseLinearMap& phi,
                        const Vector& x, const LoopSettings& settings = {});

struct Trajectory {
  std::vector<Vector> states;   // x(0..K)
  std::vector<Vector> outputs;  // z(0..K)
  std::vector<Vector> inputs;   // w(0..K)
  std::vector<double> loop_residuals;
};

Trajectory simulate(const StateSpaceSystem& sys, const detect::PiecewiseLinearMap& phi,
                    const Vector& x0, int steps, const LoopSettings& settings = {});

struct Grid {
  double x_min = -2.0;
  double x_max = 2.0;
  double y_min = -2.0;
  double y_max = 2.0;
  int nx = 21;
  int ny = 21;
};

struct FieldSample {
  Vector x;
  Vector dx;  // x_next - x
};

/// One displacement per grid node, row-major in y then x. Planar systems only.
std::vector<FieldSample> vector_field(const StateSpaceSystem& sys,
                                      const detect::PiecewiseLinearMap& phi, const Grid& grid,
                                      const LoopSettings& settings = {});

}  // namespace lure::sim
