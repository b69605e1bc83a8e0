#include "lure/loop_simulator.hpp"

#include <sstream>

#include "lure/error.hpp"

namespace lure::sim {

namespace {

Vector apply(const detect::PiecewiseLinearMap& phi, const Vector& z) {
  Vector w(z.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) w(i) = phi(z(i));
  return w;
}

}  // namespace

LoopSolution solve_loop(const StateSpaceSystem& sys, const detect::PiecewiseLinearMap& phi,
                        const Vector& x, const LoopSettings& settings) {
  const double contraction = linalg::spectral_norm(sys.D) * phi.lipschitz();
  if (!(contraction < 1.0)) {
    std::ostringstream os;
    os << "algebraic loop is not a contraction: ||D|| * Lip(phi) = " << contraction;
    throw Error(ErrorKind::UnsupportedMode, os.str());
  }
  const Vector cx = sys.C * x;
  LoopSolution s;
  s.w = Vector::Zero(sys.channels());
  for (s.iterations = 1; s.iterations <= settings.max_iterations; ++s.iterations) {
    const Vector next = apply(phi, cx + sys.D * s.w);
    const double step = (next - s.w).norm();
    s.increments.push_back(step);
    s.w = next;
    if (step <= settings.tol * (1.0 + s.w.norm())) {
      s.residual = (s.w - apply(phi, cx + sys.D * s.w)).norm();
      return s;
    }
  }
  s.iterations = settings.max_iterations;
  s.residual = (s.w - apply(phi, cx + sys.D * s.w)).norm();
  std::ostringstream os;
  os << "loop solve hit " << settings.max_iterations << " iterations, residual " << s.residual;
  throw Error(ErrorKind::NumericFailure, os.str());
}

Trajectory simulate(const StateSpaceSystem& sys, const detect::PiecewiseLinearMap& phi,
                    const Vector& x0, int steps, const LoopSettings& settings) {
  if (steps < 0) throw Error(ErrorKind::Input, "negative step count");
  if (x0.size() != sys.states()) throw Error(ErrorKind::Input, "initial state has the wrong length");
  Trajectory t;
  Vector x = x0;
  for (int k = 0; k <= steps; ++k) {
    const LoopSolution loop = solve_loop(sys, phi, x, settings);
    t.states.push_back(x);
    t.outputs.push_back(sys.C * x + sys.D * loop.w);
    t.inputs.push_back(loop.w);
    t.loop_residuals.push_back(loop.residual);
    if (k < steps) x = sys.A * x + sys.B * loop.w;
  }
  return t;
}

std::vector<FieldSample> vector_field(const StateSpaceSystem& sys,
                                      const detect::PiecewiseLinearMap& phi, const Grid& grid,
                                      const LoopSettings& settings) {
  if (sys.states() != 2) throw Error(ErrorKind::UnsupportedMode, "vector field needs a planar system");
  if (grid.nx < 1 || grid.ny < 1) throw Error(ErrorKind::Input, "grid resolution must be positive");
  auto coord = [](double lo, double hi, int count, int i) {
    return count == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
  };
  std::vector<FieldSample> out;
  out.reserve(static_cast<std::size_t>(grid.nx) * static_cast<std::size_t>(grid.ny));
  for (int iy = 0; iy < grid.ny; ++iy) {
    for (int ix = 0; ix < grid.nx; ++ix) {
      Vector x(2);
      x << coord(grid.x_min, grid.x_max, grid.nx, ix), coord(grid.y_min, grid.y_max, grid.ny, iy);
      const LoopSolution loop = solve_loop(sys, phi, x, settings);
      out.push_back({x, sys.A * x + sys.B * loop.w - x});
    }
  }
  return out;
}

}  // namespace lure::sim
