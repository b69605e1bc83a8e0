#include "lure/system_model.hpp"

#include <algorithm>
#include <complex>
#include <sstream>

#include "lure/error.hpp"

namespace lure {

SlopeBand::SlopeBand(double mu, double nu) : mu_(mu), nu_(nu) {
  if (!(mu <= 0.0 && 0.0 <= nu)) {
    std::ostringstream msg;
    msg << "slope band requires mu <= 0 <= nu, got (" << mu << ", " << nu << ")";
    throw Error(ErrorKind::Structural, msg.str());
  }
}

const char* to_string(NonlinearityClass c) noexcept {
  return c == NonlinearityClass::SlopeRestrictedOdd ? "slope_odd" : "slope";
}

NonlinearityClass parse_nonlinearity_class(const std::string& tag) {
  if (tag == "slope") return NonlinearityClass::SlopeRestricted;
  if (tag == "slope_odd") return NonlinearityClass::SlopeRestrictedOdd;
  throw Error(ErrorKind::Input, "unknown nonlinearity class '" + tag + "'");
}

double spectral_radius(const Matrix& a) {
  if (a.rows() != a.cols()) {
    throw Error(ErrorKind::Structural, "spectral_radius: matrix is not square");
  }
  if (!a.allFinite()) {
    throw Error(ErrorKind::NumericFailure, "spectral_radius: non-finite entries");
  }
  if (a.size() == 0) return 0.0;
  Eigen::EigenSolver<Matrix> solver(a, false);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::NumericFailure, "spectral_radius: eigenvalues did not converge");
  }
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

namespace {

void require_shape(const Matrix& m, Eigen::Index rows, Eigen::Index cols, const char* name) {
  if (m.rows() != rows || m.cols() != cols) {
    std::ostringstream msg;
    msg << name << " is " << m.rows() << "x" << m.cols() << ", expected " << rows << "x" << cols;
    throw Error(ErrorKind::Structural, msg.str());
  }
  if (!m.allFinite()) {
    throw Error(ErrorKind::Structural, std::string(name) + " has non-finite entries");
  }
}

}  // namespace

ValidationReport validate(const StateSpaceSystem& sys) {
  const Eigen::Index n = sys.A.rows();
  const Eigen::Index m = sys.B.cols();
  if (n == 0 || m == 0) {
    throw Error(ErrorKind::Structural, "system needs at least one state and one channel");
  }
  require_shape(sys.A, n, n, "A");
  require_shape(sys.B, n, m, "B");
  require_shape(sys.C, m, n, "C");
  require_shape(sys.D, m, m, "D");

  ValidationReport r;
  r.states = n;
  r.channels = m;
  r.spectral_radius = spectral_radius(sys.A);
  r.schur_margin = 1.0 - r.spectral_radius;
  r.d_norm = linalg::spectral_norm(sys.D);
  r.gain_margin = 1.0 - r.d_norm;
  r.unit_band = sys.band.is_unit();
  r.gain_assumption = r.gain_margin > 0.0;
  if (r.schur_margin <= 0.0) {
    std::ostringstream msg;
    msg << "A is not Schur stable (spectral radius " << r.spectral_radius << ")";
    throw Error(ErrorKind::AssumptionViolated, msg.str());
  }
  return r;
}

}  // namespace lure
