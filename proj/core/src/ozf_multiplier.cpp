#include "lure/ozf_multiplier.hpp"

#include "lure/error.hpp"

namespace lure::ozf {

Matrix congruence_factor(const SlopeBand& band, Eigen::Index m) {
  const Matrix id = Matrix::Identity(m, m);
  Matrix v(2 * m, 2 * m);
  v << band.nu() * id, -id,
       -band.mu() * id, id;
  return v;
}

Multiplier build_multiplier(const Matrix& m, const SlopeBand& band) {
  if (m.rows() != m.cols()) {
    throw Error(ErrorKind::Structural, "build_multiplier: M is not square");
  }
  const Eigen::Index k = m.rows();
  Matrix kernel = Matrix::Zero(2 * k, 2 * k);
  kernel.topRightCorner(k, k) = m;
  kernel.bottomLeftCorner(k, k) = m.transpose();
  const Matrix v = congruence_factor(band, k);
  return {linalg::SymMatrix::from(v.transpose() * kernel * v), m, band};
}

double quad_form(const Multiplier& mult, const Vector& zeta, const Vector& w) {
  const Eigen::Index k = mult.source.rows();
  if (zeta.size() != k || w.size() != k) {
    throw Error(ErrorKind::Structural, "quad_form: vector dimension mismatch");
  }
  Vector v(2 * k);
  v << zeta, w;
  return v.dot(mult.pi.matrix() * v);
}

}  // namespace lure::ozf
