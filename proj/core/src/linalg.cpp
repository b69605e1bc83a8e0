#include "lure/linalg.hpp"

#include <algorithm>
#include <cmath>

#include "lure/error.hpp"

namespace lure::linalg {

SymMatrix SymMatrix::from(const Matrix& s) {
  if (s.rows() != s.cols()) {
    throw Error(ErrorKind::Structural, "SymMatrix: matrix is not square");
  }
  SymMatrix out;
  out.data_ = 0.5 * (s + s.transpose());
  return out;
}

SymMatrix SymMatrix::identity(Eigen::Index dim) {
  SymMatrix out;
  out.data_ = Matrix::Identity(dim, dim);
  return out;
}

bool all_finite(const Matrix& m) { return m.allFinite(); }

EigSystem sym_eig(const SymMatrix& s) {
  if (!all_finite(s.matrix())) {
    throw Error(ErrorKind::NumericFailure, "sym_eig: non-finite entries");
  }
  EigSystem out;
  if (s.dim() == 0) return out;
  Eigen::SelfAdjointEigenSolver<Matrix> solver(s.matrix());
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::NumericFailure, "sym_eig: eigen-decomposition did not converge");
  }
  // Eigen sorts ascending
  out.values = solver.eigenvalues().reverse();
  out.vectors = solver.eigenvectors().rowwise().reverse();
  return out;
}

double spectral_norm(const Matrix& m) {
  if (!all_finite(m)) {
    throw Error(ErrorKind::NumericFailure, "spectral_norm: non-finite entries");
  }
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

double RankFactor::ratio() const {
  if (eigenvalues.size() < 2 || eigenvalues(0) <= 0.0) return 0.0;
  return std::max(eigenvalues(1), 0.0) / eigenvalues(0);
}

RankFactor numerical_rank_and_factor(const SymMatrix& s, double rel_tol) {
  RankFactor out;
  const EigSystem eig = sym_eig(s);
  out.eigenvalues = eig.values;
  if (eig.values.size() == 0) {
    out.factor = Matrix(0, 0);
    return out;
  }
  const double lmax = eig.values(0);
  const double lmin = eig.values(eig.values.size() - 1);
  if (lmax <= 0.0) {
    if (lmin < 0.0) {
      throw Error(ErrorKind::ConeViolation, "numerical_rank_and_factor: matrix is negative");
    }
    out.factor = Matrix::Zero(s.dim(), 0);
    return out;
  }
  if (lmin < -rel_tol * lmax) {
    throw Error(ErrorKind::ConeViolation,
                "numerical_rank_and_factor: matrix is indefinite beyond tolerance");
  }
  int rank = 0;
  for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
    if (eig.values(i) > rel_tol * lmax) ++rank;
  }
  out.rank = rank;
  out.factor = eig.vectors.leftCols(rank) *
               eig.values.head(rank).cwiseSqrt().asDiagonal();
  return out;
}

}  // namespace lure::linalg
