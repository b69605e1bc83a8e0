#include "lure/matrix_cones.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "lure/error.hpp"

namespace lure::cones {

const char* to_string(ConeTag tag) noexcept {
  switch (tag) {
    case ConeTag::Z: return "Z";
    case ConeTag::Z0: return "Z0";
    case ConeTag::DHD: return "DHD";
    case ConeTag::DD: return "DD";
    case ConeTag::Diag: return "Diag";
    case ConeTag::OffDiag: return "OffDiag";
  }
  return "?";
}

namespace {

void require_square(const Matrix& m, const char* what) {
  if (m.rows() != m.cols()) {
    throw Error(ErrorKind::Structural, std::string(what) + ": matrix is not square");
  }
}

// Largest positive off-diagonal entry (0 if none).
double offdiag_positive_part(const Matrix& m) {
  double worst = 0.0;
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (i != j) worst = std::max(worst, m(i, j));
    }
  }
  return worst;
}

// Largest negative row or column sum deficit (0 if all sums are >= 0).
double sum_deficit(const Matrix& m) {
  const double rows = m.rowwise().sum().minCoeff();
  const double cols = m.colwise().sum().minCoeff();
  return std::max(0.0, -std::min(rows, cols));
}

}  // namespace

Matrix abs_d(const Matrix& m) {
  require_square(m, "abs_d");
  Matrix out = -m.cwiseAbs();
  out.diagonal() = m.diagonal();
  return out;
}

ProjSplit proj_split(const Matrix& m) {
  require_square(m, "proj_split");
  ProjSplit out;
  out.diag = Matrix::Zero(m.rows(), m.cols());
  out.diag.diagonal() = m.diagonal();
  out.offdiag = m;
  out.offdiag.diagonal().setZero();
  return out;
}

Membership is_member(const Matrix& m, ConeTag cone, double tol) {
  require_square(m, "is_member");
  double worst = 0.0;
  switch (cone) {
    case ConeTag::Z:
      worst = offdiag_positive_part(m);
      break;
    case ConeTag::Z0:
      worst = std::max(offdiag_positive_part(m),
                       m.size() ? m.diagonal().cwiseAbs().maxCoeff() : 0.0);
      break;
    case ConeTag::DHD:
      worst = std::max(offdiag_positive_part(m), sum_deficit(m));
      break;
    case ConeTag::DD:
      worst = sum_deficit(abs_d(m));
      break;
    case ConeTag::Diag:
      worst = m.size() ? proj_split(m).offdiag.cwiseAbs().maxCoeff() : 0.0;
      break;
    case ConeTag::OffDiag:
      worst = m.size() ? m.diagonal().cwiseAbs().maxCoeff() : 0.0;
      break;
  }
  return {worst <= tol, worst};
}

Matrix random_member(ConeTag cone, int m, std::uint64_t seed) {
  if (m < 1) throw Error(ErrorKind::Structural, "random_member: m must be >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> sym(-1.0, 1.0);
  const double scale = std::exp(std::uniform_real_distribution<double>(-2.0, 2.0)(rng));

  Matrix out = Matrix::Zero(m, m);
  auto fill_offdiag = [&](auto&& draw) {
    for (int j = 0; j < m; ++j)
      for (int i = 0; i < m; ++i)
        if (i != j) out(i, j) = scale * draw();
  };
  // Diagonal that dominates the absolute off-diagonal row and column sums.
  // The strictly positive slack absorbs summation-order round-off.
  auto dominate = [&]() {
    const Matrix a = out.cwiseAbs();
    for (int i = 0; i < m; ++i) {
      const double need = std::max(a.row(i).sum() - a(i, i), a.col(i).sum() - a(i, i));
      out(i, i) = need * (1.0 + 1e-12) + scale * (1e-12 + unit(rng));
    }
  };

  switch (cone) {
    case ConeTag::Z:
      fill_offdiag([&] { return -unit(rng); });
      for (int i = 0; i < m; ++i) out(i, i) = scale * sym(rng);
      break;
    case ConeTag::Z0:
      fill_offdiag([&] { return -unit(rng); });
      break;
    case ConeTag::DHD:
      fill_offdiag([&] { return -unit(rng); });
      dominate();
      break;
    case ConeTag::DD:
      fill_offdiag([&] { return sym(rng); });
      dominate();
      break;
    case ConeTag::Diag:
      for (int i = 0; i < m; ++i) out(i, i) = scale * sym(rng);
      break;
    case ConeTag::OffDiag:
      fill_offdiag([&] { return sym(rng); });
      break;
  }
  return out;
}

}  // namespace lure::cones
