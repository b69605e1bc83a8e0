#include "lure/affine.hpp"

#include <algorithm>
#include <cmath>

#include "lure/error.hpp"

namespace lure::sdp {

AffineMatrix::AffineMatrix(Eigen::Index rows, Eigen::Index cols)
    : constant_(Matrix::Zero(rows, cols)) {}

AffineMatrix AffineMatrix::constant(const Matrix& c) {
  AffineMatrix out;
  out.constant_ = c;
  return out;
}

AffineMatrix AffineMatrix::blocks(std::initializer_list<std::initializer_list<AffineMatrix>> rows) {
  Eigen::Index total_rows = 0;
  Eigen::Index total_cols = -1;
  for (const auto& row : rows) {
    Eigen::Index h = -1;
    Eigen::Index w = 0;
    for (const auto& b : row) {
      if (h >= 0 && b.rows() != h) throw Error(ErrorKind::Structural, "blocks: row height mismatch");
      h = b.rows();
      w += b.cols();
    }
    if (total_cols >= 0 && w != total_cols) {
      throw Error(ErrorKind::Structural, "blocks: row width mismatch");
    }
    total_cols = w;
    total_rows += std::max<Eigen::Index>(h, 0);
  }
  AffineMatrix out(total_rows, std::max<Eigen::Index>(total_cols, 0));
  Eigen::Index r0 = 0;
  for (const auto& row : rows) {
    Eigen::Index c0 = 0;
    Eigen::Index h = 0;
    for (const auto& b : row) {
      out.constant_.block(r0, c0, b.rows(), b.cols()) = b.constant_;
      for (const auto& [k, coeff] : b.terms_) {
        auto [it, inserted] = out.terms_.try_emplace(k, Matrix::Zero(out.rows(), out.cols()));
        it->second.block(r0, c0, b.rows(), b.cols()) += coeff;
      }
      c0 += b.cols();
      h = b.rows();
    }
    r0 += h;
  }
  return out;
}

void AffineMatrix::add_term(int scalar, const Matrix& coeff) {
  if (coeff.rows() != rows() || coeff.cols() != cols()) {
    throw Error(ErrorKind::Structural, "add_term: coefficient shape mismatch");
  }
  auto [it, inserted] = terms_.try_emplace(scalar, coeff);
  if (!inserted) it->second += coeff;
}

void AffineMatrix::add_to_entry(Eigen::Index i, Eigen::Index j, int scalar, double coeff) {
  auto [it, inserted] = terms_.try_emplace(scalar, Matrix::Zero(rows(), cols()));
  it->second(i, j) += coeff;
}

Matrix AffineMatrix::evaluate(const Vector& scalars) const {
  Matrix out = constant_;
  for (const auto& [k, coeff] : terms_) {
    if (k >= scalars.size()) throw Error(ErrorKind::Structural, "evaluate: scalar index out of range");
    out += scalars(k) * coeff;
  }
  return out;
}

AffineMatrix AffineMatrix::transpose() const {
  AffineMatrix out = AffineMatrix::constant(constant_.transpose());
  for (const auto& [k, coeff] : terms_) out.terms_.emplace(k, coeff.transpose());
  return out;
}

AffineMatrix AffineMatrix::block(Eigen::Index r, Eigen::Index c, Eigen::Index nr,
                                 Eigen::Index nc) const {
  AffineMatrix out = AffineMatrix::constant(constant_.block(r, c, nr, nc));
  for (const auto& [k, coeff] : terms_) {
    Matrix sub = coeff.block(r, c, nr, nc);
    if (!sub.isZero(0.0)) out.terms_.emplace(k, std::move(sub));
  }
  return out;
}

AffineMatrix AffineMatrix::trace() const {
  AffineMatrix out = AffineMatrix::constant(Matrix::Constant(1, 1, constant_.trace()));
  for (const auto& [k, coeff] : terms_) {
    const double t = coeff.trace();
    if (t != 0.0) out.terms_.emplace(k, Matrix::Constant(1, 1, t));
  }
  return out;
}

AffineMatrix AffineMatrix::diagonal_part() const {
  auto keep_diag = [](const Matrix& m) {
    Matrix d = Matrix::Zero(m.rows(), m.cols());
    d.diagonal() = m.diagonal();
    return d;
  };
  AffineMatrix out = AffineMatrix::constant(keep_diag(constant_));
  for (const auto& [k, coeff] : terms_) {
    Matrix d = keep_diag(coeff);
    if (!d.isZero(0.0)) out.terms_.emplace(k, std::move(d));
  }
  return out;
}

AffineMatrix AffineMatrix::offdiagonal_part() const {
  AffineMatrix out = *this;
  out -= diagonal_part();
  out.prune();
  return out;
}

void AffineMatrix::prune(double tol) {
  for (auto it = terms_.begin(); it != terms_.end();) {
    if (it->second.cwiseAbs().maxCoeff() <= tol) {
      it = terms_.erase(it);
    } else {
      if (tol > 0.0) it->second = it->second.unaryExpr([tol](double v) { return std::abs(v) <= tol ? 0.0 : v; });
      ++it;
    }
  }
}

AffineMatrix& AffineMatrix::operator+=(const AffineMatrix& o) {
  if (o.rows() != rows() || o.cols() != cols()) {
    throw Error(ErrorKind::Structural, "AffineMatrix +: shape mismatch");
  }
  constant_ += o.constant_;
  for (const auto& [k, coeff] : o.terms_) add_term(k, coeff);
  return *this;
}

AffineMatrix& AffineMatrix::operator-=(const AffineMatrix& o) {
  if (o.rows() != rows() || o.cols() != cols()) {
    throw Error(ErrorKind::Structural, "AffineMatrix -: shape mismatch");
  }
  constant_ -= o.constant_;
  for (const auto& [k, coeff] : o.terms_) add_term(k, -coeff);
  return *this;
}

AffineMatrix& AffineMatrix::operator*=(double s) {
  constant_ *= s;
  for (auto& [k, coeff] : terms_) coeff *= s;
  return *this;
}

AffineMatrix operator+(AffineMatrix a, const AffineMatrix& b) { return a += b; }
AffineMatrix operator-(AffineMatrix a, const AffineMatrix& b) { return a -= b; }
AffineMatrix operator-(AffineMatrix a) { return a *= -1.0; }
AffineMatrix operator*(double s, AffineMatrix a) { return a *= s; }

AffineMatrix operator*(const Matrix& l, const AffineMatrix& a) {
  if (l.cols() != a.rows()) throw Error(ErrorKind::Structural, "Matrix * AffineMatrix: shape mismatch");
  AffineMatrix out = AffineMatrix::constant(l * a.constant_part());
  for (const auto& [k, coeff] : a.terms()) out.add_term(k, l * coeff);
  return out;
}

AffineMatrix operator*(const AffineMatrix& a, const Matrix& r) {
  if (a.cols() != r.rows()) throw Error(ErrorKind::Structural, "AffineMatrix * Matrix: shape mismatch");
  AffineMatrix out = AffineMatrix::constant(a.constant_part() * r);
  for (const auto& [k, coeff] : a.terms()) out.add_term(k, coeff * r);
  return out;
}

}  // namespace lure::sdp
