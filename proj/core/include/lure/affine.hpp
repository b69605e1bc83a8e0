#pragma once

#include <initializer_list>
#include <map>
#include <vector>

#include "lure/linalg.hpp"

namespace lure::sdp {

/// Matrix-valued affine function of the scalar decision variables:
///   F(s) = F0 + sum_k s_k F_k.
/// Terms are keyed by scalar index; ordered storage keeps every traversal
/// deterministic.
class AffineMatrix {
 public:
  AffineMatrix() = default;
  AffineMatrix(Eigen::Index rows, Eigen::Index cols);

  static AffineMatrix constant(const Matrix& c);
  static AffineMatrix zero(Eigen::Index rows, Eigen::Index cols) { return {rows, cols}; }
  /// 2x2 block assembly; blocks in a row must agree in height, in a column in width.
  static AffineMatrix blocks(std::initializer_list<std::initializer_list<AffineMatrix>> rows);

  [[nodiscard]] Eigen::Index rows() const noexcept { return constant_.rows(); }
  [[nodiscard]] Eigen::Index cols() const noexcept { return constant_.cols(); }
  [[nodiscard]] const Matrix& constant_part() const noexcept { return constant_; }
  [[nodiscard]] const std::map<int, Matrix>& terms() const noexcept { return terms_; }

  void add_term(int scalar, const Matrix& coeff);
  void add_to_entry(Eigen::Index i, Eigen::Index j, int scalar, double coeff);

  [[nodiscard]] Matrix evaluate(const Vector& scalars) const;
  [[nodiscard]] AffineMatrix transpose() const;
  [[nodiscard]] AffineMatrix block(Eigen::Index r, Eigen::Index c, Eigen::Index nr, Eigen::Index nc) const;
  [[nodiscard]] AffineMatrix trace() const;  // 1x1
  [[nodiscard]] AffineMatrix diagonal_part() const;
  [[nodiscard]] AffineMatrix offdiagonal_part() const;
  /// Drops coefficients whose magnitude is below tol (assembly round-off).
  void prune(double tol = 0.0);

  AffineMatrix& operator+=(const AffineMatrix& o);
  AffineMatrix& operator-=(const AffineMatrix& o);
  AffineMatrix& operator*=(double s);

 private:
  Matrix constant_;
  std::map<int, Matrix> terms_;
};

AffineMatrix operator+(AffineMatrix a, const AffineMatrix& b);
AffineMatrix operator-(AffineMatrix a, const AffineMatrix& b);
AffineMatrix operator-(AffineMatrix a);
AffineMatrix operator*(double s, AffineMatrix a);
AffineMatrix operator*(const Matrix& l, const AffineMatrix& a);
AffineMatrix operator*(const AffineMatrix& a, const Matrix& r);

}  // namespace lure::sdp
