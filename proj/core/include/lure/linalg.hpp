#pragma once

#include <Eigen/Dense>

namespace lure {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

namespace linalg {

/// Dense real symmetric matrix. Every write goes to both (i,j) and (j,i), so
/// the stored entries are exactly symmetric.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(Eigen::Index dim) : data_(Matrix::Zero(dim, dim)) {}

  /// Symmetrizes (S + S^T)/2. Throws Structural if S is not square.
  static SymMatrix from(const Matrix& s);
  static SymMatrix identity(Eigen::Index dim);

  [[nodiscard]] Eigen::Index dim() const noexcept { return data_.rows(); }
  [[nodiscard]] double operator()(Eigen::Index i, Eigen::Index j) const { return data_(i, j); }
  void set(Eigen::Index i, Eigen::Index j, double v) {
    data_(i, j) = v;
    data_(j, i) = v;
  }
  [[nodiscard]] const Matrix& matrix() const noexcept { return data_; }
  [[nodiscard]] double trace() const { return data_.trace(); }

 private:
  Matrix data_;
};

struct EigSystem {
  Vector values;   // descending
  Matrix vectors;  // column k belongs to values(k)
};

EigSystem sym_eig(const SymMatrix& s);

double spectral_norm(const Matrix& m);

struct RankFactor {
  int rank = 0;
  Matrix factor;        // dim x rank, S ~ factor * factor^T
  Vector eigenvalues;   // descending, for diagnostics
  [[nodiscard]] double ratio() const;  // lambda_2 / lambda_1, 0 for dim < 2
};

inline constexpr double kDefaultRankTol = 1e-6;

/// Numerical rank of a PSD matrix: #{lambda_i > rel_tol * lambda_max}.
/// Throws ConeViolation when lambda_min < -rel_tol * lambda_max.
RankFactor numerical_rank_and_factor(const SymMatrix& s, double rel_tol = kDefaultRankTol);

[[nodiscard]] bool all_finite(const Matrix& m);

}  // namespace linalg
}  // namespace lure
