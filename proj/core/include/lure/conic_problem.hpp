#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lure/affine.hpp"

namespace lure::sdp {

enum class VarKind {
  Psd,      // symmetric PSD matrix
  FreeSym,  // unconstrained symmetric matrix
  FreeMat,  // unconstrained rectangular matrix
  Nonneg,   // entrywise nonnegative column vector
  Z0,       // zero diagonal, nonpositive off-diagonal square matrix
};

const char* to_string(VarKind k) noexcept;

struct VariableDecl {
  std::string name;
  VarKind kind;
  Eigen::Index rows = 0;
  Eigen::Index cols = 0;
  int first = 0;  // first scalar index
  int count = 0;  // number of scalars
};

/// Which entries of a matrix expression carry a constraint.
enum class EntryMask { All, Upper, Diagonal, OffDiagonal };

struct Equality {
  std::string label;
  AffineMatrix expr;  // == 0 on masked entries
  EntryMask mask = EntryMask::All;
};

struct Inequality {
  std::string label;
  AffineMatrix expr;  // >= 0 on masked entries
  EntryMask mask = EntryMask::All;
};

struct LmiConstraint {
  std::string label;
  AffineMatrix expr;  // symmetric, PSD
};

/// expr < 0, decided by maximising t subject to expr + t I <= 0, t <= cap.
struct StrictLmi {
  std::string label;
  AffineMatrix expr;
  double margin_cap = 1.0;
};

struct Objective {
  AffineMatrix expr;  // 1x1
  bool minimize = true;
};

/// Block-structured conic feasibility instance over named matrix variables.
///
/// Two shapes are solvable: problems over cone variables (Psd, Nonneg, Z0)
/// with equalities, which map onto the primal standard form, and problems
/// over free variables with LMIs, inequalities and an optional strict LMI,
/// which map onto the dual standard form. Mixing free and cone variables is
/// rejected at compile time.
class SdpFeasibilityProblem {
 public:
  AffineMatrix add_psd(const std::string& name, Eigen::Index dim);
  AffineMatrix add_free_sym(const std::string& name, Eigen::Index dim);
  AffineMatrix add_free_mat(const std::string& name, Eigen::Index rows, Eigen::Index cols);
  AffineMatrix add_nonneg(const std::string& name, Eigen::Index len);
  AffineMatrix add_z0(const std::string& name, Eigen::Index dim);

  void add_equality(std::string label, AffineMatrix expr, EntryMask mask = EntryMask::All);
  void add_inequality(std::string label, AffineMatrix expr, EntryMask mask = EntryMask::All);
  void add_lmi(std::string label, AffineMatrix expr);
  void set_strict_lmi(std::string label, AffineMatrix expr, double margin_cap = 1.0);
  /// expr == value; pins the scale of a homogeneous problem.
  void set_normalization(std::string label, AffineMatrix expr, double value);
  void set_objective(AffineMatrix expr, bool minimize = true);
  void clear_objective() { objective_.reset(); }

  [[nodiscard]] const std::vector<VariableDecl>& variables() const noexcept { return vars_; }
  [[nodiscard]] const VariableDecl& variable(const std::string& name) const;
  [[nodiscard]] bool has_variable(const std::string& name) const;
  [[nodiscard]] AffineMatrix var(const std::string& name) const;
  [[nodiscard]] int scalar_count() const noexcept { return scalars_; }

  [[nodiscard]] const std::vector<Equality>& equalities() const noexcept { return equalities_; }
  [[nodiscard]] const std::vector<Inequality>& inequalities() const noexcept { return inequalities_; }
  [[nodiscard]] const std::vector<LmiConstraint>& lmis() const noexcept { return lmis_; }
  [[nodiscard]] const std::optional<StrictLmi>& strict_lmi() const noexcept { return strict_; }
  [[nodiscard]] const std::optional<Equality>& normalization() const noexcept { return normalization_; }
  [[nodiscard]] const std::optional<Objective>& objective() const noexcept { return objective_; }

  [[nodiscard]] const Equality& equality(const std::string& label) const;

  /// True when every variable is a cone variable (primal standard form).
  [[nodiscard]] bool is_cone_form() const;

  /// Scalar vector from named matrix values; missing variables stay zero.
  [[nodiscard]] Vector pack(const std::map<std::string, Matrix>& values) const;
  [[nodiscard]] Matrix value_of(const std::string& name, const Vector& scalars) const;
  [[nodiscard]] std::map<std::string, Matrix> unpack(const Vector& scalars) const;

  /// Plain-text listing of variables and constraints for external cross-checks.
  [[nodiscard]] std::string dump() const;

 private:
  AffineMatrix declare(const std::string& name, VarKind kind, Eigen::Index rows, Eigen::Index cols);

  std::vector<VariableDecl> vars_;
  int scalars_ = 0;
  std::vector<Equality> equalities_;
  std::vector<Inequality> inequalities_;
  std::vector<LmiConstraint> lmis_;
  std::optional<StrictLmi> strict_;
  std::optional<Equality> normalization_;
  std::optional<Objective> objective_;
};

/// Raw-constraint residuals of an assignment, computed from the problem's
/// expressions only (independent of how a solver represented them).
struct Residuals {
  double equality = 0.0;        // max |masked entry| over equalities and normalization
  double equality_scale = 0.0;  // max |constant| over the same entries
  double cone = 0.0;            // max(0, -lambda_min) over Psd vars, max(0, -s) over nonneg scalars
  double inequality = 0.0;      // max(0, -entry) over inequalities
  double lmi = 0.0;             // max(0, -lambda_min) over LMIs
  std::optional<double> margin; // -lambda_max(strict expr) when a strict LMI is present
};

Residuals evaluate_residuals(const SdpFeasibilityProblem& problem, const Vector& scalars);

/// Iterates the masked (i, j) positions of an r x c matrix.
template <typename F>
void for_each_masked(Eigen::Index rows, Eigen::Index cols, EntryMask mask, F&& f) {
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) {
      const bool keep = mask == EntryMask::All || (mask == EntryMask::Upper && i <= j) ||
                        (mask == EntryMask::Diagonal && i == j) ||
                        (mask == EntryMask::OffDiagonal && i != j);
      if (keep) f(i, j);
    }
  }
}

}  // namespace lure::sdp
