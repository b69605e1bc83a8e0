#include "lure/conic_problem.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "lure/error.hpp"

namespace lure::sdp {

const char* to_string(VarKind k) noexcept {
  switch (k) {
    case VarKind::Psd: return "psd";
    case VarKind::FreeSym: return "free_sym";
    case VarKind::FreeMat: return "free_mat";
    case VarKind::Nonneg: return "nonneg";
    case VarKind::Z0: return "z0";
  }
  return "?";
}

namespace {

bool symmetric_kind(VarKind k) { return k == VarKind::Psd || k == VarKind::FreeSym; }

// Visits (i, j, scalar) for every scalar of a declared variable, in the
// same order used to number them.
template <typename F>
void for_each_scalar(const VariableDecl& v, F&& f) {
  int k = v.first;
  switch (v.kind) {
    case VarKind::Psd:
    case VarKind::FreeSym:
      for (Eigen::Index j = 0; j < v.cols; ++j)
        for (Eigen::Index i = 0; i <= j; ++i) f(i, j, k++);
      break;
    case VarKind::FreeMat:
    case VarKind::Nonneg:
      for (Eigen::Index j = 0; j < v.cols; ++j)
        for (Eigen::Index i = 0; i < v.rows; ++i) f(i, j, k++);
      break;
    case VarKind::Z0:
      for (Eigen::Index j = 0; j < v.cols; ++j)
        for (Eigen::Index i = 0; i < v.rows; ++i)
          if (i != j) f(i, j, k++);
      break;
  }
}

int scalar_count_for(VarKind kind, Eigen::Index rows, Eigen::Index cols) {
  switch (kind) {
    case VarKind::Psd:
    case VarKind::FreeSym: return static_cast<int>(rows * (rows + 1) / 2);
    case VarKind::FreeMat:
    case VarKind::Nonneg: return static_cast<int>(rows * cols);
    case VarKind::Z0: return static_cast<int>(rows * (rows - 1));
  }
  return 0;
}

double min_eig(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.transpose()), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

}  // namespace

AffineMatrix SdpFeasibilityProblem::declare(const std::string& name, VarKind kind,
                                            Eigen::Index rows, Eigen::Index cols) {
  if (has_variable(name)) throw Error(ErrorKind::Structural, "duplicate variable '" + name + "'");
  if (rows < 0 || cols < 0) throw Error(ErrorKind::Structural, "negative variable dimension");
  VariableDecl v{name, kind, rows, cols, scalars_, scalar_count_for(kind, rows, cols)};
  scalars_ += v.count;
  vars_.push_back(v);
  return var(name);
}

AffineMatrix SdpFeasibilityProblem::add_psd(const std::string& name, Eigen::Index dim) {
  return declare(name, VarKind::Psd, dim, dim);
}
AffineMatrix SdpFeasibilityProblem::add_free_sym(const std::string& name, Eigen::Index dim) {
  return declare(name, VarKind::FreeSym, dim, dim);
}
AffineMatrix SdpFeasibilityProblem::add_free_mat(const std::string& name, Eigen::Index rows,
                                                 Eigen::Index cols) {
  return declare(name, VarKind::FreeMat, rows, cols);
}
AffineMatrix SdpFeasibilityProblem::add_nonneg(const std::string& name, Eigen::Index len) {
  return declare(name, VarKind::Nonneg, len, 1);
}
AffineMatrix SdpFeasibilityProblem::add_z0(const std::string& name, Eigen::Index dim) {
  return declare(name, VarKind::Z0, dim, dim);
}

const VariableDecl& SdpFeasibilityProblem::variable(const std::string& name) const {
  for (const auto& v : vars_)
    if (v.name == name) return v;
  throw Error(ErrorKind::Structural, "unknown variable '" + name + "'");
}

bool SdpFeasibilityProblem::has_variable(const std::string& name) const {
  return std::any_of(vars_.begin(), vars_.end(), [&](const auto& v) { return v.name == name; });
}

AffineMatrix SdpFeasibilityProblem::var(const std::string& name) const {
  const VariableDecl& v = variable(name);
  AffineMatrix out(v.rows, v.cols);
  for_each_scalar(v, [&](Eigen::Index i, Eigen::Index j, int k) {
    if (v.kind == VarKind::Z0) {
      out.add_to_entry(i, j, k, -1.0);
    } else {
      out.add_to_entry(i, j, k, 1.0);
      if (symmetric_kind(v.kind) && i != j) out.add_to_entry(j, i, k, 1.0);
    }
  });
  return out;
}

void SdpFeasibilityProblem::add_equality(std::string label, AffineMatrix expr, EntryMask mask) {
  equalities_.push_back({std::move(label), std::move(expr), mask});
}

void SdpFeasibilityProblem::add_inequality(std::string label, AffineMatrix expr, EntryMask mask) {
  inequalities_.push_back({std::move(label), std::move(expr), mask});
}

void SdpFeasibilityProblem::add_lmi(std::string label, AffineMatrix expr) {
  if (expr.rows() != expr.cols()) throw Error(ErrorKind::Structural, "LMI expression is not square");
  lmis_.push_back({std::move(label), std::move(expr)});
}

void SdpFeasibilityProblem::set_strict_lmi(std::string label, AffineMatrix expr, double margin_cap) {
  if (expr.rows() != expr.cols()) throw Error(ErrorKind::Structural, "LMI expression is not square");
  strict_ = StrictLmi{std::move(label), std::move(expr), margin_cap};
}

void SdpFeasibilityProblem::set_normalization(std::string label, AffineMatrix expr, double value) {
  if (expr.rows() != 1 || expr.cols() != 1) {
    throw Error(ErrorKind::Structural, "normalization must be scalar");
  }
  expr -= AffineMatrix::constant(Matrix::Constant(1, 1, value));
  normalization_ = Equality{std::move(label), std::move(expr), EntryMask::All};
}

void SdpFeasibilityProblem::set_objective(AffineMatrix expr, bool minimize) {
  if (expr.rows() != 1 || expr.cols() != 1) throw Error(ErrorKind::Structural, "objective must be scalar");
  objective_ = Objective{std::move(expr), minimize};
}

const Equality& SdpFeasibilityProblem::equality(const std::string& label) const {
  for (const auto& e : equalities_)
    if (e.label == label) return e;
  throw Error(ErrorKind::Structural, "unknown equality '" + label + "'");
}

bool SdpFeasibilityProblem::is_cone_form() const {
  return std::all_of(vars_.begin(), vars_.end(), [](const auto& v) {
    return v.kind == VarKind::Psd || v.kind == VarKind::Nonneg || v.kind == VarKind::Z0;
  });
}

Vector SdpFeasibilityProblem::pack(const std::map<std::string, Matrix>& values) const {
  Vector s = Vector::Zero(scalars_);
  for (const auto& [name, value] : values) {
    const VariableDecl& v = variable(name);
    if (value.rows() != v.rows || value.cols() != v.cols) {
      throw Error(ErrorKind::Structural, "pack: shape mismatch for '" + name + "'");
    }
    for_each_scalar(v, [&](Eigen::Index i, Eigen::Index j, int k) {
      s(k) = v.kind == VarKind::Z0 ? -value(i, j) : value(i, j);
    });
  }
  return s;
}

Matrix SdpFeasibilityProblem::value_of(const std::string& name, const Vector& scalars) const {
  const VariableDecl& v = variable(name);
  Matrix out = Matrix::Zero(v.rows, v.cols);
  for_each_scalar(v, [&](Eigen::Index i, Eigen::Index j, int k) {
    if (v.kind == VarKind::Z0) {
      out(i, j) = -scalars(k);
    } else {
      out(i, j) = scalars(k);
      if (symmetric_kind(v.kind)) out(j, i) = scalars(k);
    }
  });
  return out;
}

std::map<std::string, Matrix> SdpFeasibilityProblem::unpack(const Vector& scalars) const {
  std::map<std::string, Matrix> out;
  for (const auto& v : vars_) out.emplace(v.name, value_of(v.name, scalars));
  return out;
}

std::string SdpFeasibilityProblem::dump() const {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "variables " << vars_.size() << " scalars " << scalars_ << "\n";
  for (const auto& v : vars_) {
    os << "  var " << v.name << " " << to_string(v.kind) << " " << v.rows << "x" << v.cols
       << " scalars [" << v.first << ", " << v.first + v.count << ")\n";
  }
  auto print_expr = [&](const AffineMatrix& e, EntryMask mask) {
    for_each_masked(e.rows(), e.cols(), mask, [&](Eigen::Index i, Eigen::Index j) {
      os << "    (" << i << "," << j << ") " << e.constant_part()(i, j);
      for (const auto& [k, c] : e.terms())
        if (c(i, j) != 0.0) os << " + " << c(i, j) << "*s" << k;
      os << "\n";
    });
  };
  for (const auto& e : equalities_) {
    os << "  eq " << e.label << " " << e.expr.rows() << "x" << e.expr.cols() << " == 0\n";
    print_expr(e.expr, e.mask);
  }
  if (normalization_) {
    os << "  normalization " << normalization_->label << " == 0\n";
    print_expr(normalization_->expr, EntryMask::All);
  }
  for (const auto& e : inequalities_) {
    os << "  ineq " << e.label << " " << e.expr.rows() << "x" << e.expr.cols() << " >= 0\n";
    print_expr(e.expr, e.mask);
  }
  for (const auto& e : lmis_) {
    os << "  lmi " << e.label << " " << e.expr.rows() << "x" << e.expr.cols() << " psd\n";
    print_expr(e.expr, EntryMask::Upper);
  }
  if (strict_) {
    os << "  strict " << strict_->label << " " << strict_->expr.rows() << "x"
       << strict_->expr.cols() << " < 0 (margin cap " << strict_->margin_cap << ")\n";
    print_expr(strict_->expr, EntryMask::Upper);
  }
  if (objective_) {
    os << "  objective " << (objective_->minimize ? "min" : "max") << "\n";
    print_expr(objective_->expr, EntryMask::All);
  }
  return os.str();
}

Residuals evaluate_residuals(const SdpFeasibilityProblem& problem, const Vector& scalars) {
  Residuals r;
  auto check_eq = [&](const Equality& e) {
    const Matrix value = e.expr.evaluate(scalars);
    const Matrix& c = e.expr.constant_part();
    for_each_masked(value.rows(), value.cols(), e.mask, [&](Eigen::Index i, Eigen::Index j) {
      r.equality = std::max(r.equality, std::abs(value(i, j)));
      r.equality_scale = std::max(r.equality_scale, std::abs(c(i, j)));
    });
  };
  for (const auto& e : problem.equalities()) check_eq(e);
  if (problem.normalization()) check_eq(*problem.normalization());

  for (const auto& v : problem.variables()) {
    if (v.kind == VarKind::Psd) {
      r.cone = std::max(r.cone, -min_eig(problem.value_of(v.name, scalars)));
    } else if (v.kind == VarKind::Nonneg || v.kind == VarKind::Z0) {
      for (int k = v.first; k < v.first + v.count; ++k) r.cone = std::max(r.cone, -scalars(k));
    }
  }
  for (const auto& e : problem.inequalities()) {
    const Matrix value = e.expr.evaluate(scalars);
    for_each_masked(value.rows(), value.cols(), e.mask, [&](Eigen::Index i, Eigen::Index j) {
      r.inequality = std::max(r.inequality, -value(i, j));
    });
  }
  for (const auto& e : problem.lmis()) {
    r.lmi = std::max(r.lmi, -min_eig(e.expr.evaluate(scalars)));
  }
  if (problem.strict_lmi()) {
    r.margin = min_eig(-problem.strict_lmi()->expr.evaluate(scalars));
  }
  return r;
}

}  // namespace lure::sdp
