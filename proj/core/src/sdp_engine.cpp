#include "lure/sdp_engine.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "lure/error.hpp"

namespace lure::sdp {

const char* to_string(SolveStatus s) noexcept {
  switch (s) {
    case SolveStatus::Feasible: return "feasible";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::NumericalLimit: return "numerical_limit";
  }
  return "?";
}

const Matrix& SolveResult::at(const std::string& name) const {
  const auto it = assignment.find(name);
  if (it == assignment.end()) throw Error(ErrorKind::Structural, "no variable '" + name + "' in result");
  return it->second;
}

bool within_tolerance(const Residuals& r, const EngineSettings& s) {
  return r.equality <= s.equality_tol * (1.0 + r.equality_scale) && r.cone <= s.cone_tol &&
         r.inequality <= s.cone_tol && r.lmi <= s.cone_tol;
}

namespace {

Matrix sym(const Matrix& m) { return 0.5 * (m + m.transpose()); }

// Where a scalar of a cone-form problem lives inside the primal X.
struct Slot {
  int block = -1;
  Eigen::Index i = 0;
  Eigen::Index j = 0;
};

class ConeLowering {
 public:
  explicit ConeLowering(const SdpFeasibilityProblem& p) : p_(p) {
    slots_.resize(static_cast<std::size_t>(p.scalar_count()));
    Eigen::Index lp_size = 0;
    for (const auto& v : p.variables()) {
      if (v.kind == VarKind::Psd) {
        const int b = static_cast<int>(form_.blocks.size());
        form_.blocks.push_back({true, v.rows});
        int k = v.first;
        for (Eigen::Index j = 0; j < v.cols; ++j)
          for (Eigen::Index i = 0; i <= j; ++i) slots_[k++] = {b, i, j};
      } else {
        for (int k = v.first; k < v.first + v.count; ++k) slots_[k] = {-2, lp_size++, 0};
      }
    }
    // Slack scalars for inequalities and LMIs are appended after the variables.
    for (const auto& e : p.inequalities()) {
      for_each_masked(e.expr.rows(), e.expr.cols(), e.mask,
                      [&](Eigen::Index, Eigen::Index) { ++lp_size; });
    }
    if (lp_size > 0) {
      lp_block_ = static_cast<int>(form_.blocks.size());
      form_.blocks.push_back({false, lp_size});
    }
    for (const auto& l : p.lmis()) {
      lmi_blocks_.push_back(static_cast<int>(form_.blocks.size()));
      form_.blocks.push_back({true, l.expr.rows()});
    }
    for (auto& s : slots_)
      if (s.block == -2) s.block = lp_block_;
    lp_next_ = lp_size;
    for (const auto& e : p.inequalities())
      for_each_masked(e.expr.rows(), e.expr.cols(), e.mask, [&](Eigen::Index, Eigen::Index) { --lp_next_; });
  }

  StandardForm run() {
    for (const auto& e : p_.equalities()) add_rows(e.expr, e.mask);
    if (p_.normalization()) add_rows(p_.normalization()->expr, EntryMask::All);
    for (const auto& e : p_.inequalities()) {
      for_each_masked(e.expr.rows(), e.expr.cols(), e.mask, [&](Eigen::Index i, Eigen::Index j) {
        BlockVec row = form_.zeros();
        if (fill_row(e.expr, i, j, row)) {
          row[lp_block_](lp_next_) -= 1.0;
          push(row, -e.expr.constant_part()(i, j));
        }
        ++lp_next_;
      });
    }
    for (std::size_t l = 0; l < p_.lmis().size(); ++l) {
      const AffineMatrix& e = p_.lmis()[l].expr;
      const int b = lmi_blocks_[l];
      for_each_masked(e.rows(), e.cols(), EntryMask::Upper, [&](Eigen::Index i, Eigen::Index j) {
        BlockVec row = form_.zeros();
        fill_row(e, i, j, row);
        const Eigen::Index ii = std::min(i, j), jj = std::max(i, j);
        add_entry(row[b], true, ii, jj, -1.0);
        push(row, -e.constant_part()(i, j));
      });
    }
    form_.C = form_.zeros();
    if (p_.objective()) {
      const double sign = p_.objective()->minimize ? 1.0 : -1.0;
      for (const auto& [k, c] : p_.objective()->expr.terms()) place(form_.C, k, sign * c(0, 0));
    }
    form_.b = Vector::Map(rhs_.data(), static_cast<Eigen::Index>(rhs_.size()));
    return std::move(form_);
  }

  [[nodiscard]] Vector scalars_from(const BlockVec& x) const {
    Vector s(p_.scalar_count());
    for (int k = 0; k < p_.scalar_count(); ++k) {
      const Slot& slot = slots_[k];
      s(k) = x[slot.block](slot.i, slot.j);
    }
    return s;
  }

 private:
  static void add_entry(Matrix& blk, bool psd, Eigen::Index i, Eigen::Index j, double c) {
    if (!psd) {
      blk(i) += c;
    } else if (i == j) {
      blk(i, i) += c;
    } else {
      blk(i, j) += 0.5 * c;
      blk(j, i) += 0.5 * c;
    }
  }

  void place(BlockVec& row, int k, double c) const {
    const Slot& s = slots_[k];
    add_entry(row[s.block], form_.blocks[s.block].psd, s.i, s.j, c);
  }

  bool fill_row(const AffineMatrix& e, Eigen::Index i, Eigen::Index j, BlockVec& row) const {
    bool any = false;
    for (const auto& [k, c] : e.terms()) {
      if (c(i, j) == 0.0) continue;
      place(row, k, c(i, j));
      any = true;
    }
    return any;
  }

  void add_rows(const AffineMatrix& e, EntryMask mask) {
    for_each_masked(e.rows(), e.cols(), mask, [&](Eigen::Index i, Eigen::Index j) {
      BlockVec row = form_.zeros();
      const bool any = fill_row(e, i, j, row);
      const double rhs = -e.constant_part()(i, j);
      if (!any && rhs == 0.0) return;  // 0 == 0
      push(row, rhs);
    });
  }

  void push(BlockVec row, double rhs) {
    form_.A.push_back(std::move(row));
    rhs_.push_back(rhs);
  }

  const SdpFeasibilityProblem& p_;
  StandardForm form_;
  std::vector<Slot> slots_;
  std::vector<int> lmi_blocks_;
  int lp_block_ = -1;
  Eigen::Index lp_next_ = 0;
  std::vector<double> rhs_;
};

// Free-variable problems: y = (scalars, t); every constraint becomes a slack
// block of Z = C - sum y_k A_k.
Compiled lower_free(const SdpFeasibilityProblem& p) {
  if (!p.equalities().empty() || p.normalization()) {
    throw Error(ErrorKind::Structural, "equalities over free variables are not supported");
  }
  Compiled out;
  out.dual_form = true;
  const int n = p.scalar_count();

  // Scalars no constraint touches (e.g. the unused diagonal of a hollow
  // matrix variable) are pinned to zero instead of entering y.
  std::vector<bool> used(static_cast<std::size_t>(n), false);
  auto mark = [&](const AffineMatrix& e) {
    for (const auto& [k, c] : e.terms())
      if (!c.isZero(0.0)) used[k] = true;
  };
  for (const auto& l : p.lmis()) mark(l.expr);
  for (const auto& e : p.inequalities()) mark(e.expr);
  if (p.strict_lmi()) mark(p.strict_lmi()->expr);
  if (p.objective()) mark(p.objective()->expr);
  out.y_index.assign(static_cast<std::size_t>(n), -1);
  int ny = 0;
  for (int k = 0; k < n; ++k)
    if (used[k]) out.y_index[k] = ny++;

  const bool strict = p.strict_lmi().has_value();
  if (strict) out.margin_index = ny++;
  const int t = out.margin_index;

  StandardForm& f = out.form;
  struct Piece {
    Matrix c;
    std::vector<Matrix> a;
  };
  std::vector<Piece> pieces;

  auto lmi_piece = [&](const AffineMatrix& e, double sign, bool with_t) {
    Piece pc;
    const Eigen::Index s = e.rows();
    pc.c = sym(sign * e.constant_part());
    pc.a.assign(static_cast<std::size_t>(ny), Matrix::Zero(s, s));
    for (const auto& [k, c] : e.terms())
      if (out.y_index[k] >= 0) pc.a[out.y_index[k]] = sym(-sign * c);
    if (with_t) pc.a[t] = Matrix::Identity(s, s);
    f.blocks.push_back({true, s});
    pieces.push_back(std::move(pc));
  };
  for (const auto& l : p.lmis()) lmi_piece(l.expr, 1.0, false);
  if (strict) lmi_piece(p.strict_lmi()->expr, -1.0, true);

  // LP block: inequality entries then t <= cap.
  std::vector<double> lp_c;
  std::vector<std::vector<std::pair<int, double>>> lp_a;
  for (const auto& e : p.inequalities()) {
    for_each_masked(e.expr.rows(), e.expr.cols(), e.mask, [&](Eigen::Index i, Eigen::Index j) {
      std::vector<std::pair<int, double>> row;
      for (const auto& [k, c] : e.expr.terms())
        if (c(i, j) != 0.0) row.emplace_back(out.y_index[k], -c(i, j));
      if (row.empty()) {
        if (e.expr.constant_part()(i, j) < 0.0) {
          throw Error(ErrorKind::Structural, "inequality '" + e.label + "' is constant and violated");
        }
        return;
      }
      lp_c.push_back(e.expr.constant_part()(i, j));
      lp_a.push_back(std::move(row));
    });
  }
  if (strict) {
    lp_c.push_back(p.strict_lmi()->margin_cap);
    lp_a.push_back({{t, 1.0}});
  }
  const bool has_lp = !lp_c.empty();
  if (has_lp) f.blocks.push_back({false, static_cast<Eigen::Index>(lp_c.size())});
  if (f.blocks.empty()) throw Error(ErrorKind::Structural, "problem has no constraints");

  f.C.clear();
  for (const auto& pc : pieces) f.C.push_back(pc.c);
  if (has_lp) f.C.push_back(Vector::Map(lp_c.data(), static_cast<Eigen::Index>(lp_c.size())));

  f.A.assign(static_cast<std::size_t>(ny), BlockVec{});
  for (int k = 0; k < ny; ++k) {
    BlockVec& ak = f.A[k];
    for (const auto& pc : pieces) ak.push_back(pc.a[k]);
    if (has_lp) ak.push_back(Matrix::Zero(static_cast<Eigen::Index>(lp_c.size()), 1));
  }
  if (has_lp) {
    const std::size_t lb = f.blocks.size() - 1;
    for (std::size_t r = 0; r < lp_a.size(); ++r)
      for (const auto& [k, c] : lp_a[r]) f.A[k][lb](static_cast<Eigen::Index>(r)) += c;
  }

  f.b = Vector::Zero(ny);
  if (p.objective()) {
    const double sign = p.objective()->minimize ? -1.0 : 1.0;
    for (const auto& [k, c] : p.objective()->expr.terms())
      if (out.y_index[k] >= 0) f.b(out.y_index[k]) += sign * c(0, 0);
  }
  if (strict) f.b(t) = 1.0;
  return out;
}

IpmSettings ipm_settings(const EngineSettings& s) {
  IpmSettings out;
  out.max_iterations = s.max_iterations;
  out.gap_tol = s.gap_tol;
  out.feas_tol = s.feas_tol;
  out.trace = s.trace;
  return out;
}

double eig_ratio(const Matrix& h) {
  const auto es = linalg::sym_eig(linalg::SymMatrix::from(h));
  if (es.values.size() < 2) return 0.0;
  const double l1 = es.values(0);
  if (l1 <= 0.0) return 1.0;
  return std::max(0.0, es.values(1)) / l1;
}

}  // namespace

Compiled compile(const SdpFeasibilityProblem& problem) {
  const bool has_free = std::any_of(problem.variables().begin(), problem.variables().end(),
                                    [](const auto& v) {
                                      return v.kind == VarKind::FreeSym || v.kind == VarKind::FreeMat;
                                    });
  if (problem.is_cone_form()) {
    if (problem.strict_lmi()) throw Error(ErrorKind::Structural, "strict LMI over cone variables");
    Compiled out;
    out.form = ConeLowering(problem).run();
    return out;
  }
  if (has_free && std::any_of(problem.variables().begin(), problem.variables().end(), [](const auto& v) {
        return v.kind != VarKind::FreeSym && v.kind != VarKind::FreeMat;
      })) {
    throw Error(ErrorKind::Structural, "mixing free and cone variables is not supported");
  }
  return lower_free(problem);
}

SolveResult solve(const SdpFeasibilityProblem& problem, const EngineSettings& settings) {
  const Compiled c = compile(problem);
  const IpmResult ipm = solve_standard_form(c.form, ipm_settings(settings));

  SolveResult out;
  out.ipm_outcome = ipm.outcome;
  out.iterations = ipm.iterations;
  if (c.dual_form) {
    out.scalars = Vector::Zero(problem.scalar_count());
    for (int k = 0; k < problem.scalar_count(); ++k)
      if (c.y_index[k] >= 0) out.scalars(k) = ipm.y(c.y_index[k]);
  } else {
    out.scalars = ConeLowering(problem).scalars_from(ipm.X);
  }
  out.assignment = problem.unpack(out.scalars);
  out.residuals = evaluate_residuals(problem, out.scalars);
  out.margin = out.residuals.margin;
  if (out.margin && c.margin_index >= 0) {
    // t* is capped by the assembly; the raw eigenvalue may exceed the cap
    out.margin = std::min(*out.margin, ipm.y(c.margin_index));
  }

  const bool certified_infeasible = c.dual_form ? ipm.outcome == IpmOutcome::DualInfeasible
                                                : ipm.outcome == IpmOutcome::PrimalInfeasible;
  if (certified_infeasible) {
    out.status = SolveStatus::Infeasible;
  } else if (within_tolerance(out.residuals, settings) && out.scalars.allFinite()) {
    out.status = SolveStatus::Feasible;
  } else {
    out.status = SolveStatus::NumericalLimit;
  }
  return out;
}

SolveResult reduce_rank(const SdpFeasibilityProblem& problem, const SolveResult& warm,
                        const EngineSettings& settings, const std::string& psd_var) {
  if (warm.status != SolveStatus::Feasible) {
    throw Error(ErrorKind::Structural, "rank reduction needs a feasible warm start");
  }
  const VariableDecl& decl = problem.variable(psd_var);
  if (decl.kind != VarKind::Psd) throw Error(ErrorKind::Structural, "'" + psd_var + "' is not PSD");

  SolveResult best = warm;
  double best_ratio = eig_ratio(warm.at(psd_var));
  std::vector<double> trail{best_ratio};
  int rounds = 0;
  SdpFeasibilityProblem work = problem;
  const AffineMatrix h = problem.var(psd_var);
  Matrix current = warm.at(psd_var);

  while (best_ratio > settings.rank_tol && rounds < settings.max_rank_rounds) {
    const auto es = linalg::sym_eig(linalg::SymMatrix::from(current));
    const Eigen::Index d = es.vectors.rows();
    const Matrix rest = es.vectors.rightCols(d - 1);
    Matrix w = rest * rest.transpose();
    if (rounds == 0 && settings.seed != 0) {
      // Deterministic tilt of the first weight, for exploring other rank-1 faces.
      std::mt19937_64 rng(settings.seed);
      std::normal_distribution<double> normal;
      Matrix g(d, d);
      for (Eigen::Index j = 0; j < d; ++j)
        for (Eigen::Index i = 0; i < d; ++i) g(i, j) = normal(rng);
      const Matrix gg = g * g.transpose();
      w += 0.1 * gg / gg.norm();
    }
    work.set_objective((w * h).trace());
    ++rounds;
    SolveResult r = solve(work, settings);
    if (r.status != SolveStatus::Feasible) break;
    const double ratio = eig_ratio(r.at(psd_var));
    trail.push_back(ratio);
    current = r.at(psd_var);
    if (ratio < best_ratio) {
      best_ratio = ratio;
      best = std::move(r);
    }
  }
  best.rank_trail = std::move(trail);
  best.rank_rounds = rounds;
  if (settings.polish && best_ratio <= settings.rank_tol) best = polish_rank_one(problem, best, settings, psd_var);
  return best;
}

SolveResult polish_rank_one(const SdpFeasibilityProblem& problem, const SolveResult& result,
                            const EngineSettings& settings, const std::string& psd_var) {
  if (!problem.is_cone_form()) return result;
  const VariableDecl* psd = nullptr;
  for (const auto& v : problem.variables()) {
    if (v.kind != VarKind::Psd) continue;
    if (v.name != psd_var || psd) return result;  // only a single PSD variable is handled
    psd = &v;
  }
  if (!psd) return result;

  const Eigen::Index d = psd->rows;
  const auto es = linalg::sym_eig(linalg::SymMatrix::from(result.at(psd_var)));
  if (es.values(0) <= 0.0) return result;

  // Unknowns: h (d entries), then the LP scalars that are not at their bound.
  std::vector<std::pair<Eigen::Index, Eigen::Index>> psd_pos(static_cast<std::size_t>(psd->count));
  {
    int k = 0;
    for (Eigen::Index j = 0; j < d; ++j)
      for (Eigen::Index i = 0; i <= j; ++i) psd_pos[k++] = {i, j};
  }
  double lp_scale = 1.0;
  for (const auto& v : problem.variables())
    if (v.kind != VarKind::Psd)
      for (int k = v.first; k < v.first + v.count; ++k) lp_scale = std::max(lp_scale, result.scalars(k));
  std::vector<int> unknown(static_cast<std::size_t>(problem.scalar_count()), -1);
  int nu = static_cast<int>(d);
  for (const auto& v : problem.variables()) {
    if (v.kind == VarKind::Psd) continue;
    for (int k = v.first; k < v.first + v.count; ++k)
      if (result.scalars(k) > settings.active_tol * lp_scale) unknown[k] = nu++;
  }

  struct Row {
    const AffineMatrix* expr;
    Eigen::Index i, j;
  };
  std::vector<Row> rows;
  for (const auto& e : problem.equalities())
    for_each_masked(e.expr.rows(), e.expr.cols(), e.mask,
                    [&](Eigen::Index i, Eigen::Index j) { rows.push_back({&e.expr, i, j}); });
  if (problem.normalization()) rows.push_back({&problem.normalization()->expr, 0, 0});
  for (const auto& e : problem.inequalities()) {
    const Matrix value = e.expr.evaluate(result.scalars);
    for_each_masked(e.expr.rows(), e.expr.cols(), e.mask, [&](Eigen::Index i, Eigen::Index j) {
      if (value(i, j) <= settings.active_tol * lp_scale) rows.push_back({&e.expr, i, j});
    });
  }

  Vector u = Vector::Zero(nu);
  u.head(d) = std::sqrt(es.values(0)) * es.vectors.col(0);
  for (int k = 0; k < problem.scalar_count(); ++k)
    if (unknown[k] >= 0) u(unknown[k]) = result.scalars(k);

  auto scalars_of = [&](const Vector& x) {
    Vector sc = Vector::Zero(problem.scalar_count());
    for (int k = 0; k < psd->count; ++k) {
      const auto [i, j] = psd_pos[k];
      sc(psd->first + k) = x(i) * x(j);
    }
    for (int k = 0; k < problem.scalar_count(); ++k)
      if (unknown[k] >= 0) sc(k) = x(unknown[k]);
    return sc;
  };
  auto residual = [&](const Vector& x) {
    const Vector sc = scalars_of(x);
    Vector r(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t q = 0; q < rows.size(); ++q) {
      const Row& row = rows[q];
      double v = row.expr->constant_part()(row.i, row.j);
      for (const auto& [k, c] : row.expr->terms()) v += c(row.i, row.j) * sc(k);
      r(static_cast<Eigen::Index>(q)) = v;
    }
    return r;
  };
  auto jacobian = [&](const Vector& x) {
    Matrix jac = Matrix::Zero(static_cast<Eigen::Index>(rows.size()), nu);
    for (std::size_t q = 0; q < rows.size(); ++q) {
      const Row& row = rows[q];
      const auto qi = static_cast<Eigen::Index>(q);
      for (const auto& [k, c] : row.expr->terms()) {
        const double coeff = c(row.i, row.j);
        if (coeff == 0.0) continue;
        if (k >= psd->first && k < psd->first + psd->count) {
          const auto [a, b] = psd_pos[k - psd->first];
          jac(qi, a) += coeff * x(b);
          jac(qi, b) += coeff * x(a);
        } else if (unknown[k] >= 0) {
          jac(qi, unknown[k]) += coeff;
        }
      }
    }
    return jac;
  };

  Vector r = residual(u);
  double rnorm = r.norm();
  for (int it = 0; it < 30 && rnorm > 0.0; ++it) {
    const Vector step = jacobian(u).completeOrthogonalDecomposition().solve(-r);
    double alpha = 1.0;
    bool improved = false;
    for (int ls = 0; ls < 20; ++ls, alpha *= 0.5) {
      const Vector trial = u + alpha * step;
      const Vector rt = residual(trial);
      if (rt.norm() < rnorm) {
        u = trial;
        r = rt;
        rnorm = rt.norm();
        improved = true;
        break;
      }
    }
    if (!improved) break;
  }

  SolveResult out = result;
  out.scalars = scalars_of(u);
  out.assignment = problem.unpack(out.scalars);
  out.residuals = evaluate_residuals(problem, out.scalars);
  const bool no_worse = out.residuals.equality <= result.residuals.equality &&
                        out.residuals.inequality <= std::max(result.residuals.inequality, 0.0) &&
                        out.residuals.cone <= settings.cone_tol;
  if (!no_worse || !within_tolerance(out.residuals, settings)) return result;
  out.polished = true;
  return out;
}

}  // namespace lure::sdp
