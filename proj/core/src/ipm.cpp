#include "lure/ipm.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "lure/error.hpp"

namespace lure::sdp {

const char* to_string(IpmOutcome o) noexcept {
  switch (o) {
    case IpmOutcome::Optimal: return "optimal";
    case IpmOutcome::PrimalInfeasible: return "primal_infeasible";
    case IpmOutcome::DualInfeasible: return "dual_infeasible";
    case IpmOutcome::IterationLimit: return "iteration_limit";
    case IpmOutcome::Stalled: return "stalled";
  }
  return "?";
}

BlockVec StandardForm::zeros() const {
  BlockVec out;
  out.reserve(blocks.size());
  for (const auto& b : blocks) out.push_back(b.psd ? Matrix::Zero(b.size, b.size) : Matrix::Zero(b.size, 1));
  return out;
}

double inner(const BlockVec& a, const BlockVec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i].cwiseProduct(b[i]).sum();
  return s;
}

namespace {

double norm(const BlockVec& a) { return std::sqrt(inner(a, a)); }

void axpy(double alpha, const BlockVec& x, BlockVec& y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

Matrix sym(const Matrix& m) { return 0.5 * (m + m.transpose()); }

// Largest alpha in (0, inf] with x + alpha dx still in the cone.
double max_step(const BlockSpec& spec, const Matrix& x, const Matrix& dx) {
  if (!spec.psd) {
    double a = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      if (dx(i) < 0.0) a = std::min(a, -x(i) / dx(i));
    }
    return a;
  }
  Eigen::LLT<Matrix> llt(x);
  Matrix w;
  if (llt.info() == Eigen::Success) {
    const Matrix linv_dx = llt.matrixL().solve(dx);
    w = llt.matrixL().solve(linv_dx.transpose());
  } else {
    Eigen::SelfAdjointEigenSolver<Matrix> es(x);
    const Vector ev = es.eigenvalues().cwiseMax(1e-300);
    const Matrix inv_sqrt = es.eigenvectors() * ev.cwiseSqrt().cwiseInverse().asDiagonal() *
                            es.eigenvectors().transpose();
    w = inv_sqrt * dx * inv_sqrt;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym(w), Eigen::EigenvaluesOnly);
  const double lmin = es.eigenvalues()(0);
  return lmin < 0.0 ? -1.0 / lmin : std::numeric_limits<double>::infinity();
}

class Solver {
 public:
  Solver(const StandardForm& sf, const IpmSettings& settings) : sf_(sf), settings_(settings) {
    const int m = sf.constraints();
    nonzero_.assign(static_cast<std::size_t>(m), std::vector<bool>(sf.blocks.size(), false));
    for (int k = 0; k < m; ++k)
      for (std::size_t b = 0; b < sf.blocks.size(); ++b)
        nonzero_[k][b] = !sf.A[k][b].isZero(0.0);
    for (const auto& b : sf.blocks) cone_dim_ += static_cast<double>(b.size);
    norm_b_ = sf.b.norm();
    norm_c_ = norm(sf.C);
  }

  IpmResult run() {
    initialize();
    IpmResult res;
    Best best;
    int stalls = 0;
    auto finish = [&](IpmOutcome fallback) {
      // Late HKM steps lose accuracy once Z^{-1} is huge; hand back the best iterate seen.
      restore(best, res);
      res.outcome = near_optimal(best.pinf, best.dinf, best.gap) ? IpmOutcome::Optimal : fallback;
      return res;
    };
    for (int iter = 0; iter <= settings_.max_iterations; ++iter) {
      res.iterations = iter;
      const Vector rp = sf_.b - apply_a(X_);
      BlockVec rd = sf_.C;
      axpy(-1.0, Z_, rd);
      axpy(-1.0, apply_at(y_), rd);

      const double pobj = inner(sf_.C, X_);
      const double dobj = sf_.b.dot(y_);
      const double xz = inner(X_, Z_);
      const double mu = xz / cone_dim_;
      const double pinf = rp.norm() / (1.0 + norm_b_);
      const double dinf = norm(rd) / (1.0 + norm_c_);
      const double rel_gap = std::max(std::abs(pobj - dobj), xz) / (1.0 + std::abs(pobj) + std::abs(dobj));
      fill(res, pinf, dinf, rel_gap, pobj, dobj);
      if (settings_.trace) {
        std::fprintf(stderr, "ipm %3d pobj %+.10e dobj %+.10e pinf %.2e dinf %.2e gap %.2e mu %.2e\n", iter,
                     pobj, dobj, pinf, dinf, rel_gap, mu);
      }
      const double merit = std::max({pinf, dinf, rel_gap});
      if (merit < best.merit) best = Best{merit, pinf, dinf, rel_gap, pobj, dobj, iter, X_, y_, Z_};

      if (pinf <= settings_.feas_tol && dinf <= settings_.feas_tol && rel_gap <= settings_.gap_tol) {
        res.outcome = IpmOutcome::Optimal;
        return res;
      }
      if (detect_infeasibility(res, rp, pinf, dinf)) return res;
      if (iter == settings_.max_iterations) break;
      if (iter - best.iter >= kStagnationWindow) return finish(IpmOutcome::Stalled);

      if (!prepare_iteration()) return finish(IpmOutcome::Stalled);

      // Predictor: sigma = 0.
      BlockVec r_pred(sf_.blocks.size());
      for (std::size_t b = 0; b < sf_.blocks.size(); ++b) r_pred[b] = -X_[b];
      Vector dy;
      BlockVec dx, dz;
      if (!direction(rp, rd, r_pred, dy, dx, dz)) return finish(IpmOutcome::Stalled);
      const double ap = std::min(1.0, step_to_boundary(X_, dx));
      const double ad = std::min(1.0, step_to_boundary(Z_, dz));
      BlockVec xa = X_, za = Z_;
      axpy(ap, dx, xa);
      axpy(ad, dz, za);
      const double mu_aff = inner(xa, za) / cone_dim_;
      const double sigma = std::clamp(std::pow(std::max(mu_aff, 0.0) / mu, 3.0), 0.0, 1.0);

      // Corrector with the second-order term of the predictor.
      BlockVec r_corr(sf_.blocks.size());
      for (std::size_t b = 0; b < sf_.blocks.size(); ++b) {
        if (sf_.blocks[b].psd) {
          const Eigen::Index s = sf_.blocks[b].size;
          r_corr[b] = (sigma * mu * Matrix::Identity(s, s) - dx[b] * dz[b]) * zinv_[b] - X_[b];
        } else {
          r_corr[b] = ((sigma * mu - dx[b].array() * dz[b].array()) / Z_[b].array()).matrix() - X_[b];
        }
      }
      if (!direction(rp, rd, r_corr, dy, dx, dz)) return finish(IpmOutcome::Stalled);
      const double gamma = std::clamp(0.9 + 0.09 * std::min(ap, ad), 0.9, settings_.step_fraction);
      const double step_p = std::min(1.0, gamma * step_to_boundary(X_, dx));
      const double step_d = std::min(1.0, gamma * step_to_boundary(Z_, dz));
      axpy(step_p, dx, X_);
      y_ += step_d * dy;
      axpy(step_d, dz, Z_);
      for (std::size_t b = 0; b < sf_.blocks.size(); ++b) {
        if (sf_.blocks[b].psd) {
          X_[b] = sym(X_[b]);
          Z_[b] = sym(Z_[b]);
        }
      }

      stalls = (std::max(step_p, step_d) < 1e-10) ? stalls + 1 : 0;
      if (stalls >= 3) return finish(IpmOutcome::Stalled);
    }
    return finish(IpmOutcome::IterationLimit);
  }

 private:
  static constexpr int kStagnationWindow = 15;

  struct Best {
    double merit = std::numeric_limits<double>::infinity();
    double pinf = 0.0, dinf = 0.0, gap = 0.0, pobj = 0.0, dobj = 0.0;
    int iter = 0;
    BlockVec X;
    Vector y;
    BlockVec Z;
  };

  void restore(const Best& b, IpmResult& res) const {
    res.X = b.X;
    res.y = b.y;
    res.Z = b.Z;
    res.primal_infeasibility = b.pinf;
    res.dual_infeasibility = b.dinf;
    res.relative_gap = b.gap;
    res.primal_objective = b.pobj;
    res.dual_objective = b.dobj;
  }

  void initialize() {
    const int m = sf_.constraints();
    X_.clear();
    Z_.clear();
    for (std::size_t b = 0; b < sf_.blocks.size(); ++b) {
      const auto& spec = sf_.blocks[b];
      const double n = static_cast<double>(spec.size);
      double ratio = 0.0;
      double anorm = 0.0;
      for (int k = 0; k < m; ++k) {
        const double a = sf_.A[k][b].norm();
        anorm = std::max(anorm, a);
        ratio = std::max(ratio, (1.0 + std::abs(sf_.b(k))) / (1.0 + a));
      }
      const double xi = std::max({10.0, std::sqrt(n), n * ratio});
      const double eta = std::max({10.0, std::sqrt(n), anorm, sf_.C[b].norm()});
      if (spec.psd) {
        X_.push_back(xi * Matrix::Identity(spec.size, spec.size));
        Z_.push_back(eta * Matrix::Identity(spec.size, spec.size));
      } else {
        X_.push_back(Matrix::Constant(spec.size, 1, xi));
        Z_.push_back(Matrix::Constant(spec.size, 1, eta));
      }
    }
    y_ = Vector::Zero(m);
  }

  Vector apply_a(const BlockVec& x) const {
    Vector out(sf_.constraints());
    for (int k = 0; k < sf_.constraints(); ++k) {
      double s = 0.0;
      for (std::size_t b = 0; b < x.size(); ++b)
        if (nonzero_[k][b]) s += sf_.A[k][b].cwiseProduct(x[b]).sum();
      out(k) = s;
    }
    return out;
  }

  BlockVec apply_at(const Vector& y) const {
    BlockVec out = sf_.zeros();
    for (int k = 0; k < sf_.constraints(); ++k) {
      if (y(k) == 0.0) continue;
      for (std::size_t b = 0; b < out.size(); ++b)
        if (nonzero_[k][b]) out[b] += y(k) * sf_.A[k][b];
    }
    return out;
  }

  // Z^{-1} and the HKM Schur complement M_ij = <A_i, X A_j Z^{-1}>.
  bool prepare_iteration() {
    const int m = sf_.constraints();
    zinv_.assign(sf_.blocks.size(), Matrix());
    for (std::size_t b = 0; b < sf_.blocks.size(); ++b) {
      if (sf_.blocks[b].psd) {
        Eigen::LLT<Matrix> llt(Z_[b]);
        if (llt.info() != Eigen::Success) return false;
        zinv_[b] = sym(llt.solve(Matrix::Identity(Z_[b].rows(), Z_[b].cols())));
      } else {
        if ((Z_[b].array() <= 0.0).any()) return false;
        zinv_[b] = Z_[b].cwiseInverse();
      }
    }
    Matrix schur = Matrix::Zero(m, m);
    for (std::size_t b = 0; b < sf_.blocks.size(); ++b) {
      for (int j = 0; j < m; ++j) {
        if (!nonzero_[j][b]) continue;
        Matrix g;
        if (sf_.blocks[b].psd) {
          g = X_[b] * sf_.A[j][b] * zinv_[b];
        } else {
          g = (X_[b].array() * sf_.A[j][b].array() * zinv_[b].array()).matrix();
        }
        for (int i = 0; i <= j; ++i) {
          if (!nonzero_[i][b]) continue;
          const double v = sf_.A[i][b].cwiseProduct(g).sum();
          schur(i, j) += v;
          if (i != j) schur(j, i) += v;
        }
      }
    }
    schur = sym(schur);
    llt_.compute(schur);
    use_llt_ = llt_.info() == Eigen::Success;
    if (!use_llt_) {
      const double ridge = 1e-14 * std::max(1.0, schur.diagonal().cwiseAbs().maxCoeff());
      ldlt_.compute(schur + ridge * Matrix::Identity(m, m));
      if (ldlt_.info() != Eigen::Success) return false;
    }
    return true;
  }

  // Solves for (dy, dx, dz) given the complementarity target r:
  //   dX = sym(r - X dZ Z^{-1}),  dZ = Rd - A^T dy,  A(dX) = rp.
  bool direction(const Vector& rp, const BlockVec& rd, const BlockVec& r, Vector& dy,
                 BlockVec& dx, BlockVec& dz) {
    const std::size_t nb = sf_.blocks.size();
    BlockVec t(nb);
    for (std::size_t b = 0; b < nb; ++b) {
      if (sf_.blocks[b].psd) {
        t[b] = r[b] - X_[b] * rd[b] * zinv_[b];
      } else {
        t[b] = r[b] - (X_[b].array() * rd[b].array() * zinv_[b].array()).matrix();
      }
    }
    const Vector rhs = rp - apply_a(t);
    dy = use_llt_ ? Vector(llt_.solve(rhs)) : Vector(ldlt_.solve(rhs));
    if (!dy.allFinite()) return false;
    dz = rd;
    axpy(-1.0, apply_at(dy), dz);
    dx.assign(nb, Matrix());
    for (std::size_t b = 0; b < nb; ++b) {
      if (sf_.blocks[b].psd) {
        dx[b] = sym(r[b] - X_[b] * dz[b] * zinv_[b]);
      } else {
        dx[b] = r[b] - (X_[b].array() * dz[b].array() * zinv_[b].array()).matrix();
      }
    }
    return true;
  }

  double step_to_boundary(const BlockVec& x, const BlockVec& dx) const {
    double a = std::numeric_limits<double>::infinity();
    for (std::size_t b = 0; b < x.size(); ++b) a = std::min(a, max_step(sf_.blocks[b], x[b], dx[b]));
    return a;
  }

  bool detect_infeasibility(IpmResult& res, const Vector& rp, double pinf, double dinf) const {
    // Farkas ray for (P): b^T y > 0 with A^T y + Z ~ 0, while (P) itself is not nearly feasible.
    const double by = sf_.b.dot(y_);
    if (by > 0.0 && pinf > 100.0 * settings_.feas_tol) {
      BlockVec ray = apply_at(y_);
      axpy(1.0, Z_, ray);
      if (norm(ray) / by < settings_.infeas_tol) {
        res.outcome = IpmOutcome::PrimalInfeasible;
        return true;
      }
    }
    // Ray for (D): <C, X> < 0 with A(X) ~ 0.
    const double cx = inner(sf_.C, X_);
    if (cx < 0.0 && dinf > 100.0 * settings_.feas_tol) {
      if ((sf_.b - rp).norm() / -cx < settings_.infeas_tol) {
        res.outcome = IpmOutcome::DualInfeasible;
        return true;
      }
    }
    return false;
  }

  static bool near_optimal(double pinf, double dinf, double gap) {
    return pinf <= 1e-9 && dinf <= 1e-9 && gap <= 1e-8;
  }

  void fill(IpmResult& res, double pinf, double dinf, double gap, double pobj, double dobj) const {
    res.X = X_;
    res.y = y_;
    res.Z = Z_;
    res.primal_infeasibility = pinf;
    res.dual_infeasibility = dinf;
    res.relative_gap = gap;
    res.primal_objective = pobj;
    res.dual_objective = dobj;
  }

  const StandardForm& sf_;
  IpmSettings settings_;
  std::vector<std::vector<bool>> nonzero_;
  double cone_dim_ = 0.0;
  double norm_b_ = 0.0;
  double norm_c_ = 0.0;
  BlockVec X_, Z_, zinv_;
  Vector y_;
  Eigen::LLT<Matrix> llt_;
  Eigen::LDLT<Matrix> ldlt_;
  bool use_llt_ = true;
};

void check_form(const StandardForm& sf) {
  if (sf.b.size() != sf.constraints()) throw Error(ErrorKind::Structural, "standard form: |b| != #A");
  if (sf.C.size() != sf.blocks.size()) throw Error(ErrorKind::Structural, "standard form: C blocks");
  for (const auto& a : sf.A) {
    if (a.size() != sf.blocks.size()) throw Error(ErrorKind::Structural, "standard form: A blocks");
  }
  for (std::size_t b = 0; b < sf.blocks.size(); ++b) {
    const auto& spec = sf.blocks[b];
    const Eigen::Index cols = spec.psd ? spec.size : 1;
    auto bad = [&](const Matrix& m) { return m.rows() != spec.size || m.cols() != cols; };
    if (bad(sf.C[b])) throw Error(ErrorKind::Structural, "standard form: C block shape");
    for (const auto& a : sf.A)
      if (bad(a[b])) throw Error(ErrorKind::Structural, "standard form: A block shape");
  }
}

}  // namespace

IpmResult solve_standard_form(const StandardForm& sf, const IpmSettings& settings) {
  check_form(sf);
  if (sf.blocks.empty()) throw Error(ErrorKind::Structural, "standard form has no cone blocks");
  Solver solver(sf, settings);
  return solver.run();
}

}  // namespace lure::sdp
