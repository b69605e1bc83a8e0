#include "lure/lmi_assembly.hpp"

#include "lure/error.hpp"

namespace lure::lmi {

using sdp::AffineMatrix;
using sdp::EntryMask;
using sdp::SdpFeasibilityProblem;

const char* to_string(LmiKind k) noexcept {
  switch (k) {
    case LmiKind::PrimalDHD: return "primal_dhd";
    case LmiKind::PrimalDD: return "primal_dd";
    case LmiKind::DualDHD: return "dual_dhd";
    case LmiKind::DualDD: return "dual_dd";
  }
  return "?";
}

namespace {

struct Selectors {
  Matrix next;    // [A B]
  Matrix now;     // [I 0]
  Matrix input;   // [0 I]
  Matrix output;  // [C D]
};

Selectors selectors(const StateSpaceSystem& sys) {
  const Eigen::Index n = sys.states();
  const Eigen::Index m = sys.channels();
  Selectors s;
  s.next.resize(n, n + m);
  s.next << sys.A, sys.B;
  s.now = Matrix::Zero(n, n + m);
  s.now.leftCols(n).setIdentity();
  s.input = Matrix::Zero(m, n + m);
  s.input.rightCols(m).setIdentity();
  s.output.resize(m, n + m);
  s.output << sys.C, sys.D;
  return s;
}

void check_shapes(const StateSpaceSystem& sys) {
  const Eigen::Index n = sys.A.rows();
  const Eigen::Index m = sys.B.cols();
  if (sys.A.cols() != n || sys.B.rows() != n || sys.C.rows() != m || sys.C.cols() != n ||
      sys.D.rows() != m || sys.D.cols() != m) {
    throw Error(ErrorKind::Structural, "system matrices have inconsistent dimensions");
  }
}

AffineMatrix constant(const Matrix& c) { return AffineMatrix::constant(c); }

}  // namespace

SdpFeasibilityProblem build_primal(const StateSpaceSystem& sys, LmiSpec spec,
                                   const AssemblySettings& settings) {
  check_shapes(sys);
  if (spec.kind != LmiKind::PrimalDHD && spec.kind != LmiKind::PrimalDD) {
    throw Error(ErrorKind::Structural, "build_primal called with a dual kind");
  }
  if (spec.reduced && !sys.band.is_unit()) {
    throw Error(ErrorKind::Structural, "reduced primal requires the slope band (0, 1)");
  }
  const Eigen::Index n = sys.states();
  const Eigen::Index m = sys.channels();
  const Selectors sel = selectors(sys);
  const Matrix ones = Matrix::Ones(m, 1);

  SdpFeasibilityProblem p;
  const AffineMatrix P = p.add_free_sym("P", n);

  AffineMatrix M;
  if (spec.kind == LmiKind::PrimalDHD) {
    M = p.add_free_mat("M", m, m);
    p.add_inequality("m_offdiag_nonpositive", -M, EntryMask::OffDiagonal);
    p.add_inequality("m_row_sums", M * ones);
    p.add_inequality("m_col_sums", ones.transpose() * M);
    p.add_inequality("m_diag_cap", constant(settings.m_diag_bound * Matrix::Identity(m, m)) - M,
                     EntryMask::Diagonal);
  } else {
    const AffineMatrix md = p.add_free_mat("Md", m, m).diagonal_part();
    const AffineMatrix mod = p.add_free_mat("Mod", m, m).offdiagonal_part();
    const AffineMatrix mbar = p.add_free_mat("Mbar", m, m).offdiagonal_part();
    M = md + mod;
    p.add_inequality("dd_row_sums", (md - mbar) * ones);
    p.add_inequality("dd_col_sums", ones.transpose() * (md - mbar));
    p.add_inequality("mbar_minus_mod", mbar - mod, EntryMask::OffDiagonal);
    p.add_inequality("mbar_plus_mod", mbar + mod, EntryMask::OffDiagonal);
    p.add_inequality("m_diag_cap", constant(settings.m_diag_bound * Matrix::Identity(m, m)) - md,
                     EntryMask::Diagonal);
  }
  const Matrix cap = settings.p_bound * Matrix::Ones(n, n);
  p.add_inequality("p_upper", constant(cap) - P, EntryMask::Upper);
  p.add_inequality("p_lower", constant(cap) + P, EntryMask::Upper);

  // Multiplier (*)^T [[0, M], [M^T, 0]] [[nu I, -I], [-mu I, I]], expanded.
  const double mu = sys.band.mu();
  const double nu = sys.band.nu();
  const AffineMatrix mt = M.transpose();
  const AffineMatrix pi = AffineMatrix::blocks({{-(mu * nu) * (M + mt), nu * M + mu * mt},
                                                {nu * mt + mu * M, -(M + mt)}});
  Matrix io = Matrix::Zero(2 * m, n + m);
  io.topRows(m) = sel.output;
  io.bottomRows(m) = sel.input;

  AffineMatrix lmi = sel.next.transpose() * P * sel.next - sel.now.transpose() * P * sel.now +
                     io.transpose() * pi * io;
  lmi.prune();
  if (spec.reduced) {
    p.set_strict_lmi("stability", lmi, settings.margin_cap);
  } else {
    const AffineMatrix stacked = AffineMatrix::blocks(
        {{lmi, AffineMatrix::zero(n + m, n)}, {AffineMatrix::zero(n, n + m), -P}});
    p.set_strict_lmi("stability", stacked, settings.margin_cap);
  }
  return p;
}

SdpFeasibilityProblem build_dual(const StateSpaceSystem& sys, LmiSpec spec) {
  check_shapes(sys);
  if (spec.kind != LmiKind::DualDHD && spec.kind != LmiKind::DualDD) {
    throw Error(ErrorKind::UnsupportedMode, "build_dual called with a primal kind");
  }
  if (!spec.reduced || !sys.band.is_unit()) {
    throw Error(ErrorKind::UnsupportedMode, "the dual is only available in reduced form for slope band (0, 1)");
  }
  const Eigen::Index n = sys.states();
  const Eigen::Index m = sys.channels();
  const Selectors sel = selectors(sys);
  const Matrix ones = Matrix::Ones(m, 1);

  SdpFeasibilityProblem p;
  const AffineMatrix H = p.add_psd("H", n + m);
  const AffineMatrix f = p.add_nonneg("f", m);
  const AffineMatrix g = p.add_nonneg("g", m);
  const AffineMatrix X = p.add_z0("X", m);

  AffineMatrix lyap = sel.next * H * sel.next.transpose() - sel.now * H * sel.now.transpose();
  lyap.prune();
  p.add_equality("lyapunov", lyap, EntryMask::Upper);

  AffineMatrix y = sel.input * H * (sel.output - sel.input).transpose();
  y.prune();
  const AffineMatrix rank_one_sums = ones * f.transpose() + g * ones.transpose();

  if (spec.kind == LmiKind::DualDHD) {
    p.add_equality("y_coupling", y - rank_one_sums - X);
  } else {
    const AffineMatrix Z = p.add_z0("Z", m);
    p.add_equality("y_diag", y - rank_one_sums, EntryMask::Diagonal);
    p.add_equality("y_offdiag", y - X + Z, EntryMask::OffDiagonal);
    p.add_equality("xz_offdiag", X + Z + rank_one_sums, EntryMask::OffDiagonal);
  }
  p.set_normalization("trace", H.trace(), 1.0);
  return p;
}

void add_sign_cut(SdpFeasibilityProblem& dual, const StateSpaceSystem& sys) {
  const Selectors sel = selectors(sys);
  AffineMatrix cross = sel.next * dual.var("H") * sel.now.transpose();
  cross.prune();
  dual.add_inequality("sign_cut", cross, EntryMask::Diagonal);
}

Matrix primal_multiplier(const SdpFeasibilityProblem& primal,
                         const std::map<std::string, Matrix>& assignment) {
  if (primal.has_variable("M")) return assignment.at("M");
  const Matrix md = assignment.at("Md");
  Matrix mod = assignment.at("Mod");
  mod.diagonal().setZero();
  Matrix out = mod;
  out.diagonal() = md.diagonal();
  return out;
}

Matrix lyapunov_block(const StateSpaceSystem& sys, const Matrix& h) {
  const Selectors sel = selectors(sys);
  return sel.next * h * sel.next.transpose() - sel.now * h * sel.now.transpose();
}

Matrix coupling_matrix(const StateSpaceSystem& sys, const Matrix& h) {
  const Selectors sel = selectors(sys);
  return sel.input * h * (sel.output - sel.input).transpose();
}

}  // namespace lure::lmi
