#include "lure/instability_detector.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lure/error.hpp"

namespace lure::detect {

const char* to_string(InconclusiveReason r) noexcept {
  switch (r) {
    case InconclusiveReason::Rank: return "rank";
    case InconclusiveReason::Sign: return "sign";
  }
  return "?";
}

Extraction extract_certificate(const StateSpaceSystem& sys, const sdp::SolveResult& dual,
                               NonlinearityClass nonlinearity, const DetectorSettings& settings) {
  const Eigen::Index n = sys.states();
  const Eigen::Index m = sys.channels();
  const linalg::SymMatrix H = linalg::SymMatrix::from(dual.at("H"));
  if (H.dim() != n + m) throw Error(ErrorKind::Structural, "dual H has the wrong dimension");

  const linalg::RankFactor rf = linalg::numerical_rank_and_factor(H, settings.rank_tol);
  if (rf.rank != 1) {
    std::ostringstream os;
    os << "numerical rank " << rf.rank << " (lambda2/lambda1 = " << rf.ratio() << ")";
    return Inconclusive{InconclusiveReason::Rank, rf.rank, rf.ratio(), os.str()};
  }

  Vector h = rf.factor.col(0);
  if (h.head(n).norm() <= settings.h1_zero_tol * h.norm()) {
    throw Error(ErrorKind::InternalContradiction,
                "rank-1 dual solution has h1 = 0, which a valid dual solution excludes");
  }
  Eigen::Index lead = 0;
  h.head(n).cwiseAbs().maxCoeff(&lead);
  if (h(lead) < 0.0) h = -h;

  DualCertificate c;
  c.H = H;
  c.f = dual.at("f");
  c.g = dual.at("g");
  c.X = dual.at("X");
  if (nonlinearity == NonlinearityClass::SlopeRestrictedOdd && dual.assignment.count("Z")) {
    c.Z = dual.at("Z");
  }
  c.rank = 1;
  c.eig_ratio = rf.ratio();
  c.h1 = h.head(n);
  c.h2 = h.tail(m);
  c.z_star = sys.C * c.h1 + sys.D * c.h2;
  c.w_star = c.h2;
  c.factor_error = (H.matrix() - h * h.transpose()).norm() / H.trace();

  const Vector next = sys.A * c.h1 + sys.B * c.h2;
  const double h1sq = c.h1.squaredNorm();
  c.sign_margin = next.cwiseProduct(c.h1).minCoeff() / h1sq;
  c.equilibrium_residual = (next - c.h1).norm() / c.h1.norm();

  if (c.sign_margin < -settings.sign_tol) {
    std::ostringstream os;
    os << "sign condition fails: min_i (A h1 + B h2)_i (h1)_i / |h1|^2 = " << c.sign_margin;
    return Inconclusive{InconclusiveReason::Sign, 1, c.eig_ratio, os.str()};
  }
  if (c.equilibrium_residual > settings.equilibrium_tol) {
    const double flipped = (next + c.h1).norm() / c.h1.norm();
    std::ostringstream os;
    if (flipped <= settings.equilibrium_tol) {
      os << "certificate is on the A h1 + B h2 = -h1 branch";
      return Inconclusive{InconclusiveReason::Sign, 1, c.eig_ratio, os.str()};
    }
    os << "|A h1 + B h2 - h1| / |h1| = " << c.equilibrium_residual << " exceeds tolerance";
    return Inconclusive{InconclusiveReason::Rank, 1, c.eig_ratio, os.str()};
  }
  return c;
}

DualCertificate rescale(const DualCertificate& cert, double h1_norm) {
  if (!(h1_norm > 0.0)) throw Error(ErrorKind::Input, "display norm must be positive");
  const double s = h1_norm / cert.h1.norm();
  const double s2 = s * s;
  DualCertificate out = cert;
  out.H = linalg::SymMatrix::from(s2 * cert.H.matrix());
  out.f = s2 * cert.f;
  out.g = s2 * cert.g;
  out.X = s2 * cert.X;
  if (cert.Z) out.Z = s2 * *cert.Z;
  out.h1 = s * cert.h1;
  out.h2 = s * cert.h2;
  out.z_star = s * cert.z_star;
  out.w_star = s * cert.w_star;
  return out;
}

DualCertificate flip_sign(const DualCertificate& cert) {
  DualCertificate out = cert;
  out.h1 = -cert.h1;
  out.h2 = -cert.h2;
  out.z_star = -cert.z_star;
  out.w_star = -cert.w_star;
  return out;
}

namespace {

// Sorts nodes by z and merges runs closer than tol. A run touching the origin
// collapses onto (0, 0) exactly.
std::vector<Breakpoint> merge_nodes(std::vector<Breakpoint> nodes, double tol) {
  std::sort(nodes.begin(), nodes.end(), [](const Breakpoint& a, const Breakpoint& b) {
    return a.z < b.z || (a.z == b.z && a.w < b.w);
  });
  std::vector<Breakpoint> out;
  std::size_t i = 0;
  while (i < nodes.size()) {
    std::size_t j = i + 1;
    while (j < nodes.size() && nodes[j].z - nodes[i].z <= tol) ++j;
    double zsum = 0.0, wsum = 0.0;
    double wmin = nodes[i].w, wmax = nodes[i].w;
    bool origin = false;
    for (std::size_t k = i; k < j; ++k) {
      zsum += nodes[k].z;
      wsum += nodes[k].w;
      wmin = std::min(wmin, nodes[k].w);
      wmax = std::max(wmax, nodes[k].w);
      origin = origin || (nodes[k].z == 0.0 && nodes[k].w == 0.0);
    }
    if (wmax - wmin > tol || (origin && std::max(std::abs(wmin), std::abs(wmax)) > tol)) {
      std::ostringstream os;
      os << "coincident z near " << nodes[i].z << " carry different w values [" << wmin << ", "
         << wmax << "]";
      throw Error(ErrorKind::CertificateInconsistent, os.str());
    }
    const double cnt = static_cast<double>(j - i);
    out.push_back(origin ? Breakpoint{0.0, 0.0} : Breakpoint{zsum / cnt, wsum / cnt});
    i = j;
  }
  return out;
}

}  // namespace

PiecewiseLinearMap build_pwl(const DualCertificate& cert, bool odd, double merge_tol) {
  const Eigen::Index m = cert.z_star.size();
  if (cert.w_star.size() != m) throw Error(ErrorKind::Structural, "z* and w* differ in length");
  const double tol = merge_tol * std::max(1.0, cert.z_star.norm());

  std::vector<Breakpoint> nodes{{0.0, 0.0}};
  for (Eigen::Index i = 0; i < m; ++i) {
    const double z = cert.z_star(i);
    const double w = cert.w_star(i);
    if (odd) {
      // fold onto z >= 0; the negative side is mirrored afterwards
      nodes.push_back(z < 0.0 ? Breakpoint{-z, -w} : Breakpoint{z, w});
    } else {
      nodes.push_back({z, w});
    }
  }
  std::vector<Breakpoint> merged = merge_nodes(std::move(nodes), tol);
  if (!odd) return PiecewiseLinearMap(std::move(merged), false);

  std::vector<Breakpoint> full;
  full.reserve(2 * merged.size());
  for (auto it = merged.rbegin(); it != merged.rend(); ++it)
    if (it->z > 0.0) full.push_back({-it->z, -it->w});
  for (const auto& b : merged) full.push_back(b);
  return PiecewiseLinearMap(std::move(full), true);
}

}  // namespace lure::detect
