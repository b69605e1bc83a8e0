#include "lure/piecewise_linear.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "lure/error.hpp"

namespace lure::detect {

PiecewiseLinearMap::PiecewiseLinearMap(std::vector<Breakpoint> breakpoints, bool odd)
    : points_(std::move(breakpoints)), odd_(odd) {
  if (points_.empty()) throw Error(ErrorKind::Structural, "piecewise-linear map needs a breakpoint");
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (!std::isfinite(points_[i].z) || !std::isfinite(points_[i].w)) {
      throw Error(ErrorKind::Structural, "non-finite breakpoint");
    }
    if (i > 0 && !(points_[i].z > points_[i - 1].z)) {
      throw Error(ErrorKind::Structural, "breakpoints must be strictly increasing in z");
    }
  }
}

double PiecewiseLinearMap::operator()(double z) const {
  if (points_.empty()) return 0.0;
  if (z <= points_.front().z) return points_.front().w;
  if (z >= points_.back().z) return points_.back().w;
  // first breakpoint strictly right of z; z itself lies in [lo.z, hi.z)
  const auto hi = std::upper_bound(points_.begin(), points_.end(), z,
                                   [](double v, const Breakpoint& b) { return v < b.z; });
  const auto lo = hi - 1;
  if (z == lo->z) return lo->w;
  const double t = (z - lo->z) / (hi->z - lo->z);
  return lo->w + t * (hi->w - lo->w);
}

double PiecewiseLinearMap::lipschitz() const {
  double l = 0.0;
  for (std::size_t i = 1; i < points_.size(); ++i) {
    l = std::max(l, std::abs((points_[i].w - points_[i - 1].w) / (points_[i].z - points_[i - 1].z)));
  }
  return l;
}

double eval_pwl(const PiecewiseLinearMap& phi, double z) { return phi(z); }

SlopeReport verify_slope(const PiecewiseLinearMap& phi, const SlopeBand& band, double eps) {
  SlopeReport r;
  const auto& pts = phi.breakpoints();
  r.through_origin = phi(0.0) == 0.0;
  if (!r.through_origin) {
    std::ostringstream os;
    os << "phi(0) = " << phi(0.0);
    r.violations.push_back(os.str());
  }
  // The plateaus outside the hull have slope 0, which every band admits.
  r.min_slope = pts.size() > 1 ? std::numeric_limits<double>::infinity() : 0.0;
  r.max_slope = pts.size() > 1 ? -std::numeric_limits<double>::infinity() : 0.0;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    const double s = (pts[i].w - pts[i - 1].w) / (pts[i].z - pts[i - 1].z);
    r.min_slope = std::min(r.min_slope, s);
    r.max_slope = std::max(r.max_slope, s);
    if (s < band.mu() - eps || s > band.nu() + eps) {
      std::ostringstream os;
      os << "segment [" << pts[i - 1].z << ", " << pts[i].z << "] has slope " << s;
      r.violations.push_back(os.str());
    }
  }
  if (phi.odd()) {
    for (const auto& b : pts) {
      if (phi(-b.z) != -b.w) {
        r.antisymmetric = false;
        std::ostringstream os;
        os << "phi(" << -b.z << ") = " << phi(-b.z) << " != " << -b.w;
        r.violations.push_back(os.str());
      }
    }
  }
  r.ok = r.violations.empty();
  return r;
}

}  // namespace lure::detect
