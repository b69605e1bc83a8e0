#pragma once

#include <string>

#include "lure/report_io.hpp"

namespace lure::fx {

inline std::string data_path(const std::string& name) { return std::string(LURE_DATA_DIR) + "/" + name; }

inline StateSpaceSystem slope_example() { return report::load_system(data_path("lure_slope_4ch.json")); }
inline StateSpaceSystem odd_example() { return report::load_system(data_path("lure_odd_4ch.json")); }
inline StateSpaceSystem decoupled_system() { return report::load_system(data_path("decoupled_stable.json")); }

inline Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

inline double cosine(const Vector& a, const Vector& b) { return a.dot(b) / (a.norm() * b.norm()); }

// Reference certificate vectors of the two four-channel examples (4 decimals).
namespace reference {
inline Vector slope_h1() { return vec({1.3898, 1.0337}); }
inline Vector slope_z() { return vec({-0.9277, -1.2417, -0.4440, 0.9210}); }
inline Vector slope_w() { return vec({-0.0513, -0.0582, -0.0513, 0.0151}); }
inline Vector odd_h1() { return vec({1.7238, -0.1691}); }
inline Vector odd_z() { return vec({-1.8222, -0.5940, 1.1959, 0.6340}); }
inline Vector odd_w() { return vec({-0.2516, -0.0279, 0.2033, 0.0279}); }
}  // namespace reference

}  // namespace lure::fx
