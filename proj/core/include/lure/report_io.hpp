#pragma once

#include <iosfwd>
#include <string>

#include <nlohmann/json.hpp>

#include "lure/analysis.hpp"

namespace lure::report {

/// {"A": [[..]], "B": .., "C": .., "D": .., "mu": x, "nu": y, "class": "slope" | "slope_odd"}
StateSpaceSystem parse_system(const nlohmann::json& j);
StateSpaceSystem load_system(const std::string& path);
nlohmann::json system_to_json(const StateSpaceSystem& sys);

/// {"odd": bool, "breakpoints": [[z, w], ...]}
detect::PiecewiseLinearMap parse_phi(const nlohmann::json& j);
detect::PiecewiseLinearMap load_phi(const std::string& path);
nlohmann::json phi_to_json(const detect::PiecewiseLinearMap& phi);

nlohmann::json report_to_json(const AnalysisReport& report);

/// Sorted keys, no whitespace variance, every float as %.17g.
std::string canonical_dump(const nlohmann::json& j);

void write_breakpoints_csv(std::ostream& out, const detect::PiecewiseLinearMap& phi);
/// Columns: k, x_1..x_n, z_1..z_m, w_1..w_m, loop_residual; one row per state.
void write_trajectory_csv(std::ostream& out, const sim::Trajectory& traj);
/// Columns: x1, x2, dx1, dx2.
void write_field_csv(std::ostream& out, const std::vector<sim::FieldSample>& field);

}  // namespace lure::report
