#include "lure/report_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "lure/error.hpp"

namespace lure::report {

using nlohmann::json;

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(number(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

json vector_json(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(number(v(i)));
  return out;
}

Matrix parse_matrix(const json& j, const char* name) {
  if (!j.is_array()) throw Error(ErrorKind::Input, std::string(name) + " must be an array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  Eigen::Index cols = -1;
  for (const auto& row : j) {
    if (!row.is_array()) throw Error(ErrorKind::Input, std::string(name) + " rows must be arrays");
    if (cols >= 0 && static_cast<Eigen::Index>(row.size()) != cols) {
      throw Error(ErrorKind::Input, std::string(name) + " is ragged");
    }
    cols = static_cast<Eigen::Index>(row.size());
  }
  Matrix m(rows, std::max<Eigen::Index>(cols, 0));
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index k = 0; k < m.cols(); ++k) {
      const json& v = j[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
      if (!v.is_number()) throw Error(ErrorKind::Input, std::string(name) + " has a non-numeric entry");
      m(i, k) = v.get<double>();
    }
  }
  return m;
}

json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Input, "cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Input, "'" + path + "': " + e.what());
  }
}

json residuals_json(const sdp::Residuals& r) {
  json j{{"equality", number(r.equality)},
         {"equality_scale", number(r.equality_scale)},
         {"cone", number(r.cone)},
         {"inequality", number(r.inequality)},
         {"lmi", number(r.lmi)}};
  if (r.margin) j["margin"] = number(*r.margin);
  return j;
}

json certificate_json(const detect::DualCertificate& c, double display_norm) {
  json j{{"rank", c.rank},
         {"eig_ratio", number(c.eig_ratio)},
         {"h1", vector_json(c.h1)},
         {"h2", vector_json(c.h2)},
         {"z_star", vector_json(c.z_star)},
         {"w_star", vector_json(c.w_star)},
         {"factor_error", number(c.factor_error)},
         {"equilibrium_residual", number(c.equilibrium_residual)},
         {"sign_margin", number(c.sign_margin)},
         {"H", matrix_json(c.H.matrix())},
         {"f", vector_json(c.f)},
         {"g", vector_json(c.g)},
         {"X", matrix_json(c.X)}};
  if (c.Z) j["Z"] = matrix_json(*c.Z);
  const double s = display_norm / c.h1.norm();
  j["scaled"] = {{"norm_h1", number(display_norm)},
                 {"factor", number(s)},
                 {"h1", vector_json(s * c.h1)},
                 {"h2", vector_json(s * c.h2)},
                 {"z_star", vector_json(s * c.z_star)},
                 {"w_star", vector_json(s * c.w_star)}};
  return j;
}

void canonical(std::ostream& os, const json& j) {
  switch (j.type()) {
    case json::value_t::object: {
      os << '{';
      bool first = true;
      for (const auto& [k, v] : j.items()) {  // std::map storage: keys sorted
        if (!first) os << ',';
        first = false;
        os << json(k).dump() << ':';
        canonical(os, v);
      }
      os << '}';
      break;
    }
    case json::value_t::array: {
      os << '[';
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) os << ',';
        canonical(os, j[i]);
      }
      os << ']';
      break;
    }
    case json::value_t::number_float: {
      const double v = j.get<double>();
      if (std::isfinite(v)) {
        os << fmt17(v);
      } else {
        os << "null";
      }
      break;
    }
    default: os << j.dump(); break;
  }
}

}  // namespace

StateSpaceSystem parse_system(const json& j) {
  if (!j.is_object()) throw Error(ErrorKind::Input, "system file must hold a JSON object");
  for (const char* key : {"A", "B", "C", "D"}) {
    if (!j.contains(key)) throw Error(ErrorKind::Input, std::string("missing key '") + key + "'");
  }
  StateSpaceSystem sys;
  sys.A = parse_matrix(j["A"], "A");
  sys.B = parse_matrix(j["B"], "B");
  sys.C = parse_matrix(j["C"], "C");
  sys.D = parse_matrix(j["D"], "D");
  const double mu = j.value("mu", 0.0);
  const double nu = j.value("nu", 1.0);
  try {
    sys.band = SlopeBand(mu, nu);
  } catch (const Error& e) {
    throw Error(ErrorKind::Input, e.what());
  }
  sys.nonlinearity = parse_nonlinearity_class(j.value("class", std::string("slope")));
  return sys;
}

StateSpaceSystem load_system(const std::string& path) { return parse_system(read_file(path)); }

json system_to_json(const StateSpaceSystem& sys) {
  return {{"A", matrix_json(sys.A)},       {"B", matrix_json(sys.B)},
          {"C", matrix_json(sys.C)},       {"D", matrix_json(sys.D)},
          {"mu", number(sys.band.mu())},   {"nu", number(sys.band.nu())},
          {"class", to_string(sys.nonlinearity)}};
}

detect::PiecewiseLinearMap parse_phi(const json& j) {
  if (!j.is_object() || !j.contains("breakpoints")) {
    throw Error(ErrorKind::Input, "phi file needs a 'breakpoints' array");
  }
  std::vector<detect::Breakpoint> pts;
  for (const auto& bp : j["breakpoints"]) {
    if (!bp.is_array() || bp.size() != 2 || !bp[0].is_number() || !bp[1].is_number()) {
      throw Error(ErrorKind::Input, "each breakpoint must be [z, w]");
    }
    pts.push_back({bp[0].get<double>(), bp[1].get<double>()});
  }
  try {
    return detect::PiecewiseLinearMap(std::move(pts), j.value("odd", false));
  } catch (const Error& e) {
    throw Error(ErrorKind::Input, e.what());
  }
}

detect::PiecewiseLinearMap load_phi(const std::string& path) { return parse_phi(read_file(path)); }

json phi_to_json(const detect::PiecewiseLinearMap& phi) {
  json pts = json::array();
  for (const auto& b : phi.breakpoints()) pts.push_back({number(b.z), number(b.w)});
  return {{"odd", phi.odd()}, {"breakpoints", pts}};
}

json report_to_json(const AnalysisReport& r) {
  const auto& o = r.options;
  json j;
  j["verdict"] = to_string(r.verdict);
  j["exit_code"] = exit_code_for(r.verdict);
  j["reason"] = r.reason;
  j["system"] = {{"states", r.validation.states},
                 {"channels", r.validation.channels},
                 {"class", to_string(r.nonlinearity)},
                 {"mu", number(r.band.mu())},
                 {"nu", number(r.band.nu())}};
  j["validation"] = {{"spectral_radius", number(r.validation.spectral_radius)},
                     {"schur_margin", number(r.validation.schur_margin)},
                     {"d_norm", number(r.validation.d_norm)},
                     {"gain_margin", number(r.validation.gain_margin)},
                     {"gain_assumption", r.validation.gain_assumption},
                     {"unit_band", r.validation.unit_band}};
  j["tolerances"] = {{"rank_tol", number(o.rank_tol)},
                     {"eq_tol", number(o.eq_tol)},
                     {"primal_margin", number(o.primal_margin)},
                     {"sim_tol", number(o.sim_tol)},
                     {"equilibrium_steps", o.equilibrium_steps},
                     {"max_ipm_iters", o.max_ipm_iters},
                     {"seed", o.seed},
                     {"p_bound", number(o.assembly.p_bound)},
                     {"m_diag_bound", number(o.assembly.m_diag_bound)},
                     {"margin_cap", number(o.assembly.margin_cap)}};
  if (r.primal) {
    const auto& p = *r.primal;
    j["primal"] = {{"kind", lmi::to_string(p.kind)},
                   {"reduced", p.reduced},
                   {"status", sdp::to_string(p.status)},
                   {"margin", number(p.margin)},
                   {"strictly_feasible", p.strictly_feasible},
                   {"iterations", p.iterations},
                   {"P", matrix_json(p.P)},
                   {"M", matrix_json(p.M)},
                   {"residuals", residuals_json(p.residuals)}};
  }
  if (r.dual) {
    const auto& d = *r.dual;
    json dj{{"kind", lmi::to_string(d.kind)},
            {"status", sdp::to_string(d.status)},
            {"iterations", d.iterations},
            {"sign_cut", d.sign_cut},
            {"rank_rounds", d.rank_rounds},
            {"residuals", residuals_json(d.residuals)}};
    json trail = json::array();
    for (double v : d.rank_trail) trail.push_back(number(v));
    dj["rank_trail"] = trail;
    if (d.certificate) dj["certificate"] = certificate_json(*d.certificate, o.display_norm);
    if (d.inconclusive) {
      dj["inconclusive"] = {{"reason", detect::to_string(d.inconclusive->reason)},
                            {"rank", d.inconclusive->rank},
                            {"eig_ratio", number(d.inconclusive->eig_ratio)},
                            {"detail", d.inconclusive->detail}};
    }
    j["dual"] = dj;
  }
  if (r.phi) j["phi"] = phi_to_json(*r.phi);
  if (r.slope) {
    j["slope"] = {{"ok", r.slope->ok},
                  {"min_slope", number(r.slope->min_slope)},
                  {"max_slope", number(r.slope->max_slope)},
                  {"through_origin", r.slope->through_origin},
                  {"antisymmetric", r.slope->antisymmetric},
                  {"violations", r.slope->violations}};
  }
  if (r.equilibrium) {
    const auto& e = *r.equilibrium;
    j["equilibrium"] = {{"steps", e.steps},
                        {"contraction", number(e.contraction)},
                        {"loop_residual", number(e.loop_residual)},
                        {"max_deviation", number(e.max_deviation)},
                        {"ok", e.ok}};
  }
  return j;
}

std::string canonical_dump(const json& j) {
  std::ostringstream os;
  canonical(os, j);
  return os.str();
}

void write_breakpoints_csv(std::ostream& out, const detect::PiecewiseLinearMap& phi) {
  out << "z,w\n";
  for (const auto& b : phi.breakpoints()) out << fmt17(b.z) << ',' << fmt17(b.w) << '\n';
}

void write_trajectory_csv(std::ostream& out, const sim::Trajectory& traj) {
  if (traj.states.empty()) return;
  const Eigen::Index n = traj.states.front().size();
  const Eigen::Index m = traj.inputs.front().size();
  out << 'k';
  for (Eigen::Index i = 1; i <= n; ++i) out << ",x_" << i;
  for (Eigen::Index i = 1; i <= m; ++i) out << ",z_" << i;
  for (Eigen::Index i = 1; i <= m; ++i) out << ",w_" << i;
  out << ",loop_residual\n";
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    out << k;
    for (Eigen::Index i = 0; i < n; ++i) out << ',' << fmt17(traj.states[k](i));
    for (Eigen::Index i = 0; i < m; ++i) out << ',' << fmt17(traj.outputs[k](i));
    for (Eigen::Index i = 0; i < m; ++i) out << ',' << fmt17(traj.inputs[k](i));
    out << ',' << fmt17(traj.loop_residuals[k]) << '\n';
  }
}

void write_field_csv(std::ostream& out, const std::vector<sim::FieldSample>& field) {
  out << "x1,x2,dx1,dx2\n";
  for (const auto& s : field) {
    out << fmt17(s.x(0)) << ',' << fmt17(s.x(1)) << ',' << fmt17(s.dx(0)) << ',' << fmt17(s.dx(1))
        << '\n';
  }
}

}  // namespace lure::report
