#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lure/error.hpp"
#include "lure/report_io.hpp"

namespace {

using namespace lure;
namespace ec = report::exit_code;

int exit_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NumericFailure:
    case ErrorKind::CertificateInconsistent:
    case ErrorKind::InternalContradiction:
      return ec::kNumericFailure;
    default:
      return ec::kInputError;
  }
}

// Writes to path, or to stdout when path is empty or "-".
template <class Fn>
void emit(const std::string& path, Fn&& write) {
  if (path.empty() || path == "-") {
    write(std::cout);
    return;
  }
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Input, "cannot write '" + path + "'");
  write(out);
  if (!out) throw Error(ErrorKind::Input, "write to '" + path + "' failed");
}

Vector to_vector(const std::vector<double>& v) {
  return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

// h1 of a prior analyze report, at the display scale its phi was built on.
Vector h1_from_report(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Input, "cannot open '" + path + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
    return to_vector(j.at("dual").at("certificate").at("scaled").at("h1").get<std::vector<double>>());
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Input, "'" + path + "' carries no certificate: " + e.what());
  }
}

struct AnalyzeArgs {
  std::string input;
  std::string report_path;
  std::string phi_path;
  std::string breakpoints_path;
  bool quiet = false;
  report::AnalysisOptions options;
};

int run_analyze(const AnalyzeArgs& a) {
  const StateSpaceSystem sys = report::load_system(a.input);
  const report::AnalysisReport rep = report::analyze(sys, a.options);
  const std::string body = report::canonical_dump(report::report_to_json(rep));
  emit(a.report_path, [&](std::ostream& os) { os << body << '\n'; });
  if (rep.phi) {
    if (!a.phi_path.empty()) {
      emit(a.phi_path, [&](std::ostream& os) { os << report::canonical_dump(report::phi_to_json(*rep.phi)) << '\n'; });
    }
    if (!a.breakpoints_path.empty()) {
      emit(a.breakpoints_path, [&](std::ostream& os) { report::write_breakpoints_csv(os, *rep.phi); });
    }
  }
  if (!a.quiet) std::cerr << report::to_string(rep.verdict) << ": " << rep.reason << '\n';
  return report::exit_code_for(rep.verdict);
}

struct SimulateArgs {
  std::string input;
  std::string phi_path;
  std::vector<double> x0;
  std::string x0_report;
  int steps = 1000;
  std::string out_path;
};

int run_simulate(const SimulateArgs& a) {
  const StateSpaceSystem sys = report::load_system(a.input);
  const detect::PiecewiseLinearMap phi = report::load_phi(a.phi_path);
  Vector x0;
  if (!a.x0_report.empty()) {
    x0 = h1_from_report(a.x0_report);
  } else if (!a.x0.empty()) {
    x0 = to_vector(a.x0);
  } else {
    x0 = Vector::Zero(sys.states());
  }
  const sim::Trajectory traj = sim::simulate(sys, phi, x0, a.steps);
  emit(a.out_path, [&](std::ostream& os) { report::write_trajectory_csv(os, traj); });
  return 0;
}

struct FieldArgs {
  std::string input;
  std::string phi_path;
  std::vector<double> box{-2.0, 2.0, -2.0, 2.0};
  int nx = 21;
  int ny = 21;
  std::string out_path;
};

int run_field(const FieldArgs& a) {
  const StateSpaceSystem sys = report::load_system(a.input);
  const detect::PiecewiseLinearMap phi = report::load_phi(a.phi_path);
  sim::Grid g;
  g.x_min = a.box[0];
  g.x_max = a.box[1];
  g.y_min = a.box[2];
  g.y_max = a.box[3];
  g.nx = a.nx;
  g.ny = a.ny;
  const auto field = sim::vector_field(sys, phi, g);
  emit(a.out_path, [&](std::ostream& os) { report::write_field_csv(os, field); });
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Absolute stability analysis of discrete-time Lur'e systems"};
  app.require_subcommand(1);

  AnalyzeArgs an;
  auto* analyze = app.add_subcommand("analyze", "primal LMI, then dual certificate and destabilizing phi");
  analyze->add_option("input", an.input, "system JSON")->required();
  analyze->add_option("-o,--report", an.report_path, "report JSON (default stdout)");
  analyze->add_option("--phi", an.phi_path, "write the constructed phi as JSON");
  analyze->add_option("--breakpoints", an.breakpoints_path, "write phi breakpoints as CSV");
  analyze->add_option("--tol-rank", an.options.rank_tol, "lambda2/lambda1 threshold for rank 1")
      ->capture_default_str();
  analyze->add_option("--tol-eq", an.options.eq_tol, "relative |A h1 + B h2 - h1| threshold")
      ->capture_default_str();
  analyze->add_option("--primal-margin", an.options.primal_margin, "strict feasibility threshold on t")
      ->capture_default_str();
  analyze->add_option("--max-ipm-iters", an.options.max_ipm_iters, "interior-point iteration cap")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  analyze->add_option("--seed", an.options.seed, "rank reduction seed (0 = unperturbed)")
      ->capture_default_str();
  analyze->add_option("--display-norm", an.options.display_norm, "|h1| of the reported certificate and phi")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  analyze->add_option("--sim-steps", an.options.equilibrium_steps, "equilibrium simulation length")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  analyze->add_flag("-q,--quiet", an.quiet, "no verdict line on stderr");

  SimulateArgs sm;
  auto* simulate = app.add_subcommand("simulate", "trajectory of the loop closed with a given phi");
  simulate->add_option("input", sm.input, "system JSON")->required();
  simulate->add_option("--phi", sm.phi_path, "phi JSON")->required();
  auto* x0 = simulate->add_option("--x0", sm.x0, "initial state, comma separated")->delimiter(',');
  simulate->add_option("--x0-from", sm.x0_report, "start at h1 of an analyze report")->excludes(x0);
  simulate->add_option("--steps", sm.steps, "number of steps")->capture_default_str()->check(CLI::NonNegativeNumber);
  simulate->add_option("-o,--out", sm.out_path, "trajectory CSV (default stdout)");

  FieldArgs fd;
  auto* field = app.add_subcommand("field", "one-step displacement on a planar grid");
  field->add_option("input", fd.input, "system JSON")->required();
  field->add_option("--phi", fd.phi_path, "phi JSON")->required();
  field->add_option("--box", fd.box, "x_min,x_max,y_min,y_max")->delimiter(',')->expected(4)->capture_default_str();
  field->add_option("--nx", fd.nx, "grid points along x1")->capture_default_str()->check(CLI::PositiveNumber);
  field->add_option("--ny", fd.ny, "grid points along x2")->capture_default_str()->check(CLI::PositiveNumber);
  field->add_option("-o,--out", fd.out_path, "field CSV (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : ec::kInputError;
  }

  try {
    if (*analyze) return run_analyze(an);
    if (*simulate) return run_simulate(sm);
    if (*field) return run_field(fd);
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return exit_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return ec::kNumericFailure;
  }
  return ec::kInputError;
}
