#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "cli_runner.hpp"
#include "fixtures.hpp"

using namespace lure;
using lure::fx::quoted;
using lure::fx::run_cli;
using lure::fx::slurp;
using nlohmann::json;

namespace {

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);)
    if (!l.empty()) out.push_back(l);
  return out;
}

std::vector<double> fields(const std::string& row) {
  std::vector<double> out;
  std::istringstream in(row);
  for (std::string cell; std::getline(in, cell, ',');) out.push_back(std::stod(cell));
  return out;
}

}  // namespace

TEST(Cli, AnalyzeSlopeExample) {
  fx::ScratchDir dir;
  const auto rep = dir.file("report.json");
  const auto phi = dir.file("phi.json");
  const auto bp = dir.file("bp.csv");
  EXPECT_EQ(run_cli("analyze " + quoted(fx::data_path("lure_slope_4ch.json")) + " -o " + quoted(rep) +
                    " --phi " + quoted(phi) + " --breakpoints " + quoted(bp)),
            10);
  const json j = json::parse(slurp(rep));
  EXPECT_EQ(j["verdict"], "not_absolutely_stable");
  const auto loaded = report::load_phi(phi);
  EXPECT_EQ(lines_of(slurp(bp)).size(), loaded.size() + 1);
  EXPECT_EQ(lines_of(slurp(bp)).front(), "z,w");
}

TEST(Cli, AnalyzeOddExample) {
  fx::ScratchDir dir;
  const auto phi = dir.file("phi.json");
  EXPECT_EQ(run_cli("analyze -q " + quoted(fx::data_path("lure_odd_4ch.json")) + " --phi " + quoted(phi)), 10);
  EXPECT_TRUE(report::load_phi(phi).odd());
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run_cli("analyze " + quoted(fx::data_path("decoupled_stable.json"))), 0);
  EXPECT_EQ(run_cli("analyze " + quoted(fx::data_path("unstable_linear.json"))), 1);
  EXPECT_EQ(run_cli("analyze " + quoted(fx::data_path("no_such_file.json"))), 1);
  EXPECT_EQ(run_cli("analyze --no-such-flag " + quoted(fx::data_path("decoupled_stable.json"))), 1);
  EXPECT_EQ(run_cli(""), 1);
  EXPECT_EQ(run_cli("--help"), 0);
}

TEST(Cli, ReportGoesToStdout) {
  fx::ScratchDir dir;
  const auto out = dir.file("stdout.json");
  EXPECT_EQ(run_cli("analyze -q " + quoted(fx::data_path("decoupled_stable.json")), "> " + quoted(out) + " 2>/dev/null"), 0);
  EXPECT_EQ(json::parse(slurp(out))["verdict"], "absolutely_stable");
}

TEST(Cli, SimulateFromOriginStaysAtZero) {
  fx::ScratchDir dir;
  const auto phi = dir.file("phi.json");
  const auto csv = dir.file("traj.csv");
  const auto sys = fx::data_path("lure_slope_4ch.json");
  ASSERT_EQ(run_cli("analyze -q " + quoted(sys) + " --phi " + quoted(phi)), 10);
  ASSERT_EQ(run_cli("simulate " + quoted(sys) + " --phi " + quoted(phi) + " --x0 0,0 --steps 5 -o " + quoted(csv)), 0);
  const auto rows = lines_of(slurp(csv));
  ASSERT_EQ(rows.size(), 7u);
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto v = fields(rows[r]);
    EXPECT_EQ(v.front(), static_cast<double>(r - 1));
    for (std::size_t c = 1; c < v.size(); ++c) EXPECT_EQ(v[c], 0.0);
  }
}

TEST(Cli, SimulateFromReportHoldsTheEquilibrium) {
  fx::ScratchDir dir;
  const auto rep = dir.file("report.json");
  const auto phi = dir.file("phi.json");
  const auto csv = dir.file("traj.csv");
  const auto sys = fx::data_path("lure_odd_4ch.json");
  ASSERT_EQ(run_cli("analyze -q " + quoted(sys) + " -o " + quoted(rep) + " --phi " + quoted(phi)), 10);
  ASSERT_EQ(run_cli("simulate " + quoted(sys) + " --phi " + quoted(phi) + " --x0-from " + quoted(rep) +
                    " --steps 50 -o " + quoted(csv)),
            0);
  const auto rows = lines_of(slurp(csv));
  ASSERT_EQ(rows.size(), 52u);
  const auto first = fields(rows[1]);
  const auto last = fields(rows.back());
  EXPECT_NEAR(std::hypot(first[1], first[2]), 1.0, 1e-12);
  EXPECT_NEAR(last[1], first[1], 1e-8);
  EXPECT_NEAR(last[2], first[2], 1e-8);
}

TEST(Cli, SimulateRejectsBadInitialState) {
  fx::ScratchDir dir;
  const auto phi = dir.file("phi.json");
  const auto sys = fx::data_path("lure_slope_4ch.json");
  ASSERT_EQ(run_cli("analyze -q " + quoted(sys) + " --phi " + quoted(phi)), 10);
  EXPECT_EQ(run_cli("simulate " + quoted(sys) + " --phi " + quoted(phi) + " --x0 1,2,3"), 1);
}

TEST(Cli, FieldOnDefaultGrid) {
  fx::ScratchDir dir;
  const auto phi = dir.file("phi.json");
  const auto csv = dir.file("field.csv");
  const auto sys = fx::data_path("lure_slope_4ch.json");
  ASSERT_EQ(run_cli("analyze -q " + quoted(sys) + " --phi " + quoted(phi)), 10);
  ASSERT_EQ(run_cli("field " + quoted(sys) + " --phi " + quoted(phi) + " -o " + quoted(csv)), 0);
  const auto rows = lines_of(slurp(csv));
  ASSERT_EQ(rows.size(), 442u);
  EXPECT_EQ(rows.front(), "x1,x2,dx1,dx2");
  const auto first = fields(rows[1]);
  EXPECT_EQ(first[0], -2.0);
  EXPECT_EQ(first[1], -2.0);
}
