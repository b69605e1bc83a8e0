#include <random>
#include <string>

#include <benchmark/benchmark.h>

#include "lure/analysis.hpp"
#include "lure/lmi_assembly.hpp"
#include "lure/matrix_cones.hpp"
#include "lure/ozf_multiplier.hpp"
#include "lure/report_io.hpp"

using namespace lure;

namespace {

StateSpaceSystem example(bool odd) {
  return report::load_system(std::string(LURE_DATA_DIR) + (odd ? "/lure_odd_4ch.json" : "/lure_slope_4ch.json"));
}

void BM_SolvePrimal(benchmark::State& state) {
  const bool odd = state.range(0) != 0;
  const auto sys = example(odd);
  const auto problem = lmi::build_primal(sys, {odd ? lmi::LmiKind::PrimalDD : lmi::LmiKind::PrimalDHD, true});
  for (auto _ : state) benchmark::DoNotOptimize(sdp::solve(problem));
}
BENCHMARK(BM_SolvePrimal)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_SolveDual(benchmark::State& state) {
  const bool odd = state.range(0) != 0;
  const auto sys = example(odd);
  const auto problem = lmi::build_dual(sys, {odd ? lmi::LmiKind::DualDD : lmi::LmiKind::DualDHD, true});
  for (auto _ : state) benchmark::DoNotOptimize(sdp::solve(problem));
}
BENCHMARK(BM_SolveDual)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_Analyze(benchmark::State& state) {
  const auto sys = example(state.range(0) != 0);
  for (auto _ : state) benchmark::DoNotOptimize(report::analyze(sys));
}
BENCHMARK(BM_Analyze)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_MultiplierForm(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const Matrix M = cones::random_member(cones::ConeTag::DD, m, 7);
  const auto mult = ozf::build_multiplier(M, SlopeBand(0.0, 1.0));
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n;
  Vector zeta(m), w(m);
  for (int i = 0; i < m; ++i) {
    zeta(i) = n(rng);
    w(i) = 0.5 * zeta(i);
  }
  for (auto _ : state) benchmark::DoNotOptimize(ozf::quad_form(mult, zeta, w));
}
BENCHMARK(BM_MultiplierForm)->Arg(1)->Arg(4)->Arg(16);

}  // namespace

BENCHMARK_MAIN();
