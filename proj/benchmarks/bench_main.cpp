#include <benchmark/benchmark.h>

#include <vector>

#include "quasilab/dynamics.hpp"
#include "quasilab/lattice.hpp"
#include "quasilab/modelset.hpp"
#include "quasilab/riesz.hpp"

using namespace quasilab;

namespace {

AlgebraPtr algebra() {
  static const AlgebraPtr a = AlgebraSpec::sqrt2_sqrt3();
  return a;
}

QValue q(const char* s) { return QValue::parse(algebra(), s); }

RegionSet brs_union() { return RegionSet::parse_intervals(algebra(), "[0, w1 - 1) u [1, 3 - w1)"); }

}  // namespace

static void BM_AlgebraMultiply(benchmark::State& state) {
  const auto x = q("3/7 + 2*w1 - w2/5 + w3");
  const auto y = q("-1/3 + w1/11 + 4*w2 - 2*w3");
  for (auto _ : state) benchmark::DoNotOptimize(x * y);
}
BENCHMARK(BM_AlgebraMultiply);

static void BM_AlgebraInverse(benchmark::State& state) {
  const auto x = q("3/7 + 2*w1 - w2/5 + w3");
  for (auto _ : state) benchmark::DoNotOptimize(x.inverse());
}
BENCHMARK(BM_AlgebraInverse);

static void BM_AlgebraFloor(benchmark::State& state) {
  const auto x = q("123456789*w1 - 174594265*w2/1000");
  for (auto _ : state) benchmark::DoNotOptimize(x.floor());
}
BENCHMARK(BM_AlgebraFloor);

static void BM_FourierIndicator(benchmark::State& state) {
  const auto s = brs_union();
  double t = 0.37;
  for (auto _ : state) {
    benchmark::DoNotOptimize(ft_indicator(s, std::span<const double>(&t, 1)));
    t += 1e-3;
  }
}
BENCHMARK(BM_FourierIndicator);

static void BM_CutAndProject(benchmark::State& state) {
  const auto lat = make_special_lattice({q("w1"), q("w2")}, {q("1/2"), q("w1")});
  const auto w = RegionSet::parse_intervals(algebra(), "[0, 3/2)");
  const auto r = state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(cut_and_project(lat.gamma, w, IntBox::cube(2, r)));
}
BENCHMARK(BM_CutAndProject)->Arg(10)->Arg(40);

static void BM_GramAndEigs(benchmark::State& state) {
  const auto p = dual_model_points({q("w1")}, {q("1")}, brs_union(), -state.range(0), state.range(0));
  const auto s = RegionSet::parse_intervals(algebra(), "[0, 1)");
  for (auto _ : state) benchmark::DoNotOptimize(extreme_eigs(gram_matrix(p, s)));
  state.counters["points"] = static_cast<double>(p.size());
}
BENCHMARK(BM_GramAndEigs)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

static void BM_DiscrepancyTrace(benchmark::State& state) {
  const auto s = brs_union();
  for (auto _ : state) benchmark::DoNotOptimize(discrepancy_trace(s, {q("w1")}, {}, state.range(0), false));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_DiscrepancyTrace)->Arg(100000)->Unit(benchmark::kMillisecond);

static void BM_BrsEmpirical(benchmark::State& state) {
  const auto s = RegionSet::parse_intervals(algebra(), "[0, 1/2)");
  for (auto _ : state) benchmark::DoNotOptimize(brs_empirical(s, {q("w1")}, state.range(0), state.range(0) / 10));
}
BENCHMARK(BM_BrsEmpirical)->Arg(100000)->Unit(benchmark::kMillisecond);

static void BM_Bmo(benchmark::State& state) {
  const auto t = discrepancy_trace(brs_union(), {q("w1")}, {}, state.range(0), false);
  const auto lengths = dyadic_lengths(10);
  for (auto _ : state) benchmark::DoNotOptimize(bmo_stat(t.values, lengths));
}
BENCHMARK(BM_Bmo)->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
