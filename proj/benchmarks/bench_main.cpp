#include <benchmark/benchmark.h>

#include "gkv/fstructure.hpp"
#include "gkv/immersion.hpp"
#include "gkv/subman.hpp"
#include "gkv/zoo.hpp"

using namespace gkv;

static void BM_JetProduct(benchmark::State& state) {
  const auto v = Jet::seed_all(Vec{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7}, int(state.range(0)));
  for (auto _ : state) {
    Jet acc = v[0];
    for (std::size_t i = 1; i < v.size(); ++i) acc = acc * v[i] + v[i - 1];
    benchmark::DoNotOptimize(acc);
  }
}
BENCHMARK(BM_JetProduct)->DenseRange(1, 4);

static void BM_Example1Curvature(benchmark::State& state) {
  const auto fs = example1();
  const Vec p = {0.1, -0.2, 0.3, 0.05, 0.2, -0.1, 0.4};
  for (auto _ : state) benchmark::DoNotOptimize(riemann(fs->base(), p));
}
BENCHMARK(BM_Example1Curvature);

static void BM_StructureJets(benchmark::State& state) {
  const auto fs = example1();
  const Vec p = {0.1, -0.2, 0.3, 0.05, 0.2, -0.1, 0.4};
  for (auto _ : state) {
    StructureJets sj(*fs, p, int(state.range(0)));
    benchmark::DoNotOptimize(sj.g);
  }
}
BENCHMARK(BM_StructureJets)->DenseRange(2, 3);

static void BM_InduceGraph(benchmark::State& state) {
  const auto g = holomorphic_graph();
  const Vec p = {0.2, -0.1, 0.3, 0.1, -0.2};
  for (auto _ : state) benchmark::DoNotOptimize(induce(*g, p, {.order = int(state.range(0))}));
}
BENCHMARK(BM_InduceGraph)->DenseRange(2, 3);

static void BM_KenmotsuCheck(benchmark::State& state) {
  const auto fs = example1();
  RunOptions opt;
  opt.points = std::size_t(state.range(0));
  opt.threads = 1;
  for (auto _ : state) benchmark::DoNotOptimize(check_kenmotsu_nabla_phi(*fs, opt));
}
BENCHMARK(BM_KenmotsuCheck)->Arg(10)->Unit(benchmark::kMillisecond);

static void BM_Section4Example2(benchmark::State& state) {
  const auto ex2 = example2();
  RunOptions opt;
  opt.points = 5;
  opt.threads = 1;
  for (auto _ : state) benchmark::DoNotOptimize(check_section4(*ex2, opt));
}
BENCHMARK(BM_Section4Example2)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
