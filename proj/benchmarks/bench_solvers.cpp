#include <benchmark/benchmark.h>

#include <cmath>

#include <memory>

#include "plandis/model_graphs.hpp"
#include "plandis/operators.hpp"
#include "plandis/solvers.hpp"

namespace {

using namespace plandis;

void BM_DirichletSolveTreeBall(benchmark::State& state) {
  const int R = static_cast<int>(state.range(0));
  const double p = static_cast<double>(state.range(1)) / 10.0;
  const ModelGraphSpec spec = ModelGraphSpec::regular_tree(2, R);
  auto g = std::make_shared<WeightedGraph>(realize(spec));
  const SchrodingerOperator op = SchrodingerOperator::with_constant_potential(g, p, 1.0);
  const double beta = tree_beta(p, 2);
  VertexFunction boundary(g->n(), 0.0);
  for (VertexId x = 0; static_cast<std::size_t>(x) < g->n(); ++x) {
    if (!g->is_interior(x)) boundary[x] = std::pow(beta, g->depth(x));
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(dirichlet_solve(op, boundary));
  }
}
BENCHMARK(BM_DirichletSolveTreeBall)
    ->Args({6, 20})
    ->Args({6, 15})
    ->Args({6, 30})
    ->Args({8, 20})
    ->Unit(benchmark::kMillisecond);

void BM_RadialGreenExhaustion(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const ModelGraphSpec spec = ModelGraphSpec::regular_tree(d, 20);
  for (auto _ : state) {
    benchmark::DoNotOptimize(radial_green_exhaustion(spec, 2.0, 1.0, {12, 16, 20}));
  }
}
BENCHMARK(BM_RadialGreenExhaustion)->Arg(2)->Arg(3)->Unit(benchmark::kMicrosecond);

void BM_TreeBeta(benchmark::State& state) {
  const double p = static_cast<double>(state.range(0)) / 10.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(tree_beta(p, 3));
  }
}
BENCHMARK(BM_TreeBeta)->Arg(15)->Arg(20)->Arg(30)->Unit(benchmark::kMicrosecond);

void BM_EnergyOnTreeBall(benchmark::State& state) {
  const ModelGraphSpec spec = ModelGraphSpec::regular_tree(2, static_cast<int>(state.range(0)));
  auto g = std::make_shared<WeightedGraph>(realize(spec));
  const SchrodingerOperator op = SchrodingerOperator::p_laplacian(g, 2.5);
  VertexFunction phi(g->n(), 0.0);
  for (const VertexId x : g->decomposition().interior) {
    phi[x] = 1.0 / (1.0 + g->depth(x));
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(energy(op, phi));
  }
}
BENCHMARK(BM_EnergyOnTreeBall)->Arg(8)->Arg(10)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
