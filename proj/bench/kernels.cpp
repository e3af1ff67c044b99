// Serial against OpenMP for the two per-iteration kernels of the ant phase.
#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "rmnd/aco.hpp"
#include "rmnd/model.hpp"
#include "rmnd/sndlib.hpp"

namespace {

using namespace rmnd;

// An n-by-n grid; demands join opposite nodes.
std::string grid_sndlib(int n) {
  auto node = [](int r, int c) { return "N" + std::to_string(r) + "_" + std::to_string(c); };
  std::string s = "NODES (\n";
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) s += "  " + node(r, c) + " ( 0 0 )\n";
  s += ")\nLINKS (\n";
  int id = 0;
  auto link = [&](const std::string& a, const std::string& b) {
    s += "  L" + std::to_string(id) + " ( " + a + " " + b + " ) 0 0 0 0 ( 40 " + std::to_string(2 + id % 5) + " )\n";
    ++id;
  };
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      if (c + 1 < n) link(node(r, c), node(r, c + 1));
      if (r + 1 < n) link(node(r, c), node(r + 1, c));
    }
  s += ")\nDEMANDS (\n";
  // Each node in the first half pairs with its point reflection.
  for (int i = 0; i < n * n / 2; ++i) {
    const int r = i / n, c = i % n;
    s += "  D" + std::to_string(i) + " ( " + node(r, c) + " " + node(n - 1 - r, n - 1 - c) + " ) 1 " +
         std::to_string(10 + 3 * (i % 7)) + " UNLIMITED\n";
  }
  return s + ")\n";
}

struct Fixture {
  Instance instance;
  model::RootRelaxation relaxation;
  aco::PheromoneTable table;
  aco::AntParameters params;

  static Fixture& get() {
    static Fixture f = [] {
      GeneratorOptions g;
      g.periods = 2;
      g.bands = 2;
      g.paths = 3;
      g.growth = 1.2;
      g.name = "grid";
      Instance in = generate_multiperiod(parse_sndlib(grid_sndlib(4)), g);
      auto relax = model::relax_robust(in);
      aco::AntParameters p;
      p.num_ants = 8;
      p.window = 8;
      auto table = aco::init_trails(in, relax, p.window);
      return Fixture{std::move(in), std::move(relax), std::move(table), p};
    }();
    return f;
  }
};

aco::Execution execution(const benchmark::State& state) {
  return state.range(0) == 0 ? aco::Execution::kSerial : aco::Execution::kParallel;
}

void construct(benchmark::State& state, aco::Attractiveness mode) {
  Fixture& f = Fixture::get();
  const aco::AttractivenessEvaluator evaluator(f.instance, mode);
  long iteration = 0;
  for (auto _ : state) {
    auto ants = aco::construct_ants(f.instance, f.table, f.params, evaluator, iteration++, execution(state));
    benchmark::DoNotOptimize(ants);
  }
  state.SetLabel(state.range(0) == 0 ? "serial" : "openmp");
}

void BM_ConstructSurrogate(benchmark::State& state) { construct(state, aco::Attractiveness::kSurrogate); }
void BM_ConstructExactLp(benchmark::State& state) { construct(state, aco::Attractiveness::kExactLp); }

void BM_EvaluateBatch(benchmark::State& state) {
  Fixture& f = Fixture::get();
  const aco::AttractivenessEvaluator evaluator(f.instance, aco::Attractiveness::kSurrogate);
  std::vector<RoutingState> routings;
  for (auto& ant : aco::construct_ants(f.instance, f.table, f.params, evaluator, 0, aco::Execution::kSerial))
    routings.push_back(std::move(ant.routing));
  for (auto _ : state) {
    auto solutions = aco::evaluate_batch(f.instance, routings, execution(state));
    benchmark::DoNotOptimize(solutions);
  }
  state.SetLabel(state.range(0) == 0 ? "serial" : "openmp");
}

}  // namespace

BENCHMARK(BM_ConstructSurrogate)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ConstructExactLp)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EvaluateBatch)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
