#include <algorithm>
#include <chrono>
#include <exception>
#include <numeric>
#include <stdexcept>

#include "rmnd/aco.hpp"

namespace rmnd::aco {

std::vector<int> construction_order(const Instance& instance, int t) {
  std::vector<int> order(instance.num_commodities());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return instance.commodities[a].nominal_demand[t] > instance.commodities[b].nominal_demand[t];
  });
  return order;
}

RoutingState construct_routing(const Instance& instance, const PheromoneTable& table, double alpha,
                               const AttractivenessEvaluator& evaluator, std::mt19937_64& rng) {
  RoutingState routing(instance);
  AttractivenessEvaluator::Workspace ws;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int t = 0; t < instance.num_periods; ++t) {
    for (int c : construction_order(instance, t)) {
      const int P = instance.num_paths(c);
      // Each move draws once so the random stream does not depend on P.
      const double u = unit(rng);
      if (P == 1) {
        routing.assign(c, t, 0);
        continue;
      }
      std::vector<double> trails(P);
      for (int p = 0; p < P; ++p) trails[p] = table.trail(c, p, t);
      const std::vector<double> scores =
          alpha == 1.0 ? std::vector<double>(P, 0.0) : normalize_scores(evaluator.raw_values(routing, c, t, ws));
      const std::vector<double> prob = move_probabilities(trails, scores, alpha);
      int chosen = P - 1;
      double acc = 0.0;
      for (int p = 0; p < P; ++p) {
        acc += prob[p];
        if (u < acc && prob[p] > 0.0) {
          chosen = p;
          break;
        }
      }
      while (prob[chosen] <= 0.0 && chosen > 0) --chosen;
      routing.assign(c, t, chosen);
    }
  }
  return routing;
}

std::mt19937_64 ant_engine(std::uint64_t seed, long iteration, int ant) {
  const auto it = static_cast<std::uint64_t>(iteration);
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(it), static_cast<std::uint32_t>(it >> 32),
                    static_cast<std::uint32_t>(ant)};
  return std::mt19937_64(seq);
}

namespace {

// Runs body(i) for i in [0, n), rethrowing the first exception on the caller.
template <class Body>
void for_each_index(int n, Execution execution, Body&& body) {
  if (execution == Execution::kSerial) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::exception_ptr> errors(n);
#pragma omp parallel for schedule(dynamic, 1)
  for (int i = 0; i < n; ++i) {
    try {
      body(i);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace

std::vector<AntSolution> construct_ants(const Instance& instance, const PheromoneTable& table,
                                        const AntParameters& params, const AttractivenessEvaluator& evaluator,
                                        long iteration, Execution execution) {
  params.validate();
  std::vector<AntSolution> out(params.num_ants);
  for_each_index(params.num_ants, execution, [&](int a) {
    std::mt19937_64 rng = ant_engine(params.seed, iteration, a);
    out[a].routing = construct_routing(instance, table, params.alpha, evaluator, rng);
    out[a].cost = model::evaluate_routing(instance, out[a].routing).cost;
  });
  return out;
}

std::vector<model::Solution> evaluate_batch(const Instance& instance, std::span<const RoutingState> routings,
                                            Execution execution) {
  std::vector<model::Solution> out(routings.size());
  for_each_index(static_cast<int>(routings.size()), execution,
                 [&](int i) { out[i] = model::evaluate_routing(instance, routings[i]); });
  return out;
}

ColonyResult run_colony(const Instance& instance, const ColonyOptions& options,
                        const model::RootRelaxation& relaxation,
                        const std::function<void(const IterationRecord&)>& observer,
                        const IterationHook& after_iteration) {
  options.ants.validate();
  if (!(options.time_limit > 0.0)) throw std::invalid_argument("time limit must be positive");
  const auto start = std::chrono::steady_clock::now();
  const auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(); };

  ColonyResult result{{}, 0, 0.0, init_trails(instance, relaxation, options.ants.window)};
  const AttractivenessEvaluator evaluator(instance, options.attractiveness);
  result.best.cost = lp::kInf;
  do {
    const std::vector<AntSolution> ants =
        construct_ants(instance, result.table, options.ants, evaluator, result.iterations, options.execution);
    for (const auto& ant : ants)
      if (ant.cost < result.best.cost) result.best = model::evaluate_routing(instance, ant.routing);
    const double zbar = update_trails(result.table, ants);
    if (observer)
      for (int a = 0; a < static_cast<int>(ants.size()); ++a)
        observer({result.iterations, a, ants[a].cost, zbar, result.best.cost, elapsed()});
    ++result.iterations;
    if (after_iteration) after_iteration(result.iterations, result.best);
  } while (elapsed() < options.time_limit &&
           (options.max_iterations < 0 || result.iterations < options.max_iterations));

  result.elapsed = elapsed();
  result.best.lower_bound = relaxation.bound;
  result.best.gap = mip::gap_percent(result.best.cost, relaxation.bound);
  return result;
}

}  // namespace rmnd::aco
