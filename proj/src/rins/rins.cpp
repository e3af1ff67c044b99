#include "rmnd/rins.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

namespace rmnd::rins {

void RinsConfig::validate() const {
  if (!(epsilon >= 0.0 && epsilon < 0.5)) throw std::invalid_argument("epsilon must lie in [0, 0.5)");
  if (!(time_limit > 0.0)) throw std::invalid_argument("RINS time limit must be positive");
}

lp::Fixings compute_fixings(std::span<const double> incumbent_x, std::span<const double> relaxation_x,
                            double epsilon) {
  if (incumbent_x.size() != relaxation_x.size()) throw std::invalid_argument("x vectors differ in length");
  lp::Fixings fixed;
  for (std::size_t j = 0; j < incumbent_x.size(); ++j) {
    const double bar = std::round(incumbent_x[j]);
    if (std::abs(incumbent_x[j] - bar) > 1e-6 || (bar != 0.0 && bar != 1.0))
      throw std::invalid_argument("incumbent x must be binary");
    if (bar == 0.0 && relaxation_x[j] <= epsilon) fixed[static_cast<int>(j)] = 0.0;
    if (bar == 1.0 && relaxation_x[j] >= 1.0 - epsilon) fixed[static_cast<int>(j)] = 1.0;
  }
  return fixed;
}

RinsResult run_rins(const Instance& instance, const model::Solution& incumbent,
                    const model::RootRelaxation& relaxation, const RinsConfig& config) {
  config.validate();
  const model::VariableIndex index(instance, true);
  const std::vector<double> hint = model::expand_point(instance, index, incumbent.routing);
  const lp::Fixings fixings = compute_fixings(std::span(hint).first(index.num_x()),
                                              std::span(relaxation.primal).first(index.num_x()), config.epsilon);

  mip::MixedIntegerProgram sub = model::build_robust(instance);
  for (auto [j, v] : fixings) {
    if (hint[j] != v) throw std::logic_error("incumbent violates its own fixings");
    sub.lp.set_bounds(j, v, v);
  }
  mip::MipOptions opts;
  opts.time_limit = config.time_limit;
  const mip::MipResult res = mip::solve_mip(sub, opts, std::span<const double>(hint));
  if (res.status == mip::Status::kInfeasible) throw std::logic_error("fixed sub-MIP is infeasible");
  if (res.hint_rejected) throw std::logic_error("expanded incumbent rejected by the sub-MIP");

  RinsResult out{incumbent, {static_cast<int>(fixings.size()), res.nodes, 0.0, res.status}};
  if (res.has_incumbent()) {
    const auto routing = model::routing_from_point(instance, index, res.incumbent);
    if (!routing) throw std::logic_error("sub-MIP incumbent does not encode a routing");
    model::Solution candidate = model::evaluate_routing(instance, *routing);
    if (candidate.cost < incumbent.cost) out.solution = std::move(candidate);
  }
  // A fully solved, unrestricted search proves optimality.
  double bound = relaxation.bound;
  if (fixings.empty() && res.status == mip::Status::kOptimal) bound = std::max(bound, res.bound);
  out.solution.lower_bound = std::min(bound, out.solution.cost);
  out.solution.gap = mip::gap_percent(out.solution.cost, out.solution.lower_bound);
  out.report.improvement = incumbent.cost - out.solution.cost;
  return out;
}

RinsResult run_rins(const Instance& instance, const model::Solution& incumbent, const RinsConfig& config) {
  return run_rins(instance, incumbent, model::relax_robust(instance), config);
}

HybridResult run_hybrid(const Instance& instance, const HybridOptions& options,
                        const model::RootRelaxation& relaxation, const HybridObserver& observer) {
  options.rins.validate();
  if (options.rins_every < 0) throw std::invalid_argument("rins_every must be non-negative");
  const auto start = std::chrono::steady_clock::now();
  HybridResult out;

  aco::IterationHook hook;
  if (options.rins_every > 0)
    hook = [&](long iterations, model::Solution& best) {
      if (iterations % options.rins_every != 0) return;
      RinsResult r = run_rins(instance, best, relaxation, options.rins);
      out.intermediate.push_back(r.report);
      if (observer.on_rins) observer.on_rins(iterations, r.report, r.solution);
      best = std::move(r.solution);
    };
  aco::ColonyResult colony = run_colony(instance, options.colony, relaxation, observer.on_ant, hook);
  out.iterations = colony.iterations;
  out.aco_best = colony.best;

  RinsResult last = run_rins(instance, colony.best, relaxation, options.rins);
  out.final_rins = last.report;
  if (observer.on_rins) observer.on_rins(out.iterations, last.report, last.solution);
  out.best = std::move(last.solution);
  out.elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

}  // namespace rmnd::rins
