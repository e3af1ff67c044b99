#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "rmnd/aco.hpp"

namespace rmnd::aco {

void AntParameters::validate() const {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha must lie in [0, 1]");
  if (num_ants < 1) throw std::invalid_argument("at least one ant is required");
  if (window < 1) throw std::invalid_argument("window must be at least 1");
}

PheromoneTable::PheromoneTable(const Instance& instance, std::vector<double> initial, double lower_bound, int window)
    : periods_(instance.num_periods), initial_(std::move(initial)), lower_bound_(lower_bound), capacity_(window) {
  if (window < 1) throw std::invalid_argument("window must be at least 1");
  int at = 0;
  for (int c = 0; c < instance.num_commodities(); ++c) {
    offset_.push_back(at);
    at += instance.num_paths(c) * periods_;
  }
  if (static_cast<int>(initial_.size()) != at) throw std::invalid_argument("one initial trail per move is required");
  for (double& v : initial_) v = std::max(v, kTrailFloor);
  trail_ = initial_;
}

void PheromoneTable::push_cost(double cost) {
  window_.push_back(cost);
  while (static_cast<int>(window_.size()) > capacity_) window_.pop_front();
}

std::optional<double> PheromoneTable::window_mean() const {
  if (window_.empty()) return std::nullopt;
  return std::accumulate(window_.begin(), window_.end(), 0.0) / static_cast<double>(window_.size());
}

PheromoneTable init_trails(const Instance& instance, const model::RootRelaxation& relaxation, int window) {
  const model::VariableIndex index(instance, true);
  if (static_cast<int>(relaxation.primal.size()) != index.size())
    throw model::ModelError("relaxation does not match the instance");
  std::vector<double> initial(relaxation.primal.begin(), relaxation.primal.begin() + index.num_x());
  return PheromoneTable(instance, std::move(initial), relaxation.bound, window);
}

PheromoneTable init_trails(const Instance& instance, int window) {
  return init_trails(instance, model::relax_robust(instance), window);
}

double update_trails(PheromoneTable& table, std::span<const AntSolution> ants) {
  if (ants.empty()) throw std::invalid_argument("update_trails needs at least one solution");
  if (table.window().empty()) table.push_cost(ants.front().cost);
  const double zbar = *table.window_mean();
  const double lb = table.lower_bound();
  const bool degenerate = std::abs(zbar - lb) <= 1e-12 * std::max(1.0, std::abs(lb));
  for (const auto& ant : ants) {
    const double factor = degenerate ? 0.0 : 1.0 - (ant.cost - lb) / (zbar - lb);
    if (factor == 0.0) continue;
    for (const Move& m : ant.routing.moves())
      table.set_trail(m.commodity, m.path, m.period,
                      table.trail(m.commodity, m.path, m.period) + table.initial(m.commodity, m.path, m.period) * factor);
  }
  for (const auto& ant : ants)
    for (const Move& m : ant.routing.moves())
      table.set_trail(m.commodity, m.path, m.period,
                      std::max(kTrailFloor, table.trail(m.commodity, m.path, m.period)));
  for (const auto& ant : ants) table.push_cost(ant.cost);
  return zbar;
}

}  // namespace rmnd::aco
