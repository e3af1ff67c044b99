#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "rmnd/model.hpp"

namespace rmnd::model {

namespace {

double assignment_value(const std::vector<std::vector<double>>& deviations, const std::vector<int>& band_of) {
  double value = 0.0;
  for (std::size_t i = 0; i < band_of.size(); ++i)
    if (band_of[i] > 0) value += deviations[i][band_of[i] - 1];
  return value;
}

// Every commodity in its own best band; true when the counts allow it.
bool greedy_assignment(const std::vector<std::vector<double>>& deviations, std::span<const int> counts,
                       DeviationResult& out) {
  const int K = static_cast<int>(counts.size());
  std::vector<int> used(K, 0);
  bool ok = true;
  for (std::size_t i = 0; i < deviations.size(); ++i) {
    int best = 0;
    double best_value = 0.0;
    for (int k = 1; k <= K; ++k)
      if (deviations[i][k - 1] > best_value) {
        best_value = deviations[i][k - 1];
        best = k;
      }
    out.band_of[i] = best;
    out.commodity_multiplier[i] = best_value;
    if (best > 0 && ++used[best - 1] > counts[best - 1]) ok = false;
  }
  if (ok) out.value = assignment_value(deviations, out.band_of);
  return ok;
}

DeviationResult empty_result(int n, int K) {
  DeviationResult out;
  out.band_multiplier.assign(K, 0.0);
  out.commodity_multiplier.assign(n, 0.0);
  out.band_of.assign(n, 0);
  return out;
}

void fill_commodity_multipliers(const std::vector<std::vector<double>>& deviations, DeviationResult& out) {
  const int K = static_cast<int>(out.band_multiplier.size());
  for (std::size_t i = 0; i < deviations.size(); ++i) {
    double z = 0.0;
    for (int k = 0; k < K; ++k) z = std::max(z, deviations[i][k] - out.band_multiplier[k]);
    out.commodity_multiplier[i] = z;
  }
}

bool certified(std::span<const int> counts, const DeviationResult& out) {
  double dual = 0.0;
  for (std::size_t k = 0; k < counts.size(); ++k) dual += counts[k] * out.band_multiplier[k];
  for (double z : out.commodity_multiplier) dual += z;
  return std::abs(dual - out.value) <= 1e-9 * std::max(1.0, std::abs(out.value));
}

}  // namespace

DeviationResult max_deviation_lp(const std::vector<std::vector<double>>& deviations, std::span<const int> counts) {
  const int n = static_cast<int>(deviations.size());
  const int K = static_cast<int>(counts.size());
  DeviationResult out = empty_result(n, K);
  if (n == 0 || K == 0) return out;

  // max sum delta u, sum_k u_ik <= 1, sum_i u_ik <= theta_k. u <= 1 is implied
  // by the commodity row, so the row duals alone are dual feasible.
  lp::LinearProgram model;
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < K; ++k) model.add_variable(-deviations[i][k], 0.0, lp::kInf);
  for (int i = 0; i < n; ++i) {
    std::vector<lp::Entry> row;
    for (int k = 0; k < K; ++k) row.push_back({i * K + k, 1.0});
    model.add_row(std::move(row), lp::Sense::kLessEqual, 1.0);
  }
  for (int k = 0; k < K; ++k) {
    std::vector<lp::Entry> row;
    for (int i = 0; i < n; ++i) row.push_back({i * K + k, 1.0});
    model.add_row(std::move(row), lp::Sense::kLessEqual, static_cast<double>(counts[k]));
  }
  const lp::LpSolution sol = lp::solve_lp(model);
  if (!sol.optimal()) throw ModelError("deviation assignment LP failed: " + lp::to_string(sol.status));

  std::vector<int> used(K, 0);
  bool integral = true;
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < K; ++k) {
      const double u = sol.primal[i * K + k];
      if (u > 0.5) {
        out.band_of[i] = k + 1;
        ++used[k];
      }
      if (std::abs(u - std::round(u)) > 1e-6) integral = false;
    }
  for (int k = 0; k < K; ++k)
    if (used[k] > counts[k]) integral = false;
  out.value = integral ? assignment_value(deviations, out.band_of) : -sol.objective;
  for (int k = 0; k < K; ++k) out.band_multiplier[k] = std::max(0.0, -sol.dual[n + k]);
  fill_commodity_multipliers(deviations, out);
  return out;
}

DeviationResult max_deviation(const std::vector<std::vector<double>>& deviations, std::span<const int> counts) {
  const int n = static_cast<int>(deviations.size());
  const int K = static_cast<int>(counts.size());
  DeviationResult out = empty_result(n, K);
  if (n == 0 || K == 0) return out;
  if (greedy_assignment(deviations, counts, out)) return out;

  // Successive longest augmenting paths on the collapsed residual graph with
  // nodes source (index K) and bands 0..K-1. An arc source->k places an
  // unassigned commodity into k; an arc k->l moves a commodity from k to l.
  // A path may end in any band with spare capacity.
  std::fill(out.band_of.begin(), out.band_of.end(), 0);
  std::vector<int> used(K, 0);
  const int S = K;
  constexpr double kNone = -std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> gain(K + 1, std::vector<double>(K, kNone));
  std::vector<std::vector<int>> via(K + 1, std::vector<int>(K, -1));
  auto build_arcs = [&]() {
    for (auto& row : gain) std::fill(row.begin(), row.end(), kNone);
    for (int i = 0; i < n; ++i) {
      const int from = out.band_of[i] == 0 ? S : out.band_of[i] - 1;
      const double base = from == S ? 0.0 : deviations[i][from];
      for (int k = 0; k < K; ++k) {
        if (k == from) continue;
        const double g = deviations[i][k] - base;
        if (g > gain[from][k]) {
          gain[from][k] = g;
          via[from][k] = i;
        }
      }
    }
  };
  // Longest distances from the source by Bellman-Ford; the residual graph has
  // no positive cycle after each shortest augmentation.
  std::vector<double> dist(K);
  std::vector<int> parent(K);
  auto longest_paths = [&](std::span<const double> start) {
    for (int k = 0; k < K; ++k) {
      dist[k] = start[k];
      parent[k] = S;
    }
    for (int round = 0; round < K; ++round) {
      bool changed = false;
      for (int a = 0; a < K; ++a) {
        if (dist[a] == kNone) continue;
        for (int b = 0; b < K; ++b) {
          if (gain[a][b] == kNone) continue;
          if (dist[a] + gain[a][b] > dist[b] + 1e-12) {
            dist[b] = dist[a] + gain[a][b];
            parent[b] = a;
            changed = true;
          }
        }
      }
      if (!changed) break;
    }
  };

  const int limit = std::min(n, std::accumulate(counts.begin(), counts.end(), 0));
  for (int step = 0; step < limit; ++step) {
    build_arcs();
    longest_paths(gain[S]);
    int end = -1;
    for (int k = 0; k < K; ++k)
      if (used[k] < counts[k] && dist[k] != kNone && (end < 0 || dist[k] > dist[end] + 1e-12)) end = k;
    if (end < 0 || dist[end] <= 1e-12) break;
    // Walk back and apply the moves; the chain visits each band at most once.
    std::vector<std::pair<int, int>> moves;  // (commodity, new band)
    for (int b = end; b != S;) {
      const int a = parent[b];
      moves.emplace_back(via[a][b], b);
      b = a;
    }
    for (auto [i, b] : moves) out.band_of[i] = b + 1;
    ++used[end];
  }
  out.value = assignment_value(deviations, out.band_of);

  // Least w satisfying the complementary-slackness difference system:
  // w_k >= delta_ik for unassigned i, w_l >= w_k + (delta_il - delta_ik) for i in k.
  build_arcs();
  std::vector<double> start(K);
  for (int k = 0; k < K; ++k) start[k] = std::max(0.0, gain[S][k]);
  longest_paths(start);
  for (int k = 0; k < K; ++k) out.band_multiplier[k] = std::max(0.0, dist[k]);
  fill_commodity_multipliers(deviations, out);
  if (!certified(counts, out)) {
    DeviationResult ref = max_deviation_lp(deviations, counts);
    out.band_multiplier = std::move(ref.band_multiplier);
    out.commodity_multiplier = std::move(ref.commodity_multiplier);
  }
  return out;
}

namespace {

// On-edge commodity lists per edge for period t, in commodity order.
std::vector<std::vector<int>> users_by_edge(const Instance& instance, int t, const RoutingState& routing) {
  std::vector<std::vector<int>> users(instance.num_edges());
  for (int c = 0; c < instance.num_commodities(); ++c) {
    if (!routing.assigned(c, t)) continue;
    for (int e : instance.paths[c][routing.path(c, t)]) users[e].push_back(c);
  }
  return users;
}

DeviationResult deviation_of(const Instance& instance, int e, int t, const std::vector<int>& users) {
  const int K = instance.num_bands();
  std::vector<std::vector<double>> deviations;
  deviations.reserve(users.size());
  for (int c : users) {
    const auto& bands = instance.commodities[c].band_deviation[t];
    deviations.emplace_back(bands.begin() + 1, bands.begin() + 1 + K);
  }
  return max_deviation(deviations, instance.uncertainty.theta[e][t]);
}

double nominal_of(const Instance& instance, int t, const std::vector<int>& users) {
  double load = 0.0;
  for (int c : users) load += instance.commodities[c].nominal_demand[t];
  return load;
}

std::vector<int> users_on(const Instance& instance, int e, int t, const RoutingState& routing) {
  std::vector<int> users;
  for (int c = 0; c < instance.num_commodities(); ++c) {
    if (!routing.assigned(c, t)) continue;
    const Path& path = instance.paths[c][routing.path(c, t)];
    if (std::find(path.begin(), path.end(), e) != path.end()) users.push_back(c);
  }
  return users;
}

}  // namespace

double nominal_load(const Instance& instance, int e, int t, const RoutingState& routing) {
  return nominal_of(instance, t, users_on(instance, e, t, routing));
}

DeviationResult edge_deviation(const Instance& instance, int e, int t, const RoutingState& routing) {
  return deviation_of(instance, e, t, users_on(instance, e, t, routing));
}

double worst_case_load(const Instance& instance, int e, int t, const RoutingState& routing) {
  const auto users = users_on(instance, e, t, routing);
  return nominal_of(instance, t, users) + deviation_of(instance, e, t, users).value;
}

std::vector<std::vector<double>> worst_case_loads(const Instance& instance, const RoutingState& routing) {
  std::vector<std::vector<double>> loads(instance.num_edges(), std::vector<double>(instance.num_periods, 0.0));
  for (int t = 0; t < instance.num_periods; ++t) {
    const auto users = users_by_edge(instance, t, routing);
    for (int e = 0; e < instance.num_edges(); ++e) {
      if (users[e].empty()) continue;
      loads[e][t] = nominal_of(instance, t, users[e]) + deviation_of(instance, e, t, users[e]).value;
    }
  }
  return loads;
}

int modules_needed(double load, double capacity) {
  if (!(load > 0.0)) return 0;
  return std::max(0, static_cast<int>(std::ceil(load / capacity - 1e-9)));
}

EdgeSchedule schedule_edge(std::span<const double> loads, std::span<const double> costs, double capacity) {
  const int T = static_cast<int>(loads.size());
  EdgeSchedule out;
  out.installs.assign(T, 0);
  out.cumulative.assign(T, 0);
  int required = 0;
  int cheapest = 0;
  for (int t = 0; t < T; ++t) {
    // Equal costs defer the purchase to the period that needs it.
    if (costs[t] <= costs[cheapest]) cheapest = t;
    const int r = std::max(required, modules_needed(loads[t], capacity));
    out.installs[cheapest] += r - required;
    out.cost += (r - required) * costs[cheapest];
    required = r;
  }
  int running = 0;
  for (int t = 0; t < T; ++t) {
    running += out.installs[t];
    out.cumulative[t] = running;
  }
  return out;
}

CapacitySchedule derive_schedule(const Instance& instance, const std::vector<std::vector<double>>& loads) {
  CapacitySchedule s;
  for (int e = 0; e < instance.num_edges(); ++e) {
    EdgeSchedule es = schedule_edge(loads[e], instance.module_cost[e], instance.module_capacity);
    s.installs.push_back(std::move(es.installs));
    s.cumulative.push_back(std::move(es.cumulative));
  }
  return s;
}

double schedule_cost(const Instance& instance, const CapacitySchedule& schedule) {
  double cost = 0.0;
  for (int e = 0; e < instance.num_edges(); ++e)
    for (int t = 0; t < instance.num_periods; ++t) cost += instance.module_cost[e][t] * schedule.installs[e][t];
  return cost;
}

Solution evaluate_routing(const Instance& instance, const RoutingState& routing) {
  if (!routing.consistent_with(instance)) throw ModelError("routing does not match the instance");
  if (!routing.complete()) throw ModelError("routing is incomplete");
  Solution s;
  s.routing = routing;
  s.schedule = derive_schedule(instance, worst_case_loads(instance, routing));
  s.cost = schedule_cost(instance, s.schedule);
  return s;
}

std::vector<double> expand_point(const Instance& instance, const VariableIndex& index, const RoutingState& routing) {
  const Solution sol = evaluate_routing(instance, routing);
  std::vector<double> point(index.size(), 0.0);
  for (int c = 0; c < instance.num_commodities(); ++c)
    for (int t = 0; t < instance.num_periods; ++t) point[index.x(c, routing.path(c, t), t)] = 1.0;
  for (int e = 0; e < instance.num_edges(); ++e)
    for (int t = 0; t < instance.num_periods; ++t) point[index.y(e, t)] = sol.schedule.installs[e][t];
  if (!index.robust()) return point;
  for (int t = 0; t < instance.num_periods; ++t) {
    const auto users = users_by_edge(instance, t, routing);
    for (int e = 0; e < instance.num_edges(); ++e) {
      if (users[e].empty()) continue;
      const DeviationResult dev = deviation_of(instance, e, t, users[e]);
      for (int k = 1; k <= instance.num_bands(); ++k) point[index.w(e, t, k)] = dev.band_multiplier[k - 1];
      for (std::size_t i = 0; i < users[e].size(); ++i) {
        const int c = users[e][i];
        point[index.z(e, c, routing.path(c, t), t)] = dev.commodity_multiplier[i];
      }
    }
  }
  return point;
}

std::optional<RoutingState> routing_from_point(const Instance& instance, const VariableIndex& index,
                                               std::span<const double> point, double tolerance) {
  if (static_cast<int>(point.size()) != index.size()) throw ModelError("point dimension mismatch");
  RoutingState routing(instance);
  for (int c = 0; c < instance.num_commodities(); ++c)
    for (int t = 0; t < instance.num_periods; ++t) {
      int chosen = -1;
      for (int p = 0; p < instance.num_paths(c); ++p) {
        const double v = point[index.x(c, p, t)];
        if (std::abs(v - 1.0) <= tolerance) {
          if (chosen >= 0) return std::nullopt;
          chosen = p;
        } else if (std::abs(v) > tolerance) {
          return std::nullopt;
        }
      }
      if (chosen < 0) return std::nullopt;
      routing.assign(c, t, chosen);
    }
  return routing;
}

CapacitySchedule schedule_from_point(const Instance& instance, const VariableIndex& index,
                                     std::span<const double> point) {
  if (static_cast<int>(point.size()) != index.size()) throw ModelError("point dimension mismatch");
  CapacitySchedule s;
  for (int e = 0; e < instance.num_edges(); ++e) {
    std::vector<int> installs(instance.num_periods), cumulative(instance.num_periods);
    int running = 0;
    for (int t = 0; t < instance.num_periods; ++t) {
      installs[t] = static_cast<int>(std::lround(point[index.y(e, t)]));
      running += installs[t];
      cumulative[t] = running;
    }
    s.installs.push_back(std::move(installs));
    s.cumulative.push_back(std::move(cumulative));
  }
  return s;
}

}  // namespace rmnd::model
