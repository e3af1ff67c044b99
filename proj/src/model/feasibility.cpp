#include <algorithm>
#include <cmath>

#include "rmnd/model.hpp"

namespace rmnd::model {

bool FeasibilityReport::has(std::string_view kind) const {
  return std::any_of(violations.begin(), violations.end(), [&](const Violation& v) { return v.kind == kind; });
}

FeasibilityReport check_feasible(const Instance& instance, std::span<const double> point, double tol) {
  const VariableIndex index(instance, true);
  if (static_cast<int>(point.size()) != index.size())
    throw ModelError("dimension mismatch: instance has " + std::to_string(index.size()) + " columns, point has " +
                     std::to_string(point.size()));
  FeasibilityReport report;
  auto flag = [&](const char* kind, std::string where, double magnitude) {
    report.violations.push_back({kind, std::move(where), magnitude});
  };
  const int C = instance.num_commodities();
  const int E = instance.num_edges();
  const int T = instance.num_periods;
  const int K = instance.num_bands();

  for (int j = 0; j < index.size(); ++j) {
    const double v = point[j];
    const ColumnInfo info = index.describe(j);
    if (!std::isfinite(v)) {
      flag("bound", index.name(j), lp::kInf);
      continue;
    }
    if (v < -tol) flag("bound", index.name(j), -v);
    if (info.block == Block::kX && v > 1.0 + tol) flag("bound", index.name(j), v - 1.0);
    if (info.block == Block::kX || info.block == Block::kY) {
      const double frac = std::abs(v - std::round(v));
      if (frac > tol) flag("integrality", index.name(j), frac);
    }
  }

  for (int c = 0; c < C; ++c)
    for (int t = 0; t < T; ++t) {
      double sum = 0.0;
      for (int p = 0; p < instance.num_paths(c); ++p) sum += point[index.x(c, p, t)];
      if (std::abs(sum - 1.0) > tol)
        flag("single-path", "route[" + instance.commodities[c].id + "," + std::to_string(t) + "]",
             std::abs(sum - 1.0));
    }

  for (int e = 0; e < E; ++e) {
    const std::string& eid = instance.network.edges[e].id;
    for (int c = 0; c < C; ++c)
      for (int p = 0; p < instance.num_paths(c); ++p) {
        const Path& path = instance.paths[c][p];
        if (std::find(path.begin(), path.end(), e) == path.end()) continue;
        for (int t = 0; t < T; ++t)
          for (int k = 1; k <= K; ++k) {
            const double delta = instance.commodities[c].deviation(t, k);
            const double lhs = point[index.w(e, t, k)] + point[index.z(e, c, p, t)];
            const double rhs = delta * point[index.x(c, p, t)];
            if (lhs < rhs - tol * std::max(1.0, delta))
              flag("dual",
                   "dual[" + eid + "," + instance.commodities[c].id + "," + std::to_string(p) + "," +
                       std::to_string(t) + "," + std::to_string(k) + "]",
                   rhs - lhs);
          }
      }
    double installed = 0.0;
    for (int t = 0; t < T; ++t) {
      installed += point[index.y(e, t)];
      double demand = 0.0;
      double scale = instance.module_capacity;
      for (int c = 0; c < C; ++c)
        for (int p = 0; p < instance.num_paths(c); ++p) {
          const Path& path = instance.paths[c][p];
          if (std::find(path.begin(), path.end(), e) == path.end()) continue;
          const double d = instance.commodities[c].nominal_demand[t];
          demand += d * point[index.x(c, p, t)] + point[index.z(e, c, p, t)];
          scale = std::max(scale, d);
        }
      for (int k = 1; k <= K; ++k) demand += instance.uncertainty.count(e, t, k) * point[index.w(e, t, k)];
      const double capacity = instance.module_capacity * installed;
      if (demand > capacity + tol * scale)
        flag("capacity", "cap[" + eid + "," + std::to_string(t) + "]", demand - capacity);
    }
  }

  // Formulation-independent cross-check on the encoded routing.
  if (const auto routing = routing_from_point(instance, index, point, tol); routing) {
    report.oracle_checked = true;
    const auto loads = worst_case_loads(instance, *routing);
    const CapacitySchedule schedule = schedule_from_point(instance, index, point);
    for (int e = 0; e < E; ++e)
      for (int t = 0; t < T; ++t) {
        const double capacity = instance.module_capacity * schedule.cumulative[e][t];
        if (loads[e][t] > capacity + tol * std::max(1.0, loads[e][t]))
          flag("worst-case", "cap[" + instance.network.edges[e].id + "," + std::to_string(t) + "]",
               loads[e][t] - capacity);
      }
  }
  return report;
}

}  // namespace rmnd::model
