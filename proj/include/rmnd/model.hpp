// Nominal and robust formulations, exact routing evaluation, feasibility checks.
#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rmnd/instance.hpp"
#include "rmnd/mip.hpp"
#include "rmnd/routing.hpp"

namespace rmnd::model {

class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Block : std::uint8_t { kX, kY, kW, kZ };

struct ColumnInfo {
  Block block = Block::kX;
  int edge = -1;
  int commodity = -1;
  int path = -1;
  int period = -1;
  int band = -1;  // 1..K+
};

// Dense column catalog. Column order: x[c][p][t], y[e][t], then (robust only)
// w[e][t][k] and z for every (c, p, edge on p, t).
class VariableIndex {
 public:
  VariableIndex(const Instance& instance, bool robust);

  bool robust() const { return robust_; }
  int size() const { return total_; }
  int num_x() const { return y_base_; }

  int x(int c, int p, int t) const { return x_offset_[c] + p * periods_ + t; }
  int y(int e, int t) const { return y_base_ + e * periods_ + t; }
  int w(int e, int t, int k) const { return w_base_ + (e * periods_ + t) * bands_ + (k - 1); }
  // `position` is the index of the edge within path p.
  int z_at(int c, int p, int position, int t) const { return z_offset_[c][p] + position * periods_ + t; }
  // -1 when e is not on path p.
  int z(int e, int c, int p, int t) const;

  ColumnInfo describe(int column) const;
  std::string name(int column) const;

  // Commodity paths crossing edge e, as (commodity, path, position).
  struct Crossing {
    int commodity;
    int path;
    int position;
  };
  const std::vector<Crossing>& crossings(int e) const { return crossings_[e]; }

 private:
  PathSet paths_;
  std::vector<std::string> edge_ids_;
  std::vector<std::string> commodity_ids_;
  bool robust_;
  int periods_;
  int bands_;
  std::vector<int> x_offset_;
  int y_base_ = 0;
  int w_base_ = 0;
  int z_base_ = 0;
  std::vector<std::vector<int>> z_offset_;
  int total_ = 0;
  std::vector<std::vector<Crossing>> crossings_;
  std::vector<ColumnInfo> info_;
};

struct CapacitySchedule {
  std::vector<std::vector<int>> installs;    // [e][t]
  std::vector<std::vector<int>> cumulative;  // [e][t]

  bool operator==(const CapacitySchedule&) const = default;
};

struct Solution {
  RoutingState routing;
  CapacitySchedule schedule;
  double cost = 0.0;
  double lower_bound = -lp::kInf;
  double gap = lp::kInf;  // percent
};

mip::MixedIntegerProgram build_nominal(const Instance& instance);
mip::MixedIntegerProgram build_robust(const Instance& instance);

// Optimal LP relaxation of build_robust. The x block of `primal` uses the
// robust VariableIndex order.
struct RootRelaxation {
  double bound = 0.0;
  std::vector<double> primal;
  std::optional<lp::Basis> basis;
};
RootRelaxation relax_robust(const Instance& instance);

// Worst positive deviation of a set of commodities sharing one capacity row.
// deviations[i][k-1] is the band-k deviation of the i-th commodity; counts[k-1]
// bounds how many commodities may sit in band k. Each commodity takes at most
// one band. The multipliers form an optimal solution of the dual assignment LP.
struct DeviationResult {
  double value = 0.0;
  std::vector<double> band_multiplier;       // w_k >= 0
  std::vector<double> commodity_multiplier;  // z_i >= 0
  std::vector<int> band_of;                  // 0 when undeviated
};
// Augmenting paths over the band graph; falls back to the LP when the
// recovered multipliers do not certify the value.
DeviationResult max_deviation(const std::vector<std::vector<double>>& deviations,
                              std::span<const int> counts);
// Reference implementation solving the assignment LP directly.
DeviationResult max_deviation_lp(const std::vector<std::vector<double>>& deviations,
                                 std::span<const int> counts);

// Nominal load plus worst-case deviation on (e, t). Unassigned commodities
// contribute nothing, so partial routings are accepted.
double worst_case_load(const Instance& instance, int e, int t, const RoutingState& routing);
DeviationResult edge_deviation(const Instance& instance, int e, int t, const RoutingState& routing);
double nominal_load(const Instance& instance, int e, int t, const RoutingState& routing);

// Minimum number of modules for a load, with a 1e-9 guard against round-off.
int modules_needed(double load, double capacity);

// Cheapest installation plan for one edge given per-period loads. Each extra
// module goes to the cheapest period up to the one that first needs it; cost
// ties go to the latest such period.
struct EdgeSchedule {
  std::vector<int> installs;
  std::vector<int> cumulative;
  double cost = 0.0;
};
EdgeSchedule schedule_edge(std::span<const double> loads, std::span<const double> costs, double capacity);

CapacitySchedule derive_schedule(const Instance& instance, const std::vector<std::vector<double>>& loads);
double schedule_cost(const Instance& instance, const CapacitySchedule& schedule);

// Worst-case loads [e][t] of a (possibly partial) routing.
std::vector<std::vector<double>> worst_case_loads(const Instance& instance, const RoutingState& routing);

// Exact cost of a complete routing. Throws ModelError on incomplete routings.
Solution evaluate_routing(const Instance& instance, const RoutingState& routing);

// Robust-model point for a complete routing: x from the routing, y from the
// cheapest schedule, w and z from the optimal deviation multipliers.
std::vector<double> expand_point(const Instance& instance, const VariableIndex& index,
                                 const RoutingState& routing);

// Routing encoded by the x block; nullopt unless every (c, t) has exactly one x at 1.
std::optional<RoutingState> routing_from_point(const Instance& instance, const VariableIndex& index,
                                               std::span<const double> point, double tolerance = 1e-6);

CapacitySchedule schedule_from_point(const Instance& instance, const VariableIndex& index,
                                     std::span<const double> point);

struct Violation {
  std::string kind;  // integrality, bound, single-path, dual, capacity, worst-case
  std::string where;
  double magnitude = 0.0;
};

struct FeasibilityReport {
  std::vector<Violation> violations;
  bool oracle_checked = false;

  bool feasible() const { return violations.empty(); }
  bool has(std::string_view kind) const;
};

// Re-derives every constraint family of the robust model from the instance and
// cross-checks installed capacity against worst_case_load. Throws ModelError
// when the point's dimension does not match the robust VariableIndex.
FeasibilityReport check_feasible(const Instance& instance, std::span<const double> point,
                                 double tolerance = 1e-6);

}  // namespace rmnd::model
