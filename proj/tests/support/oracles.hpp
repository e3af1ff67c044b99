// Brute-force reference computations used by the unit and acceptance tests.
// None of these call into the solver code paths they are compared against.
#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "rmnd/instance.hpp"
#include "rmnd/lp.hpp"
#include "rmnd/routing.hpp"

namespace oracle {

// Max total deviation over all (K+1)^n band assignments respecting counts.
double brute_force_deviation(const std::vector<std::vector<double>>& deviations, const std::vector<int>& counts);

// Cheapest schedule by enumerating every install vector with at most
// max_modules modules per period.
double brute_force_schedule_cost(const std::vector<double>& loads, const std::vector<double>& costs,
                                 double capacity, int max_modules);

// Calls f for every complete routing of the instance.
void for_each_routing(const rmnd::Instance& instance, const std::function<void(const rmnd::RoutingState&)>& f);

// Cost of a complete routing computed from first principles: worst-case
// loads by band enumeration, then the cheapest schedule by enumeration.
double brute_force_routing_cost(const rmnd::Instance& instance, const rmnd::RoutingState& routing);

// Simple paths source->target, sorted by (hop count, edge-id sequence).
std::vector<rmnd::Path> all_simple_paths(const rmnd::Network& network, int source, int target);

struct LpVerdict {
  rmnd::lp::Status status;
  double objective = 0.0;
};

// Exact status and optimum by enumerating bases of the standard-form LP and
// extreme rays of its recession cone.
LpVerdict enumerate_lp(const rmnd::lp::LinearProgram& lp);

// Random LP with small integer data, at most max_vars columns and max_rows
// rows; mixes bounded, free and one-sided columns and all three row senses.
rmnd::lp::LinearProgram random_lp(std::mt19937_64& rng, int max_vars, int max_rows);

struct TinyOptions {
  int max_edges = 3;
  int max_commodities = 5;
  int max_periods = 2;
  int max_bands = 2;
  int max_path_binaries = 1 << 30;  // bound on sum_c |P_c| * |T|
  bool integer_data = true;
};

// Random connected instance on at most four nodes.
rmnd::Instance random_tiny_instance(std::mt19937_64& rng, const TinyOptions& options);

}  // namespace oracle
