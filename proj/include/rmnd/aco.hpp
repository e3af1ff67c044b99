// Ant colony construction of routings with relaxation-derived trails.
#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "rmnd/instance.hpp"
#include "rmnd/lp.hpp"
#include "rmnd/model.hpp"
#include "rmnd/routing.hpp"

namespace rmnd::aco {

inline constexpr double kTrailFloor = 1e-4;

struct AntParameters {
  double alpha = 0.5;  // trail weight; 1 - alpha weighs attractiveness
  int num_ants = 3;
  int window = 3;  // moving-average length psi
  std::uint64_t seed = 0;

  // Throws std::invalid_argument unless 0 <= alpha <= 1, ants >= 1, window >= 1.
  void validate() const;
};

// Trail values per move (c, p, t), stored in the order of the robust x block.
class PheromoneTable {
 public:
  PheromoneTable(const Instance& instance, std::vector<double> initial, double lower_bound, int window);

  int index(int c, int p, int t) const { return offset_[c] + p * periods_ + t; }
  double trail(int c, int p, int t) const { return trail_[index(c, p, t)]; }
  double initial(int c, int p, int t) const { return initial_[index(c, p, t)]; }
  void set_trail(int c, int p, int t, double value) { trail_[index(c, p, t)] = value; }
  std::span<const double> trails() const { return trail_; }

  double lower_bound() const { return lower_bound_; }
  const std::deque<double>& window() const { return window_; }
  int window_capacity() const { return capacity_; }
  void push_cost(double cost);
  // Mean of the window; nullopt while it is empty.
  std::optional<double> window_mean() const;

 private:
  int periods_;
  std::vector<int> offset_;
  std::vector<double> trail_;
  std::vector<double> initial_;
  double lower_bound_;
  int capacity_;
  std::deque<double> window_;
};

// tau(0) = max(x^LR, kTrailFloor), LB = relaxation optimum.
PheromoneTable init_trails(const Instance& instance, const model::RootRelaxation& relaxation, int window);
PheromoneTable init_trails(const Instance& instance, int window);

enum class Attractiveness { kExactLp, kSurrogate };

std::string to_string(Attractiveness mode);
Attractiveness parse_attractiveness(const std::string& text);

// Raw attractiveness of each candidate path, lower is better.
//   exact-lp:  optimum of the nominal relaxation with the partial routing and
//              the candidate fixed to 1 (+inf when infeasible).
//   surrogate: increase of the schedule cost on the candidate's edges when its
//              flow is added to the partial routing's worst-case loads.
class AttractivenessEvaluator {
 public:
  AttractivenessEvaluator(const Instance& instance, Attractiveness mode);

  Attractiveness mode() const { return mode_; }

  // Warm-start state owned by one caller; reuse across calls of one ant.
  struct Workspace {
    std::optional<lp::Basis> basis;
  };

  std::vector<double> raw_values(const RoutingState& partial, int c, int t, Workspace& ws) const;
  std::vector<double> raw_values(const RoutingState& partial, int c, int t) const;

 private:
  std::vector<double> exact_lp(const RoutingState& partial, int c, int t, Workspace& ws) const;
  std::vector<double> surrogate(const RoutingState& partial, int c, int t) const;

  const Instance* instance_;
  Attractiveness mode_;
  model::VariableIndex index_;
  lp::LinearProgram relaxation_;
};

// (worst - raw) / (worst - best) per candidate; all ones when every raw value ties.
// Infinite raw values score 0.
std::vector<double> normalize_scores(std::span<const double> raw);

// p_i = (alpha tau_i + (1 - alpha) eta_i) / sum_f (alpha tau_f + (1 - alpha) eta_f).
std::vector<double> move_probabilities(std::span<const double> trails, std::span<const double> scores, double alpha);

// Construction order for period t: nominal demand descending, then commodity id.
std::vector<int> construction_order(const Instance& instance, int t);

RoutingState construct_routing(const Instance& instance, const PheromoneTable& table, double alpha,
                               const AttractivenessEvaluator& evaluator, std::mt19937_64& rng);

struct AntSolution {
  RoutingState routing;
  double cost = 0.0;
};

// Adds tau0 (1 - (z_k - LB) / (zbar - LB)) to each move of each ant, clamps to
// kTrailFloor, then pushes the ant costs into the window. zbar is the window
// mean before the push (seeded with the first cost when empty); zbar == LB
// contributes nothing. Returns the zbar used.
double update_trails(PheromoneTable& table, std::span<const AntSolution> ants);

enum class Execution { kSerial, kParallel };

// Engine for per-ant randomness: a pure function of (seed, iteration, ant).
std::mt19937_64 ant_engine(std::uint64_t seed, long iteration, int ant);

// One colony iteration against a frozen table.
std::vector<AntSolution> construct_ants(const Instance& instance, const PheromoneTable& table,
                                        const AntParameters& params, const AttractivenessEvaluator& evaluator,
                                        long iteration, Execution execution);

std::vector<model::Solution> evaluate_batch(const Instance& instance, std::span<const RoutingState> routings,
                                            Execution execution);

struct IterationRecord {
  long iteration = 0;
  int ant = 0;
  double cost = 0.0;
  double zbar = 0.0;
  double best = 0.0;
  double elapsed = 0.0;
};

struct ColonyOptions {
  AntParameters ants;
  Attractiveness attractiveness = Attractiveness::kExactLp;
  double time_limit = 60.0;  // seconds
  long max_iterations = -1;  // negative: limited by time only
  Execution execution = Execution::kParallel;
};

struct ColonyResult {
  model::Solution best;
  long iterations = 0;
  double elapsed = 0.0;
  PheromoneTable table;
};

// Called after each iteration's trail update with the completed iteration
// count; may replace the best solution with a cheaper one.
using IterationHook = std::function<void(long iterations, model::Solution& best)>;

// Iterates construct_ants / update_trails until the time limit or iteration
// cap is reached; at least one iteration always runs.
ColonyResult run_colony(const Instance& instance, const ColonyOptions& options,
                        const model::RootRelaxation& relaxation,
                        const std::function<void(const IterationRecord&)>& observer = {},
                        const IterationHook& after_iteration = {});

}  // namespace rmnd::aco
