// Relaxation-induced neighborhood search around an incumbent routing, and the
// hybrid ant-colony + neighborhood-search driver.
#pragma once

#include <functional>
#include <span>
#include <vector>

#include "rmnd/aco.hpp"
#include "rmnd/lp.hpp"
#include "rmnd/mip.hpp"
#include "rmnd/model.hpp"

namespace rmnd::rins {

struct RinsConfig {
  double epsilon = 0.1;     // fixing tolerance
  double time_limit = 10.0;  // seconds for the sub-MIP

  // Throws std::invalid_argument unless 0 <= epsilon < 0.5 and time_limit > 0.
  void validate() const;
};

// Over x columns: fix to 0 when incumbent = 0 and relaxation <= epsilon, fix
// to 1 when incumbent = 1 and relaxation >= 1 - epsilon. Keys index the spans.
lp::Fixings compute_fixings(std::span<const double> incumbent_x, std::span<const double> relaxation_x,
                            double epsilon);

struct RinsReport {
  int fixed = 0;
  long nodes = 0;
  double improvement = 0.0;  // incumbent cost - result cost, >= 0
  mip::Status status = mip::Status::kFeasible;
};

struct RinsResult {
  model::Solution solution;
  RinsReport report;
};

// Solves the robust MIP with compute_fixings applied, hinted with the expanded
// incumbent. The result never costs more than the incumbent.
RinsResult run_rins(const Instance& instance, const model::Solution& incumbent,
                    const model::RootRelaxation& relaxation, const RinsConfig& config);
RinsResult run_rins(const Instance& instance, const model::Solution& incumbent, const RinsConfig& config);

struct HybridOptions {
  aco::ColonyOptions colony;
  RinsConfig rins;
  long rins_every = 0;  // extension: also search every N ant iterations; 0 disables
};

struct HybridResult {
  model::Solution aco_best;  // best before the final search, including any intermediate ones
  model::Solution best;
  long iterations = 0;
  RinsReport final_rins;
  std::vector<RinsReport> intermediate;
  double elapsed = 0.0;
};

struct HybridObserver {
  std::function<void(const aco::IterationRecord&)> on_ant;
  std::function<void(long iteration, const RinsReport&, const model::Solution&)> on_rins;
};

// Relaxation and trails, the timed ant loop, then one search on the best routing.
HybridResult run_hybrid(const Instance& instance, const HybridOptions& options,
                        const model::RootRelaxation& relaxation, const HybridObserver& observer = {});

}  // namespace rmnd::rins
