// Branch-and-bound over LP relaxations.
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "rmnd/lp.hpp"

namespace rmnd::mip {

enum class VarType : std::uint8_t { kContinuous, kBinary, kInteger };

struct MixedIntegerProgram {
  lp::LinearProgram lp;
  std::vector<VarType> types;  // one per column

  int add_variable(double cost, double lower, double upper, VarType type, std::string name = {});
  bool is_integral(int j) const { return types[j] != VarType::kContinuous; }
  void validate() const;
};

enum class Status : std::uint8_t { kOptimal, kFeasible, kInfeasible, kTimeLimit };

std::string to_string(Status s);

struct MipOptions {
  double time_limit = lp::kInf;  // seconds
  long node_limit = -1;          // negative: unlimited
  double integrality_tolerance = 1e-6;
  double feasibility_tolerance = 1e-7;
  double absolute_gap = 1e-9;
  double divisor_epsilon = 1e-9;
  lp::SolverOptions lp;
};

struct MipResult {
  Status status = Status::kInfeasible;
  std::vector<double> incumbent;
  double objective = lp::kInf;
  double bound = -lp::kInf;
  double gap = lp::kInf;

  long nodes = 0;
  bool hint_used = false;
  bool hint_rejected = false;
  int lp_failures = 0;
  std::vector<double> bound_trace;  // best bound after each processed node

  bool has_incumbent() const { return !incumbent.empty(); }
};

// Best-bound branch-and-bound with depth-first plunging until the first
// incumbent. Binaries are branched before general integers, most fractional
// first, ties by column index.
MipResult solve_mip(const MixedIntegerProgram& mip, const MipOptions& options = {},
                    std::optional<std::span<const double>> incumbent_hint = std::nullopt);

// Checks bounds, integrality and rows of a point.
bool is_feasible_point(const MixedIntegerProgram& mip, std::span<const double> x,
                       double feasibility_tolerance = 1e-7, double integrality_tolerance = 1e-6);

class InconsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// 100 * (incumbent - bound) / incumbent; 0 when both are 0. Throws
// InconsistencyError when bound exceeds incumbent beyond tolerance.
double gap_percent(double incumbent, double bound, double tolerance = 1e-6);

}  // namespace rmnd::mip
