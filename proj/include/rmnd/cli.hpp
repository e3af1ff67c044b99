// Command-line front end: generate, solve, validate and bench.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rmnd/aco.hpp"
#include "rmnd/instance.hpp"
#include "rmnd/model.hpp"

namespace rmnd::cli {

enum ExitCode : int { kSuccess = 0, kUsage = 1, kInputError = 2, kInternal = 3 };

// Raised for bad flag values that the parser cannot catch on its own.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Method { kAco, kAcoRins, kExact, kLpBound };

std::string to_string(Method m);
Method parse_method(const std::string& text);  // throws UsageError

struct SolveSettings {
  Method method = Method::kAcoRins;
  double time_limit = 60.0;  // ant loop, or the whole MIP for exact
  double rins_limit = 10.0;
  double alpha = 0.5;
  int ants = 3;
  int window = 0;  // 0: same as ants
  double epsilon = 0.1;
  std::uint64_t seed = 0;
  aco::Attractiveness attractiveness = aco::Attractiveness::kExactLp;
  long max_iterations = -1;
  long rins_every = 0;
  aco::Execution execution = aco::Execution::kParallel;

  // Throws UsageError on out-of-range values.
  void validate() const;
};

struct RunReport {
  std::string id;
  int nodes = 0;
  int edges = 0;
  int commodities = 0;
  int periods = 0;
  Method method = Method::kAcoRins;
  double cost = 0.0;
  double bound = 0.0;
  double gap_pct = 0.0;
  double wall_s = 0.0;
  std::uint64_t seed = 0;
};

inline constexpr std::string_view kReportHeader = "id,nodes,edges,commodities,periods,method,cost,bound,gap_pct,wall_s,seed";
inline constexpr std::string_view kLogHeader = "event,iteration,ant,cost,zbar,best,elapsed_s,fixed,nodes,improvement";

std::string report_row(const RunReport& report);

// One line of the iteration log, without the trailing newline.
std::string ant_log_row(const aco::IterationRecord& record);
std::string rins_log_row(long iteration, double cost, double best, double elapsed, int fixed, long nodes,
                         double improvement);

struct SolveOutcome {
  RunReport report;
  model::Solution solution;  // empty routing for lp-bound
  std::vector<std::string> log;  // iteration log rows
};

// Runs one method. Costs for lp-bound equal the bound.
SolveOutcome solve(const Instance& instance, const SolveSettings& settings);

// Solution file: routing, schedule and the full robust-model point.
std::string solution_json(const Instance& instance, const SolveOutcome& outcome);
// The point stored in a solution file.
std::vector<double> read_solution_point(std::string_view json_text);

// Parses argv and dispatches. Output goes to out, diagnostics to err.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace rmnd::cli
