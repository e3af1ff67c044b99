// Sparse linear programs and a bounded-variable revised simplex solver.
#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace rmnd::lp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Sense : std::uint8_t { kLessEqual, kEqual, kGreaterEqual };

struct Entry {
  int column = 0;
  double value = 0.0;
};

struct Row {
  std::vector<Entry> entries;
  Sense sense = Sense::kLessEqual;
  double rhs = 0.0;
  std::string name;
};

// Minimization problem min c'x subject to rows and lower <= x <= upper.
// Bounds may be -kInf / +kInf.
class LinearProgram {
 public:
  int add_variable(double cost, double lower, double upper, std::string name = {});
  int add_row(std::vector<Entry> entries, Sense sense, double rhs, std::string name = {});

  int num_variables() const { return static_cast<int>(cost_.size()); }
  int num_rows() const { return static_cast<int>(rows_.size()); }

  double cost(int j) const { return cost_[j]; }
  double lower(int j) const { return lower_[j]; }
  double upper(int j) const { return upper_[j]; }
  const std::string& variable_name(int j) const { return names_[j]; }
  const Row& row(int i) const { return rows_[i]; }
  const std::vector<Row>& rows() const { return rows_; }

  void set_cost(int j, double c) { cost_[j] = c; }
  void set_bounds(int j, double lower, double upper);

  std::span<const double> costs() const { return cost_; }
  std::span<const double> lowers() const { return lower_; }
  std::span<const double> uppers() const { return upper_; }

  double objective_value(std::span<const double> x) const;
  double row_activity(int i, std::span<const double> x) const;

  // Throws std::invalid_argument on out-of-range columns, NaN data or
  // inverted bounds.
  void validate() const;

 private:
  std::vector<double> cost_;
  std::vector<double> lower_;
  std::vector<double> upper_;
  std::vector<std::string> names_;
  std::vector<Row> rows_;
};

// All solver tolerances live here.
struct Tolerances {
  double feasibility = 1e-7;   // absolute, on row-scaled constraints
  double optimality = 1e-9;    // reduced-cost threshold
  double pivot = 1e-9;         // smallest admissible pivot magnitude
  double duality_gap = 1e-6;   // relative primal/dual objective agreement
  double phase1 = 1e-9;        // residual infeasibility accepted after phase 1
};

struct SolverOptions {
  Tolerances tol;
  int max_iterations = 200000;
  int refactor_interval = 64;
  int degenerate_before_bland = 50;
  int max_refactor_failures = 3;
};

enum class Status : std::uint8_t { kOptimal, kInfeasible, kUnbounded, kNumericalFailure };

std::string to_string(Status s);

enum class BasisStatus : std::uint8_t { kBasic, kAtLower, kAtUpper, kFree };

// Status of every structural column followed by one slack per row.
struct Basis {
  std::vector<BasisStatus> status;
};

struct LpSolution {
  Status status = Status::kNumericalFailure;
  double objective = 0.0;
  double dual_objective = 0.0;
  std::vector<double> primal;
  std::vector<double> dual;           // one per row; sign follows d = c - A'y
  std::vector<double> reduced_cost;   // one per structural column
  std::optional<Basis> basis;
  int iterations = 0;
  bool warm_started = false;
  std::string message;

  bool optimal() const { return status == Status::kOptimal; }
};

LpSolution solve_lp(const LinearProgram& lp, const SolverOptions& options = {},
                    const Basis* warm_start = nullptr);

// Solves lp with its column bounds replaced by lower/upper. The row data
// must already have been validated.
LpSolution solve_lp_with_bounds(const LinearProgram& lp, std::span<const double> lower,
                                std::span<const double> upper, const SolverOptions& options = {},
                                const Basis* warm_start = nullptr);

using Fixings = std::map<int, double>;

// Solves lp with the fixed columns' bounds collapsed to the given value.
// A fixing outside the column's bounds yields kInfeasible without a solve.
LpSolution solve_lp_with_fixings(const LinearProgram& lp, const Fixings& fixings,
                                 const SolverOptions& options = {},
                                 const Basis* warm_start = nullptr);

// Applies fixings to a copy of lp. Returns nullopt when a value violates bounds.
std::optional<LinearProgram> with_fixings(const LinearProgram& lp, const Fixings& fixings,
                                          double tolerance = 1e-9);

// Largest bound/row violation of x, each row scaled by its largest |coefficient|.
double max_violation(const LinearProgram& lp, std::span<const double> x);

// Fixed-column MPS text, see FORMAT.md.
std::string to_mps(const LinearProgram& lp, const std::string& name = "RMND");

}  // namespace rmnd::lp
