#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>

#include "rmnd/mip.hpp"

namespace rmnd::mip {

int MixedIntegerProgram::add_variable(double cost, double lower, double upper, VarType type,
                                      std::string name) {
  if (type == VarType::kBinary) {
    lower = std::max(lower, 0.0);
    upper = std::min(upper, 1.0);
  }
  types.push_back(type);
  return lp.add_variable(cost, lower, upper, std::move(name));
}

void MixedIntegerProgram::validate() const {
  lp.validate();
  if (static_cast<int>(types.size()) != lp.num_variables())
    throw std::invalid_argument("integrality marks do not match the column count");
  for (int j = 0; j < lp.num_variables(); ++j)
    if (types[j] == VarType::kBinary && (lp.lower(j) < 0.0 || lp.upper(j) > 1.0))
      throw std::invalid_argument("binary column " + lp.variable_name(j) + " has bounds outside [0,1]");
}

std::string to_string(Status s) {
  switch (s) {
    case Status::kOptimal: return "optimal";
    case Status::kFeasible: return "feasible";
    case Status::kInfeasible: return "infeasible";
    case Status::kTimeLimit: return "time-limit";
  }
  return "unknown";
}

bool is_feasible_point(const MixedIntegerProgram& mip, std::span<const double> x,
                       double feasibility_tolerance, double integrality_tolerance) {
  if (static_cast<int>(x.size()) != mip.lp.num_variables()) return false;
  for (int j = 0; j < mip.lp.num_variables(); ++j) {
    if (!std::isfinite(x[j])) return false;
    if (mip.is_integral(j) && std::abs(x[j] - std::round(x[j])) > integrality_tolerance) return false;
  }
  return lp::max_violation(mip.lp, x) <= feasibility_tolerance;
}

double gap_percent(double incumbent, double bound, double tolerance) {
  if (bound == -lp::kInf) return lp::kInf;
  const double slack = tolerance * std::max(1.0, std::abs(incumbent));
  if (bound > incumbent + slack)
    throw InconsistencyError("lower bound " + std::to_string(bound) + " exceeds incumbent " +
                             std::to_string(incumbent));
  if (incumbent == 0.0 && std::abs(bound) <= slack) return 0.0;
  const double gap = std::max(0.0, incumbent - bound);
  return 100.0 * gap / std::max(std::abs(incumbent), 1e-9);
}

namespace {

using Clock = std::chrono::steady_clock;

struct Node {
  std::vector<double> lower;
  std::vector<double> upper;
  double bound = -lp::kInf;
  int depth = 0;
  long id = 0;
  std::shared_ptr<const lp::Basis> basis;
};

struct WorseBound {
  bool operator()(const std::unique_ptr<Node>& a, const std::unique_ptr<Node>& b) const {
    if (a->bound != b->bound) return a->bound > b->bound;
    return a->id > b->id;
  }
};

// Returns the branching column or -1 when x is integral.
int pick_branch(const MixedIntegerProgram& mip, const std::vector<double>& x, double tol) {
  int best = -1;
  double best_frac = 0.0;
  for (int pass = 0; pass < 2 && best < 0; ++pass) {
    const VarType wanted = pass == 0 ? VarType::kBinary : VarType::kInteger;
    for (int j = 0; j < mip.lp.num_variables(); ++j) {
      if (mip.types[j] != wanted) continue;
      const double f = x[j] - std::floor(x[j]);
      const double frac = std::min(f, 1.0 - f);
      if (frac <= tol) continue;
      if (frac > best_frac + 1e-12) {
        best_frac = frac;
        best = j;
      }
    }
  }
  return best;
}

}  // namespace

MipResult solve_mip(const MixedIntegerProgram& mip, const MipOptions& opt,
                    std::optional<std::span<const double>> hint) {
  mip.validate();
  if (!(opt.time_limit > 0.0)) throw std::invalid_argument("time limit must be positive");
  const auto start = Clock::now();
  const bool timed = std::isfinite(opt.time_limit);
  const auto deadline =
      timed ? start + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(opt.time_limit))
            : Clock::time_point::max();

  MipResult res;
  const int n = mip.lp.num_variables();
  auto prune_level = [&]() {
    return res.objective - opt.absolute_gap * std::max(1.0, std::abs(res.objective));
  };

  if (hint) {
    if (is_feasible_point(mip, *hint, opt.feasibility_tolerance, opt.integrality_tolerance)) {
      res.incumbent.assign(hint->begin(), hint->end());
      for (int j = 0; j < n; ++j)
        if (mip.is_integral(j)) res.incumbent[j] = std::round(res.incumbent[j]);
      res.objective = mip.lp.objective_value(res.incumbent);
      res.hint_used = true;
    } else {
      res.hint_rejected = true;
    }
  }

  std::vector<std::unique_ptr<Node>> stack;
  // Min-heap on (bound, id).
  std::vector<std::unique_ptr<Node>> heap;
  auto heap_push = [&heap](std::unique_ptr<Node> node) {
    heap.push_back(std::move(node));
    std::push_heap(heap.begin(), heap.end(), WorseBound{});
  };
  auto heap_pop = [&heap]() {
    std::pop_heap(heap.begin(), heap.end(), WorseBound{});
    auto node = std::move(heap.back());
    heap.pop_back();
    return node;
  };
  double failed_min = lp::kInf;
  long next_id = 0;
  {
    auto root = std::make_unique<Node>();
    root->lower.assign(mip.lp.lowers().begin(), mip.lp.lowers().end());
    root->upper.assign(mip.lp.uppers().begin(), mip.lp.uppers().end());
    root->id = next_id++;
    if (res.has_incumbent()) heap_push(std::move(root));
    else stack.push_back(std::move(root));
  }

  auto open_min = [&]() {
    double m = lp::kInf;
    for (const auto& node : stack) m = std::min(m, node->bound);
    if (!heap.empty()) m = std::min(m, heap.front()->bound);
    return std::min(m, failed_min);
  };
  auto record_bound = [&]() {
    const double current = std::min(open_min(), res.objective);
    res.bound = std::max(res.bound, current);
    res.bound_trace.push_back(res.bound);
  };

  bool stopped = false;
  Status stop_status = Status::kTimeLimit;
  while (!stack.empty() || !heap.empty()) {
    if (timed && Clock::now() >= deadline) {
      stopped = true;
      stop_status = Status::kTimeLimit;
      break;
    }
    if (opt.node_limit >= 0 && res.nodes >= opt.node_limit) {
      stopped = true;
      stop_status = res.has_incumbent() ? Status::kFeasible : Status::kTimeLimit;
      break;
    }
    std::unique_ptr<Node> node;
    if (!stack.empty()) {
      node = std::move(stack.back());
      stack.pop_back();
    } else {
      node = heap_pop();
    }
    if (res.has_incumbent() && node->bound >= prune_level()) continue;

    ++res.nodes;
    lp::LpSolution sol = lp::solve_lp_with_bounds(mip.lp, node->lower, node->upper, opt.lp, node->basis.get());
    if (sol.status == lp::Status::kNumericalFailure && node->basis) {
      sol = lp::solve_lp_with_bounds(mip.lp, node->lower, node->upper, opt.lp, nullptr);
    }
    if (sol.status == lp::Status::kNumericalFailure) {
      // The subtree is dropped, so the final bound must not claim it.
      ++res.lp_failures;
      failed_min = std::min(failed_min, node->bound);
      record_bound();
      continue;
    }
    if (sol.status == lp::Status::kUnbounded) throw std::runtime_error("unbounded LP relaxation");
    if (sol.status == lp::Status::kInfeasible) {
      record_bound();
      continue;
    }
    if (res.has_incumbent() && sol.objective >= prune_level()) {
      record_bound();
      continue;
    }
    const int j = pick_branch(mip, sol.primal, opt.integrality_tolerance);
    if (j < 0) {
      std::vector<double> x = sol.primal;
      for (int k = 0; k < n; ++k)
        if (mip.is_integral(k)) x[k] = std::round(x[k]);
      const double obj = mip.lp.objective_value(x);
      if (!res.has_incumbent() || obj < res.objective) {
        res.incumbent = std::move(x);
        res.objective = obj;
        res.hint_used = false;
      }
      while (!stack.empty()) {
        heap_push(std::move(stack.back()));
        stack.pop_back();
      }
      record_bound();
      continue;
    }

    auto basis = sol.basis ? std::make_shared<const lp::Basis>(std::move(*sol.basis)) : nullptr;
    const double v = sol.primal[j];
    auto down = std::make_unique<Node>();
    down->lower = node->lower;
    down->upper = node->upper;
    down->upper[j] = std::floor(v);
    down->bound = sol.objective;
    down->depth = node->depth + 1;
    down->basis = basis;
    auto up = std::make_unique<Node>();
    up->lower = std::move(node->lower);
    up->upper = std::move(node->upper);
    up->lower[j] = std::ceil(v);
    up->bound = sol.objective;
    up->depth = node->depth + 1;
    up->basis = basis;
    down->id = next_id++;
    up->id = next_id++;
    if (!res.has_incumbent()) {
      stack.push_back(std::move(down));
      stack.push_back(std::move(up));  // explored first
    } else {
      heap_push(std::move(down));
      heap_push(std::move(up));
    }
    record_bound();
  }

  if (stopped) {
    res.status = stop_status;
  } else {
    res.status = res.has_incumbent() ? (res.lp_failures == 0 ? Status::kOptimal : Status::kFeasible)
                                     : Status::kInfeasible;
    if (res.has_incumbent()) res.bound = std::min(res.objective, std::max(res.bound, failed_min));
    if (!res.has_incumbent()) res.bound = lp::kInf;
  }
  if (res.has_incumbent()) {
    res.gap = (res.objective - res.bound) / std::max(std::abs(res.objective), opt.divisor_epsilon);
    if (res.bound == -lp::kInf) res.gap = lp::kInf;
  }
  return res;
}

}  // namespace rmnd::mip
