#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rmnd/aco.hpp"

namespace rmnd::aco {

std::string to_string(Attractiveness mode) {
  return mode == Attractiveness::kExactLp ? "exact-lp" : "surrogate";
}

Attractiveness parse_attractiveness(const std::string& text) {
  if (text == "exact-lp") return Attractiveness::kExactLp;
  if (text == "surrogate") return Attractiveness::kSurrogate;
  throw std::invalid_argument("unknown attractiveness mode '" + text + "'");
}

AttractivenessEvaluator::AttractivenessEvaluator(const Instance& instance, Attractiveness mode)
    : instance_(&instance), mode_(mode), index_(instance, false) {
  if (mode_ == Attractiveness::kExactLp) relaxation_ = model::build_nominal(instance).lp;
}

std::vector<double> AttractivenessEvaluator::raw_values(const RoutingState& partial, int c, int t,
                                                        Workspace& ws) const {
  return mode_ == Attractiveness::kExactLp ? exact_lp(partial, c, t, ws) : surrogate(partial, c, t);
}

std::vector<double> AttractivenessEvaluator::raw_values(const RoutingState& partial, int c, int t) const {
  Workspace ws;
  return raw_values(partial, c, t, ws);
}

std::vector<double> AttractivenessEvaluator::exact_lp(const RoutingState& partial, int c, int t,
                                                      Workspace& ws) const {
  const Instance& in = *instance_;
  std::vector<double> lower(relaxation_.lowers().begin(), relaxation_.lowers().end());
  for (const Move& m : partial.moves()) lower[index_.x(m.commodity, m.path, m.period)] = 1.0;
  std::vector<double> raw(in.num_paths(c), lp::kInf);
  for (int p = 0; p < in.num_paths(c); ++p) {
    const int col = index_.x(c, p, t);
    const double saved = lower[col];
    lower[col] = 1.0;
    lp::LpSolution sol = lp::solve_lp_with_bounds(relaxation_, lower, relaxation_.uppers(), {},
                                                  ws.basis ? &*ws.basis : nullptr);
    lower[col] = saved;
    if (sol.status == lp::Status::kNumericalFailure && ws.basis)
      sol = lp::solve_lp_with_bounds(relaxation_, lower, relaxation_.uppers());
    if (sol.optimal()) raw[p] = sol.objective;
    if (sol.basis) ws.basis = std::move(sol.basis);
  }
  return raw;
}

std::vector<double> AttractivenessEvaluator::surrogate(const RoutingState& partial, int c, int t) const {
  const Instance& in = *instance_;
  const int K = in.num_bands();
  const double phi = in.module_capacity;
  const auto loads = model::worst_case_loads(in, partial);
  std::vector<std::vector<int>> users(in.num_edges());
  for (int other = 0; other < in.num_commodities(); ++other)
    if (partial.assigned(other, t))
      for (int e : in.paths[other][partial.path(other, t)]) users[e].push_back(other);

  std::vector<double> raw(in.num_paths(c), 0.0);
  for (int p = 0; p < in.num_paths(c); ++p) {
    for (int e : in.paths[c][p]) {
      std::vector<int> on = users[e];
      on.push_back(c);
      double nominal = 0.0;
      std::vector<std::vector<double>> devs;
      for (int k : on) {
        const Commodity& com = in.commodities[k];
        nominal += com.nominal_demand[t];
        devs.emplace_back(com.band_deviation[t].begin() + 1, com.band_deviation[t].begin() + 1 + K);
      }
      std::vector<double> updated = loads[e];
      updated[t] = nominal + model::max_deviation(devs, in.uncertainty.theta[e][t]).value;
      raw[p] += model::schedule_edge(updated, in.module_cost[e], phi).cost -
                model::schedule_edge(loads[e], in.module_cost[e], phi).cost;
    }
  }
  return raw;
}

std::vector<double> normalize_scores(std::span<const double> raw) {
  std::vector<double> score(raw.size(), 1.0);
  double best = lp::kInf, worst = -lp::kInf;
  for (double v : raw)
    if (std::isfinite(v)) {
      best = std::min(best, v);
      worst = std::max(worst, v);
    }
  if (best == lp::kInf) return score;
  const double spread = worst - best;
  const bool tie = spread <= 1e-12 * std::max(1.0, std::abs(worst));
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (!std::isfinite(raw[i])) score[i] = 0.0;
    else score[i] = tie ? 1.0 : (worst - raw[i]) / spread;
  }
  return score;
}

std::vector<double> move_probabilities(std::span<const double> trails, std::span<const double> scores, double alpha) {
  if (trails.size() != scores.size() || trails.empty()) throw std::invalid_argument("candidate sizes differ");
  std::vector<double> p(trails.size());
  double total = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    p[i] = alpha * trails[i] + (1.0 - alpha) * scores[i];
    total += p[i];
  }
  if (!(total > 0.0)) {
    std::fill(p.begin(), p.end(), 1.0 / static_cast<double>(p.size()));
    return p;
  }
  for (double& v : p) v /= total;
  return p;
}

}  // namespace rmnd::aco
