#include "rmnd/model.hpp"

namespace rmnd::model {

namespace {

void check_buildable(const Instance& instance) {
  if (static_cast<int>(instance.paths.size()) != instance.num_commodities())
    throw ModelError("path set does not cover every commodity");
  for (int c = 0; c < instance.num_commodities(); ++c)
    if (instance.paths[c].empty())
      throw ModelError("commodity " + instance.commodities[c].id + " has no admissible path");
  instance.validate();
}

mip::MixedIntegerProgram build(const Instance& instance, bool robust) {
  check_buildable(instance);
  const VariableIndex index(instance, robust);
  const int C = instance.num_commodities();
  const int E = instance.num_edges();
  const int T = instance.num_periods;
  const int K = robust ? instance.num_bands() : 0;
  const double phi = instance.module_capacity;

  mip::MixedIntegerProgram mip;
  for (int j = 0; j < index.size(); ++j) {
    const ColumnInfo info = index.describe(j);
    switch (info.block) {
      case Block::kX:
        mip.add_variable(0.0, 0.0, 1.0, mip::VarType::kBinary, index.name(j));
        break;
      case Block::kY:
        mip.add_variable(instance.module_cost[info.edge][info.period], 0.0, lp::kInf,
                         mip::VarType::kInteger, index.name(j));
        break;
      case Block::kW:
      case Block::kZ:
        mip.add_variable(0.0, 0.0, lp::kInf, mip::VarType::kContinuous, index.name(j));
        break;
    }
  }

  for (int e = 0; e < E; ++e) {
    for (int t = 0; t < T; ++t) {
      std::vector<lp::Entry> row;
      for (const auto& cr : index.crossings(e)) {
        row.push_back({index.x(cr.commodity, cr.path, t), instance.commodities[cr.commodity].nominal_demand[t]});
        if (robust) row.push_back({index.z_at(cr.commodity, cr.path, cr.position, t), 1.0});
      }
      for (int k = 1; k <= K; ++k) {
        const int theta = instance.uncertainty.count(e, t, k);
        if (theta != 0) row.push_back({index.w(e, t, k), static_cast<double>(theta)});
      }
      for (int tau = 0; tau <= t; ++tau) row.push_back({index.y(e, tau), -phi});
      mip.lp.add_row(std::move(row), lp::Sense::kLessEqual, 0.0,
                     "cap[" + instance.network.edges[e].id + "," + std::to_string(t) + "]");
    }
  }
  for (int c = 0; c < C; ++c) {
    for (int t = 0; t < T; ++t) {
      std::vector<lp::Entry> row;
      for (int p = 0; p < instance.num_paths(c); ++p) row.push_back({index.x(c, p, t), 1.0});
      mip.lp.add_row(std::move(row), lp::Sense::kEqual, 1.0,
                     "route[" + instance.commodities[c].id + "," + std::to_string(t) + "]");
    }
  }
  if (robust) {
    for (int e = 0; e < E; ++e)
      for (const auto& cr : index.crossings(e))
        for (int t = 0; t < T; ++t)
          for (int k = 1; k <= K; ++k) {
            const double delta = instance.commodities[cr.commodity].deviation(t, k);
            mip.lp.add_row({{index.w(e, t, k), 1.0},
                            {index.z_at(cr.commodity, cr.path, cr.position, t), 1.0},
                            {index.x(cr.commodity, cr.path, t), -delta}},
                           lp::Sense::kGreaterEqual, 0.0,
                           "dual[" + instance.network.edges[e].id + "," + instance.commodities[cr.commodity].id +
                               "," + std::to_string(cr.path) + "," + std::to_string(t) + "," +
                               std::to_string(k) + "]");
          }
  }
  return mip;
}

}  // namespace

mip::MixedIntegerProgram build_nominal(const Instance& instance) { return build(instance, false); }
mip::MixedIntegerProgram build_robust(const Instance& instance) { return build(instance, true); }

RootRelaxation relax_robust(const Instance& instance) {
  const mip::MixedIntegerProgram m = build_robust(instance);
  lp::LpSolution sol = lp::solve_lp(m.lp);
  if (!sol.optimal()) throw ModelError("robust relaxation is " + lp::to_string(sol.status));
  return {sol.objective, std::move(sol.primal), std::move(sol.basis)};
}

}  // namespace rmnd::model
