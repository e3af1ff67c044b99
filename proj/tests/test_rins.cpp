#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "rmnd/rins.hpp"

using namespace rmnd;
using namespace rmnd::rins;

namespace {

double exact_optimum(const Instance& in) {
  const auto res = mip::solve_mip(model::build_robust(in));
  REQUIRE(res.status == mip::Status::kOptimal);
  return res.objective;
}

RoutingState random_routing(const Instance& in, std::mt19937_64& rng) {
  RoutingState r(in);
  for (int c = 0; c < in.num_commodities(); ++c)
    for (int t = 0; t < in.num_periods; ++t)
      r.assign(c, t, std::uniform_int_distribution<int>(0, in.num_paths(c) - 1)(rng));
  return r;
}

bool respects(const Instance& in, const RoutingState& r, const lp::Fixings& fixings) {
  const model::VariableIndex index(in, true);
  for (int c = 0; c < in.num_commodities(); ++c)
    for (int p = 0; p < in.num_paths(c); ++p)
      for (int t = 0; t < in.num_periods; ++t) {
        const auto it = fixings.find(index.x(c, p, t));
        if (it != fixings.end() && it->second != (r.path(c, t) == p ? 1.0 : 0.0)) return false;
      }
  return true;
}

std::vector<double> x_block(const Instance& in, const std::vector<double>& point) {
  const model::VariableIndex index(in, true);
  return {point.begin(), point.begin() + index.num_x()};
}

}  // namespace

TEST_CASE("configuration bounds") {
  CHECK_NOTHROW(RinsConfig{}.validate());
  CHECK_NOTHROW((RinsConfig{0.0, 1.0}.validate()));
  CHECK_THROWS_AS((RinsConfig{0.5, 1.0}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((RinsConfig{-0.01, 1.0}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((RinsConfig{0.1, 0.0}.validate()), std::invalid_argument);
}

TEST_CASE("fixing rules") {
  const std::vector<double> incumbent{1.0, 1.0, 0.0, 0.0, 1.0, 0.0};
  const std::vector<double> relax{0.95, 0.85, 0.05, 0.2, 1.0, 0.0};
  CHECK(compute_fixings(incumbent, relax, 0.1) == lp::Fixings{{0, 1.0}, {2, 0.0}, {4, 1.0}, {5, 0.0}});
  CHECK(compute_fixings(incumbent, relax, 0.0) == lp::Fixings{{4, 1.0}, {5, 0.0}});
  // Disagreement is never fixed, whatever the tolerance.
  CHECK(compute_fixings(std::vector<double>{1.0, 0.0}, std::vector<double>{0.0, 1.0}, 0.49).empty());
  CHECK_THROWS_AS(compute_fixings(std::vector<double>{0.5}, std::vector<double>{0.5}, 0.1), std::invalid_argument);
}

TEST_CASE("raising epsilon never shrinks the fixed set") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int rep = 0; rep < 200; ++rep) {
    std::vector<double> inc(20), rel(20);
    for (int j = 0; j < 20; ++j) {
      inc[j] = u(rng) < 0.5 ? 0.0 : 1.0;
      rel[j] = u(rng) < 0.3 ? inc[j] : u(rng);
    }
    const double lo = 0.49 * u(rng), hi = lo + (0.4999 - lo) * u(rng);
    const auto a = compute_fixings(inc, rel, lo), b = compute_fixings(inc, rel, hi);
    for (auto [j, v] : a) CHECK(b.at(j) == v);
  }
}

TEST_CASE("a fully fixed neighborhood returns the incumbent cost") {
  const Instance in = fixtures::triangle({5.0, 8.0}, 1, 1);
  RoutingState r(in);
  r.assign(0, 0, 0);
  r.assign(0, 1, 1);
  const model::Solution incumbent = model::evaluate_routing(in, r);
  model::RootRelaxation relax = model::relax_robust(in);
  const model::VariableIndex index(in, true);
  const auto point = model::expand_point(in, index, r);
  std::copy(point.begin(), point.begin() + index.num_x(), relax.primal.begin());
  const RinsResult res = run_rins(in, incumbent, relax, {0.1, 5.0});
  CHECK(res.report.fixed == index.num_x());
  CHECK(res.solution.cost == incumbent.cost);
  CHECK(res.solution.routing == r);
  CHECK(res.report.improvement == 0.0);
}

TEST_CASE("a vanishing time limit keeps the incumbent") {
  std::mt19937_64 rng(31);
  const Instance in = oracle::random_tiny_instance(rng, {});
  const model::Solution incumbent = model::evaluate_routing(in, random_routing(in, rng));
  const RinsResult res = run_rins(in, incumbent, {0.1, 1e-12});
  CHECK(res.solution.cost == incumbent.cost);
  CHECK(res.solution.routing == incumbent.routing);
}

TEST_CASE("search reaches the optimum whenever the neighborhood contains it") {
  std::mt19937_64 rng(77);
  int improved_to_optimum = 0;
  for (int rep = 0; rep < 60; ++rep) {
    const Instance in = oracle::random_tiny_instance(rng, {4, 4, 2, 2, 12, true});
    const model::RootRelaxation relax = model::relax_robust(in);
    const double optimum = exact_optimum(in);
    RoutingState best;
    double best_cost = lp::kInf;
    oracle::for_each_routing(in, [&](const RoutingState& r) {
      const double c = oracle::brute_force_routing_cost(in, r);
      if (c < best_cost) {
        best_cost = c;
        best = r;
      }
    });
    REQUIRE(best_cost == doctest::Approx(optimum));

    const model::Solution incumbent = model::evaluate_routing(in, random_routing(in, rng));
    const RinsConfig config{0.1, 30.0};
    const RinsResult res = run_rins(in, incumbent, relax, config);
    CHECK(res.solution.cost <= incumbent.cost);
    CHECK(res.solution.cost >= optimum - 1e-6);
    CHECK(res.solution.cost == doctest::Approx(model::evaluate_routing(in, res.solution.routing).cost));

    const model::VariableIndex index(in, true);
    const auto fixings =
        compute_fixings(x_block(in, model::expand_point(in, index, incumbent.routing)), x_block(in, relax.primal), 0.1);
    if (respects(in, best, fixings)) {
      CHECK(res.solution.cost == doctest::Approx(optimum));
      if (incumbent.cost > optimum + 1e-6 && !fixings.empty()) ++improved_to_optimum;
    }
  }
  CHECK(improved_to_optimum > 0);
}

TEST_CASE("hybrid run is never worse than its ant phase") {
  std::mt19937_64 rng(3);
  for (int rep = 0; rep < 8; ++rep) {
    const Instance in = oracle::random_tiny_instance(rng, {});
    const model::RootRelaxation relax = model::relax_robust(in);
    HybridOptions opts;
    opts.colony.ants.seed = rep;
    opts.colony.max_iterations = 2;
    opts.rins = {0.1, 5.0};
    int rins_events = 0;
    HybridObserver obs;
    obs.on_rins = [&](long, const RinsReport& r, const model::Solution&) {
      ++rins_events;
      CHECK(r.improvement >= 0.0);
    };
    const HybridResult res = run_hybrid(in, opts, relax, obs);
    CHECK(res.iterations == 2);
    CHECK(res.best.cost <= res.aco_best.cost);
    CHECK(res.final_rins.improvement == doctest::Approx(res.aco_best.cost - res.best.cost));
    CHECK(rins_events == 1);
    CHECK(res.intermediate.empty());
    CHECK(res.best.gap == doctest::Approx(mip::gap_percent(res.best.cost, res.best.lower_bound)));

    opts.rins_every = 1;
    const HybridResult every = run_hybrid(in, opts, relax);
    CHECK(every.intermediate.size() == 2);
    CHECK(every.best.cost <= every.aco_best.cost);
  }
}
