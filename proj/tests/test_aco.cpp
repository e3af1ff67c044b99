#include <cmath>
#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "rmnd/aco.hpp"

using namespace rmnd;
using namespace rmnd::aco;

namespace {

// Triangle with two commodities a->c sharing both paths.
Instance two_commodity_triangle() {
  Instance in = fixtures::triangle({7.0}, 1, 1);
  in.commodities.push_back(fixtures::commodity("m", 0, 2, {5.0}, {2.0}));
  in.paths.push_back(in.paths[0]);
  in.validate();
  return in;
}

PheromoneTable flat_table(const Instance& in, double value, double lb, int window = 3) {
  const model::VariableIndex index(in, true);
  return PheromoneTable(in, std::vector<double>(index.num_x(), value), lb, window);
}

RoutingState only_path(const Instance& in, int p) {
  RoutingState r(in);
  for (int c = 0; c < in.num_commodities(); ++c)
    for (int t = 0; t < in.num_periods; ++t) r.assign(c, t, p);
  return r;
}

}  // namespace

TEST_CASE("parameters reject out-of-range values") {
  CHECK_NOTHROW(AntParameters{}.validate());
  CHECK_THROWS_AS((AntParameters{1.5, 3, 3, 0}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((AntParameters{-0.1, 3, 3, 0}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((AntParameters{0.5, 0, 3, 0}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((AntParameters{0.5, 3, 0, 0}.validate()), std::invalid_argument);
}

TEST_CASE("trail initialization from the robust relaxation") {
  SUBCASE("a single admissible path gets trail 1") {
    const Instance in = fixtures::shared_link();
    const PheromoneTable table = init_trails(in, 3);
    CHECK(table.trail(0, 0, 0) == doctest::Approx(1.0));
    CHECK(table.trail(1, 0, 0) == doctest::Approx(1.0));
    CHECK(table.lower_bound() == doctest::Approx(model::relax_robust(in).bound));
  }
  SUBCASE("symmetric paths get equal trails") {
    Instance in;
    in.network.nodes = {"s", "a", "b", "t"};
    in.network.edges = {{"sa", 0, 1}, {"at", 1, 3}, {"sb", 0, 2}, {"bt", 2, 3}};
    in.commodities = {fixtures::commodity("k", 0, 3, {10.0}, {3.0})};
    in.paths = {{{0, 1}, {2, 3}}};
    in.uncertainty.num_bands = 1;
    in.uncertainty.theta.assign(4, {{1}});
    in.module_capacity = 20.0;
    in.module_cost.assign(4, {2.0});
    in.validate();
    // Any split is optimal here; the relaxation returns a vertex, so only the
    // pair of trails is symmetric under swapping the path order.
    const PheromoneTable table = init_trails(in, 3);
    Instance mirrored = in;
    std::swap(mirrored.paths[0][0], mirrored.paths[0][1]);
    const PheromoneTable swapped = init_trails(mirrored, 3);
    CHECK(table.lower_bound() == doctest::Approx(swapped.lower_bound()));
    const double a = table.trail(0, 0, 0), b = table.trail(0, 1, 0);
    const double sa = swapped.trail(0, 0, 0), sb = swapped.trail(0, 1, 0);
    CHECK(std::min(a, b) == doctest::Approx(std::min(sa, sb)));
    CHECK(std::max(a, b) == doctest::Approx(std::max(sa, sb)));
    CHECK(a + b == doctest::Approx(1.0).epsilon(2 * kTrailFloor));
  }
  SUBCASE("zero relaxation values are raised to the floor") {
    const Instance in = fixtures::triangle({5.0}, 1, 1);
    model::RootRelaxation relax = model::relax_robust(in);
    const model::VariableIndex index(in, true);
    relax.primal[index.x(0, 0, 0)] = 0.0;
    relax.primal[index.x(0, 1, 0)] = 1.0;
    const PheromoneTable table = init_trails(in, relax, 3);
    CHECK(table.trail(0, 0, 0) == kTrailFloor);
    CHECK(table.initial(0, 0, 0) == kTrailFloor);
    CHECK(table.trail(0, 1, 0) == 1.0);
  }
}

TEST_CASE("score normalization") {
  CHECK(normalize_scores(std::vector<double>{42.0}) == std::vector<double>{1.0});
  CHECK(normalize_scores(std::vector<double>{3.0, 3.0, 3.0}) == std::vector<double>{1.0, 1.0, 1.0});
  const auto s = normalize_scores(std::vector<double>{10.0, 20.0, 15.0});
  CHECK(s[0] == 1.0);
  CHECK(s[1] == 0.0);
  CHECK(s[2] == doctest::Approx(0.5));
  const auto inf = normalize_scores(std::vector<double>{4.0, lp::kInf});
  CHECK(inf[0] == 1.0);
  CHECK(inf[1] == 0.0);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> value(-50.0, 50.0), scale(0.01, 100.0);
  for (int rep = 0; rep < 200; ++rep) {
    std::vector<double> raw(2 + rep % 4), scaled;
    for (double& v : raw) v = value(rng);
    const double f = scale(rng);
    for (double v : raw) scaled.push_back(f * v);
    const auto a = normalize_scores(raw), b = normalize_scores(scaled);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-12));
  }
}

TEST_CASE("move probabilities") {
  const std::vector<double> trails{0.2, 0.6, 0.2};
  const std::vector<double> scores{1.0, 0.0, 0.5};
  const auto p = move_probabilities(trails, scores, 0.5);
  // (0.1 + 0.5, 0.3 + 0, 0.1 + 0.25) / 1.25
  CHECK(p[0] == doctest::Approx(0.48));
  CHECK(p[1] == doctest::Approx(0.24));
  CHECK(p[2] == doctest::Approx(0.28));

  const auto only_scores = move_probabilities(trails, scores, 0.0);
  CHECK(only_scores[0] == doctest::Approx(1.0 / 1.5));
  CHECK(only_scores[1] == 0.0);
  const auto only_trails = move_probabilities(trails, scores, 1.0);
  CHECK(only_trails[1] == doctest::Approx(0.6));

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int rep = 0; rep < 300; ++rep) {
    std::vector<double> tr(1 + rep % 5), raw(tr.size());
    for (double& v : tr) v = std::max(kTrailFloor, u(rng));
    for (double& v : raw) v = 100.0 * u(rng);
    const auto q = move_probabilities(tr, normalize_scores(raw), u(rng));
    double total = 0.0;
    for (double v : q) {
      CHECK(v >= 0.0);
      total += v;
    }
    CHECK(total == doctest::Approx(1.0));
  }
}

TEST_CASE("surrogate attractiveness prefers the cheaper path on an empty network") {
  Instance in = fixtures::triangle({5.0}, 1, 1);
  in.module_cost = {{1.0}, {1.0}, {1.0}};
  const AttractivenessEvaluator eval(in, Attractiveness::kSurrogate);
  const RoutingState empty(in);
  const auto raw = eval.raw_values(empty, 0, 0);
  CHECK(raw[0] == doctest::Approx(1.0));  // direct: one module on ac
  CHECK(raw[1] == doctest::Approx(2.0));  // two hops: one module each
  const auto score = normalize_scores(raw);
  CHECK(score[0] == 1.0);
  CHECK(score[1] == 0.0);

  const Instance single = fixtures::shared_link();
  const AttractivenessEvaluator one(single, Attractiveness::kSurrogate);
  CHECK(normalize_scores(one.raw_values(RoutingState(single), 0, 0)) == std::vector<double>{1.0});
}

TEST_CASE("surrogate attractiveness accounts for capacity already installed") {
  // With commodity k on the direct edge, m fits in the spare capacity there.
  Instance in = two_commodity_triangle();
  in.module_cost = {{1.0}, {1.0}, {1.0}};
  in.module_capacity = 20.0;
  const AttractivenessEvaluator eval(in, Attractiveness::kSurrogate);
  RoutingState partial(in);
  partial.assign(0, 0, 0);
  const auto raw = eval.raw_values(partial, 1, 0);
  CHECK(raw[0] == doctest::Approx(0.0));
  CHECK(raw[1] == doctest::Approx(2.0));
}

TEST_CASE("exact-lp attractiveness equals an independent relaxation solve") {
  const Instance in = two_commodity_triangle();
  const AttractivenessEvaluator eval(in, Attractiveness::kExactLp);
  const mip::MixedIntegerProgram nominal = model::build_nominal(in);
  const model::VariableIndex index(in, false);

  for (int first = -1; first < in.num_paths(0); ++first) {
    RoutingState partial(in);
    if (first >= 0) partial.assign(0, 0, first);
    AttractivenessEvaluator::Workspace ws;
    const auto raw = eval.raw_values(partial, 1, 0, ws);
    REQUIRE(raw.size() == 2);
    for (int p = 0; p < 2; ++p) {
      lp::LinearProgram fixed = nominal.lp;
      if (first >= 0) fixed.set_bounds(index.x(0, first, 0), 1.0, 1.0);
      fixed.set_bounds(index.x(1, p, 0), 1.0, 1.0);
      const oracle::LpVerdict verdict = oracle::enumerate_lp(fixed);
      REQUIRE(verdict.status == lp::Status::kOptimal);
      CHECK(raw[p] == doctest::Approx(verdict.objective));
    }
    // The warm-started and cold evaluations agree.
    CHECK(eval.raw_values(partial, 1, 0) == raw);
  }
}

TEST_CASE("construction order sorts by nominal demand then id") {
  Instance in = fixtures::shared_link();
  in.commodities.push_back(fixtures::commodity("k3", 0, 1, {150.0}, {1.0}));
  in.commodities.push_back(fixtures::commodity("k4", 0, 1, {10.0}, {1.0}));
  in.paths.assign(4, {{0}});
  CHECK(construction_order(in, 0) == std::vector<int>{1, 2, 0, 3});
}

TEST_CASE("construction with alpha 1 follows concentrated trails") {
  Instance in = fixtures::triangle({5.0, 6.0, 4.0}, 1, 1);
  PheromoneTable table = flat_table(in, 1.0, 0.0);
  const std::vector<int> chosen{1, 0, 1};
  for (int t = 0; t < 3; ++t) table.set_trail(0, 1 - chosen[t], t, 0.0);
  const AttractivenessEvaluator eval(in, Attractiveness::kSurrogate);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    std::mt19937_64 rng(seed);
    const RoutingState r = construct_routing(in, table, 1.0, eval, rng);
    for (int t = 0; t < 3; ++t) CHECK(r.path(0, t) == chosen[t]);
  }
}

TEST_CASE("construction with alpha 0 follows attractiveness alone") {
  // The direct path costs 10 per module and two hops cost 2: surrogate scores
  // are 0 and 1, so only the two-hop path is ever drawn.
  const Instance in = fixtures::triangle({5.0}, 1, 1);
  PheromoneTable table = flat_table(in, 1.0, 0.0);
  table.set_trail(0, 0, 0, 100.0);
  const AttractivenessEvaluator eval(in, Attractiveness::kSurrogate);
  std::mt19937_64 rng(5);
  for (int i = 0; i < 200; ++i) CHECK(construct_routing(in, table, 0.0, eval, rng).path(0, 0) == 1);
}

TEST_CASE("empirical move frequencies follow the probability formula") {
  const Instance in = fixtures::triangle({5.0}, 1, 1);
  PheromoneTable table = flat_table(in, 1.0, 0.0);
  table.set_trail(0, 0, 0, 0.3);
  table.set_trail(0, 1, 0, 0.7);
  const AttractivenessEvaluator eval(in, Attractiveness::kSurrogate);
  constexpr double alpha = 0.5;
  // Surrogate scores: direct 0, two hops 1.
  const double w0 = alpha * 0.3, w1 = alpha * 0.7 + (1.0 - alpha);
  const double p0 = w0 / (w0 + w1);

  constexpr int kDraws = 100000;
  std::mt19937_64 rng(2024);
  int hits = 0;
  for (int i = 0; i < kDraws; ++i) hits += construct_routing(in, table, alpha, eval, rng).path(0, 0) == 0;
  const double freq = static_cast<double>(hits) / kDraws;
  const double se = std::sqrt(p0 * (1.0 - p0) / kDraws);
  CHECK(std::abs(freq - p0) <= 3.0 * se);
}

TEST_CASE("constructed routings are complete and reproducible") {
  std::mt19937_64 gen(17);
  for (int rep = 0; rep < 25; ++rep) {
    const Instance in = oracle::random_tiny_instance(gen, {});
    const PheromoneTable table = init_trails(in, 3);
    for (Attractiveness mode : {Attractiveness::kExactLp, Attractiveness::kSurrogate}) {
      const AttractivenessEvaluator eval(in, mode);
      std::mt19937_64 a(rep), b(rep);
      const RoutingState ra = construct_routing(in, table, 0.5, eval, a);
      const RoutingState rb = construct_routing(in, table, 0.5, eval, b);
      CHECK(ra.complete());
      CHECK(ra.consistent_with(in));
      CHECK(ra == rb);
    }
  }
}

TEST_CASE("trail update examples") {
  const Instance in = fixtures::triangle({5.0}, 1, 1);
  const RoutingState direct = only_path(in, 0);

  SUBCASE("above-average solution is reinforced") {
    PheromoneTable table = flat_table(in, 0.5, 100.0);
    for (double c : {140.0, 150.0, 160.0}) table.push_cost(c);
    const std::vector<AntSolution> ants{{direct, 120.0}};
    CHECK(update_trails(table, ants) == doctest::Approx(150.0));
    CHECK(table.trail(0, 0, 0) == doctest::Approx(0.8));
    CHECK(table.trail(0, 1, 0) == doctest::Approx(0.5));
  }
  SUBCASE("average solution leaves trails unchanged") {
    PheromoneTable table = flat_table(in, 0.5, 100.0);
    table.push_cost(150.0);
    const std::vector<AntSolution> ants{{direct, 150.0}};
    update_trails(table, ants);
    CHECK(table.trail(0, 0, 0) == doctest::Approx(0.5));
  }
  SUBCASE("below-average solution is penalized down to the floor") {
    PheromoneTable table = flat_table(in, 0.5, 100.0);
    table.push_cost(150.0);
    update_trails(table, std::vector<AntSolution>{{direct, 170.0}});
    CHECK(table.trail(0, 0, 0) == doctest::Approx(0.5 - 0.5 * 0.4));
    update_trails(table, std::vector<AntSolution>{{direct, 1000.0}});
    CHECK(table.trail(0, 0, 0) == kTrailFloor);
  }
  SUBCASE("the first update sees the seeded window and keeps the initial trail") {
    PheromoneTable table = flat_table(in, 0.5, 100.0);
    CHECK_FALSE(table.window_mean().has_value());
    CHECK(update_trails(table, std::vector<AntSolution>{{direct, 130.0}}) == 130.0);
    CHECK(table.trail(0, 0, 0) == 0.5);
  }
  SUBCASE("window mean equal to the bound adds nothing") {
    PheromoneTable table = flat_table(in, 0.5, 100.0);
    table.push_cost(100.0);
    update_trails(table, std::vector<AntSolution>{{direct, 100.0}, {only_path(in, 1), 90.0}});
    CHECK(table.trail(0, 0, 0) == 0.5);
    CHECK(table.trail(0, 1, 0) == 0.5);
  }
  SUBCASE("the window keeps the last psi costs") {
    PheromoneTable table = flat_table(in, 0.5, 0.0, 2);
    update_trails(table, std::vector<AntSolution>{{direct, 10.0}, {direct, 20.0}, {direct, 30.0}});
    CHECK(table.window() == std::deque<double>{20.0, 30.0});
    CHECK(*table.window_mean() == 25.0);
  }
}

TEST_CASE("trails stay above the floor under random updates") {
  std::mt19937_64 gen(99);
  std::uniform_real_distribution<double> cost(50.0, 500.0);
  for (int rep = 0; rep < 20; ++rep) {
    const Instance in = oracle::random_tiny_instance(gen, {});
    PheromoneTable table = init_trails(in, 3);
    const AttractivenessEvaluator eval(in, Attractiveness::kSurrogate);
    for (int it = 0; it < 10; ++it) {
      std::vector<AntSolution> ants;
      for (int a = 0; a < 3; ++a) {
        std::mt19937_64 rng = ant_engine(rep, it, a);
        ants.push_back({construct_routing(in, table, 0.5, eval, rng), table.lower_bound() + cost(gen)});
      }
      update_trails(table, ants);
      for (double v : table.trails()) CHECK(v >= kTrailFloor);
      CHECK(static_cast<int>(table.window().size()) <= table.window_capacity());
    }
  }
}

TEST_CASE("parallel and serial ants agree") {
  std::mt19937_64 gen(5);
  for (int rep = 0; rep < 10; ++rep) {
    const Instance in = oracle::random_tiny_instance(gen, {});
    const PheromoneTable table = init_trails(in, 3);
    const AttractivenessEvaluator eval(in, Attractiveness::kExactLp);
    const AntParameters params{0.5, 8, 3, static_cast<std::uint64_t>(rep)};
    const auto serial = construct_ants(in, table, params, eval, 4, Execution::kSerial);
    const auto parallel = construct_ants(in, table, params, eval, 4, Execution::kParallel);
    REQUIRE(serial.size() == 8);
    std::vector<RoutingState> routings;
    for (std::size_t a = 0; a < serial.size(); ++a) {
      CHECK(serial[a].routing == parallel[a].routing);
      CHECK(serial[a].cost == parallel[a].cost);
      routings.push_back(serial[a].routing);
    }
    const auto s = evaluate_batch(in, routings, Execution::kSerial);
    const auto p = evaluate_batch(in, routings, Execution::kParallel);
    for (std::size_t i = 0; i < s.size(); ++i) {
      CHECK(s[i].cost == p[i].cost);
      CHECK(s[i].schedule == p[i].schedule);
      CHECK(s[i].cost == serial[i].cost);
    }
  }
}

TEST_CASE("ant engines depend only on seed, iteration and ant") {
  CHECK(ant_engine(1, 2, 3)() == ant_engine(1, 2, 3)());
  CHECK(ant_engine(1, 2, 3)() != ant_engine(1, 2, 4)());
  CHECK(ant_engine(1, 2, 3)() != ant_engine(1, 3, 3)());
  CHECK(ant_engine(1, 2, 3)() != ant_engine(2, 2, 3)());
}

TEST_CASE("colony runs are bounded, logged and reproducible") {
  std::mt19937_64 gen(8);
  const Instance in = oracle::random_tiny_instance(gen, {});
  const model::RootRelaxation relax = model::relax_robust(in);
  ColonyOptions opts;
  opts.ants.seed = 4;
  opts.max_iterations = 6;
  opts.time_limit = 30.0;
  std::vector<IterationRecord> log;
  const ColonyResult a = run_colony(in, opts, relax, [&](const IterationRecord& r) { log.push_back(r); });
  CHECK(a.iterations == 6);
  CHECK(log.size() == 18);
  CHECK(a.best.cost >= relax.bound - 1e-6);
  CHECK(a.best.cost == doctest::Approx(model::evaluate_routing(in, a.best.routing).cost));
  CHECK(a.best.gap == doctest::Approx(mip::gap_percent(a.best.cost, relax.bound)));
  double best = lp::kInf;
  for (const auto& r : log) {
    best = std::min(best, r.cost);
    CHECK(r.best == best);
  }
  CHECK(best == a.best.cost);

  opts.execution = Execution::kSerial;
  const ColonyResult b = run_colony(in, opts, relax);
  CHECK(b.best.routing == a.best.routing);
  CHECK(std::vector<double>(b.table.trails().begin(), b.table.trails().end()) ==
        std::vector<double>(a.table.trails().begin(), a.table.trails().end()));

  opts.time_limit = 0.0;
  CHECK_THROWS_AS(run_colony(in, opts, relax), std::invalid_argument);
}

TEST_CASE("attractiveness modes round-trip through text") {
  CHECK(parse_attractiveness("exact-lp") == Attractiveness::kExactLp);
  CHECK(parse_attractiveness(to_string(Attractiveness::kSurrogate)) == Attractiveness::kSurrogate);
  CHECK_THROWS_AS(parse_attractiveness("greedy"), std::invalid_argument);
}
