// Acceptance checks: one PASS/FAIL line per criterion, non-zero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "rmnd/aco.hpp"
#include "rmnd/rins.hpp"
#include "rmnd/sndlib.hpp"

using namespace rmnd;

namespace {

using Clock = std::chrono::steady_clock;

struct Verdict {
  bool pass = false;
  std::string detail;
};

bool rel_equal(double a, double b, double tol) { return std::abs(a - b) <= tol * std::max(1.0, std::abs(b)); }

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

void fix_routing_bounds(const Instance& in, const model::VariableIndex& index, const RoutingState& r,
                        mip::MixedIntegerProgram& m) {
  for (int c = 0; c < in.num_commodities(); ++c)
    for (int t = 0; t < in.num_periods; ++t)
      for (int p = 0; p < in.num_paths(c); ++p) {
        const double v = r.path(c, t) == p ? 1.0 : 0.0;
        m.lp.set_bounds(index.x(c, p, t), v, v);
      }
}

double mip_optimum(const mip::MixedIntegerProgram& m) {
  const auto res = mip::solve_mip(m);
  return res.status == mip::Status::kOptimal ? res.objective : lp::kInf;
}

Verdict dualization() {
  std::mt19937_64 rng(1001);
  oracle::TinyOptions opt{3, 5, 2, 2, 1 << 30, true};
  long routings = 0, mismatches = 0, fractional = 0;
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    const Instance in = oracle::random_tiny_instance(rng, opt);
    const model::VariableIndex index(in, true);
    const mip::MixedIntegerProgram base = model::build_robust(in);
    std::vector<RoutingState> all;
    oracle::for_each_routing(in, [&](const RoutingState& r) { all.push_back(r); });
    routings += static_cast<long>(all.size());
#pragma omp parallel for schedule(dynamic, 4) reduction(+ : mismatches, fractional) reduction(max : worst)
    for (std::size_t k = 0; k < all.size(); ++k) {
      mip::MixedIntegerProgram m = base;
      fix_routing_bounds(in, index, all[k], m);
      const auto res = mip::solve_mip(m);
      const double eval = model::evaluate_routing(in, all[k]).cost;
      if (res.status != mip::Status::kOptimal) {
        ++mismatches;
        continue;
      }
      for (int e = 0; e < in.num_edges(); ++e)
        for (int t = 0; t < in.num_periods; ++t) {
          const double y = res.incumbent[index.y(e, t)];
          if (std::abs(y - std::round(y)) > 1e-9) ++fractional;
        }
      const double err = std::abs(res.objective - eval) / std::max(1.0, std::abs(eval));
      worst = std::max(worst, err);
      if (err > 1e-6) ++mismatches;
    }
  }
  return {mismatches == 0 && fractional == 0,
          fmt("200 instances, %ld routings, %ld mismatches, %ld fractional module counts, max rel err %.2e", routings,
              mismatches, fractional, worst)};
}

Verdict deviation_oracle() {
  std::mt19937_64 rng(2002);
  long mismatches = 0;
  for (int i = 0; i < 1000; ++i) {
    const int n = std::uniform_int_distribution<int>(1, 6)(rng);
    const int K = std::uniform_int_distribution<int>(1, 3)(rng);
    Instance in;
    in.name = "dev";
    in.network.nodes = {"u", "v"};
    in.network.edges = {{"uv", 0, 1}};
    in.uncertainty.num_bands = K;
    std::vector<int> counts(K);
    for (int& c : counts) c = std::uniform_int_distribution<int>(0, n)(rng);
    in.uncertainty.theta = {{counts}};
    std::vector<std::vector<double>> devs;
    for (int c = 0; c < n; ++c) {
      Commodity com;
      com.id = "k" + std::to_string(c);
      com.source = 0;
      com.target = 1;
      com.nominal_demand = {static_cast<double>(std::uniform_int_distribution<int>(1, 100)(rng))};
      std::vector<double> band{0.0};
      double level = 0.0;
      for (int k = 0; k < K; ++k) band.push_back(level += std::uniform_int_distribution<int>(1, 20)(rng));
      com.band_deviation = {band};
      com.negative_deviation = {band.back()};
      devs.emplace_back(band.begin() + 1, band.end());
      in.commodities.push_back(com);
      in.paths.push_back({{0}});
    }
    in.module_capacity = 10.0;
    in.module_cost = {{1.0}};
    in.validate();
    RoutingState r(in);
    for (int c = 0; c < n; ++c)
      if (std::uniform_int_distribution<int>(0, 4)(rng) != 0) r.assign(c, 0, 0);
    std::vector<std::vector<double>> on_edge;
    double nominal = 0.0;
    for (int c = 0; c < n; ++c)
      if (r.assigned(c, 0)) {
        on_edge.push_back(devs[c]);
        nominal += in.commodities[c].nominal_demand[0];
      }
    const double expected = nominal + oracle::brute_force_deviation(on_edge, counts);
    if (model::worst_case_load(in, 0, 0, r) != expected) ++mismatches;
  }
  return {mismatches == 0, fmt("1000 cases, %ld mismatches", mismatches)};
}

Verdict exactness() {
  std::mt19937_64 rng(3003);
  oracle::TinyOptions opt{3, 5, 2, 2, 12, true};
  long mismatches = 0, routings = 0;
  for (int i = 0; i < 50; ++i) {
    const Instance in = oracle::random_tiny_instance(rng, opt);
    double best = lp::kInf;
    oracle::for_each_routing(in, [&](const RoutingState& r) {
      ++routings;
      best = std::min(best, model::evaluate_routing(in, r).cost);
    });
    if (!rel_equal(mip_optimum(model::build_robust(in)), best, 1e-9)) ++mismatches;
  }
  return {mismatches == 0, fmt("50 instances, %ld routings enumerated, %ld mismatches", routings, mismatches)};
}

// Frozen tiny suite: |C||T| <= 12, |P_c| <= 3.
std::vector<Instance> tiny_suite() {
  std::mt19937_64 rng(4004);
  oracle::TinyOptions opt{5, 6, 2, 2, 1 << 30, true};
  std::vector<Instance> suite;
  while (suite.size() < 10) {
    Instance in = oracle::random_tiny_instance(rng, opt);
    int multi = 0;
    for (int c = 0; c < in.num_commodities(); ++c) multi += in.num_paths(c) > 1;
    if (in.num_commodities() * in.num_periods > 12 || multi < 2) continue;
    in.name = "tiny" + std::to_string(suite.size());
    suite.push_back(std::move(in));
  }
  return suite;
}

struct HybridRun {
  double aco = 0.0;
  double hybrid = 0.0;
};

struct SuiteRuns {
  std::vector<double> optimum;               // [instance]
  std::vector<std::vector<HybridRun>> runs;  // [seed][instance]
};

const SuiteRuns& suite_runs() {
  static const SuiteRuns runs = [] {
    SuiteRuns out;
    const auto suite = tiny_suite();
    for (const auto& in : suite) out.optimum.push_back(mip_optimum(model::build_robust(in)));
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      std::vector<HybridRun> row;
      for (const auto& in : suite) {
        rins::HybridOptions opts;
        opts.colony.ants.seed = seed;
        opts.colony.time_limit = 30.0;
        opts.rins = {0.1, 5.0};
        const auto res = rins::run_hybrid(in, opts, model::relax_robust(in));
        row.push_back({res.aco_best.cost, res.best.cost});
      }
      out.runs.push_back(std::move(row));
    }
    return out;
  }();
  return runs;
}

Verdict heuristic_quality() {
  const SuiteRuns& s = suite_runs();
  bool pass = true;
  std::string detail = std::string("30 s ant limit, 5 s search limit; optimal per seed:");
  double worst_gap = 0.0;
  for (const auto& row : s.runs) {
    int optimal = 0;
    for (std::size_t i = 0; i < row.size(); ++i) {
      const double gap = mip::gap_percent(row[i].hybrid, s.optimum[i]);
      worst_gap = std::max(worst_gap, gap);
      optimal += rel_equal(row[i].hybrid, s.optimum[i], 1e-9);
      pass = pass && gap <= 5.0;
    }
    pass = pass && optimal >= 9;
    detail += fmt(" %d/10", optimal);
  }
  return {pass, detail + fmt(", worst gap to optimum %.6f%%", worst_gap)};
}

Verdict improvement_direction() {
  const SuiteRuns& s = suite_runs();
  bool pass = true;
  std::string detail = "strict improvements per seed:";
  for (const auto& row : s.runs) {
    int strict = 0;
    for (const auto& r : row) {
      pass = pass && r.hybrid <= r.aco;
      strict += r.hybrid < r.aco - 1e-9;
    }
    pass = pass && strict >= 1;
    detail += fmt(" %d", strict);
  }
  return {pass, detail + ", never worse than the ant phase: " + (pass ? "yes" : "see counts")};
}

Verdict price_of_robustness() {
  int violations = 0, unequal = 0;
  for (Instance in : tiny_suite()) {
    const double robust = mip_optimum(model::build_robust(in));
    const double nominal = mip_optimum(model::build_nominal(in));
    if (robust < nominal - 1e-9 * std::max(1.0, nominal)) ++violations;
    for (auto& per_t : in.uncertainty.theta)
      for (auto& per_k : per_t) std::fill(per_k.begin(), per_k.end(), 0);
    if (!rel_equal(mip_optimum(model::build_robust(in)), nominal, 1e-9)) ++unequal;
  }
  return {violations == 0 && unequal == 0,
          fmt("10 instances, %d with robust < nominal, %d unequal at theta 0", violations, unequal)};
}

Verdict sampling_law() {
  // One commodity, two paths, one period.
  Instance in;
  in.name = "two-path";
  in.network.nodes = {"a", "b", "c"};
  in.network.edges = {{"ab", 0, 1}, {"ac", 0, 2}, {"bc", 1, 2}};
  Commodity k;
  k.id = "k";
  k.source = 0;
  k.target = 2;
  k.nominal_demand = {6.0};
  k.band_deviation = {{0.0, 1.0}};
  k.negative_deviation = {1.0};
  in.commodities = {k};
  in.paths = {{{1}, {0, 2}}};
  in.uncertainty.num_bands = 1;
  in.uncertainty.theta.assign(3, {{1}});
  in.module_capacity = 10.0;
  in.module_cost = {{1.0}, {3.0}, {1.0}};
  in.validate();

  const model::VariableIndex index(in, true);
  // Raw attractiveness by an independent vertex enumeration per candidate.
  const mip::MixedIntegerProgram nominal = model::build_nominal(in);
  const model::VariableIndex nominal_index(in, false);
  double raw[2];
  for (int p = 0; p < 2; ++p) {
    lp::LinearProgram fixed = nominal.lp;
    fixed.set_bounds(nominal_index.x(0, p, 0), 1.0, 1.0);
    raw[p] = oracle::enumerate_lp(fixed).objective;
  }
  const double best = std::min(raw[0], raw[1]), worst = std::max(raw[0], raw[1]);
  const double eta[2] = {(worst - raw[0]) / (worst - best), (worst - raw[1]) / (worst - best)};

  bool pass = true;
  std::string detail;
  const aco::AttractivenessEvaluator eval(in, aco::Attractiveness::kExactLp);
  for (double alpha : {0.5, 0.8}) {
    const double trail[2] = {0.35, 0.65};
    aco::PheromoneTable table(in, std::vector<double>(index.num_x(), 1.0), 0.0, 3);
    table.set_trail(0, 0, 0, trail[0]);
    table.set_trail(0, 1, 0, trail[1]);
    const double w0 = alpha * trail[0] + (1 - alpha) * eta[0];
    const double w1 = alpha * trail[1] + (1 - alpha) * eta[1];
    const double p0 = w0 / (w0 + w1);
    constexpr int kDraws = 100000;
    std::mt19937_64 rng(5005);
    int hits = 0;
    for (int i = 0; i < kDraws; ++i) hits += aco::construct_routing(in, table, alpha, eval, rng).path(0, 0) == 0;
    const double freq = static_cast<double>(hits) / kDraws;
    const double z = (freq - p0) / std::sqrt(p0 * (1 - p0) / kDraws);
    pass = pass && std::abs(z) <= 3.0;
    detail += fmt("%salpha %.1f: p %.5f, observed %.5f, z %+.2f", detail.empty() ? "" : "; ", alpha, p0, freq, z);
  }
  return {pass, "1e5 draws each, " + detail};
}

Verdict lp_core() {
  std::mt19937_64 rng(6006);
  int status_mismatch = 0, duality = 0, value = 0;
  double worst = 0.0;
  for (int i = 0; i < 500; ++i) {
    const lp::LinearProgram prob = oracle::random_lp(rng, 10, 10);
    const auto sol = lp::solve_lp(prob);
    const auto truth = oracle::enumerate_lp(prob);
    if (sol.status != truth.status) {
      ++status_mismatch;
      continue;
    }
    if (!sol.optimal()) continue;
    const double gap = std::abs(sol.objective - sol.dual_objective) / std::max(1.0, std::abs(sol.objective));
    worst = std::max(worst, gap);
    duality += gap > 1e-6;
    value += !rel_equal(sol.objective, truth.objective, 1e-6);
  }
  return {status_mismatch + duality + value == 0,
          fmt("500 LPs, %d status mismatches, %d duality gaps > 1e-6 (worst %.1e), %d objective mismatches",
              status_mismatch, duality, worst, value)};
}

Verdict example_fidelity() {
  const char* doc = R"(?SNDlib native format; type: network; version: 1.0
NODES (
  U ( 0.00 0.00 )
  V ( 1.00 0.00 )
)
LINKS (
  UV ( U V ) 0.00 0.00 0.00 0.00 ( 250.00 1.00 )
)
DEMANDS (
  C1 ( U V ) 1 100.00 UNLIMITED
  C2 ( U V ) 1 150.00 UNLIMITED
)
)";
  GeneratorOptions opt;
  opt.deviation_fraction = 0.1;
  opt.bands = 1;
  opt.theta_fraction = 1.0;
  opt.paths = 1;
  const Instance in = generate_multiperiod(parse_sndlib(doc), opt);
  const auto i1 = in.commodities[0].demand_interval(0);
  const auto i2 = in.commodities[1].demand_interval(0);
  RoutingState both(in);
  both.assign(0, 0, 0);
  both.assign(1, 0, 0);
  const double protected_load = model::worst_case_load(in, 0, 0, both);
  const bool pass = i1 == std::pair{90.0, 110.0} && i2 == std::pair{135.0, 165.0} && protected_load == 275.0;
  return {pass, fmt("intervals [%g,%g] [%g,%g], protected capacity %g", i1.first, i1.second, i2.first, i2.second,
                    protected_load)};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Verdict()> run;
    double budget;  // seconds; infinite when no runtime target applies
  };
  const double none = lp::kInf;
  const std::vector<Criterion> criteria{
      {"dualization equivalence", dualization, 60.0},
      {"DEV oracle", deviation_oracle, 10.0},
      {"exactness", exactness, 60.0},
      {"heuristic quality", heuristic_quality, none},
      {"improvement direction", improvement_direction, none},
      {"price of robustness", price_of_robustness, none},
      {"sampling law", sampling_law, none},
      {"LP core", lp_core, 30.0},
      {"example fidelity", example_fidelity, none},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = Clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(Clock::now() - start).count();
    const bool in_time = secs < c.budget;
    const bool pass = v.pass && in_time;
    failed += !pass;
    std::string timing = fmt("%.2f s", secs);
    if (c.budget != none) timing += fmt(" of %.0f s", c.budget);
    std::printf("%s  %-24s %s [%s]\n", pass ? "PASS" : "FAIL", c.name, v.detail.c_str(), timing.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
