#include "rmnd/cli.hpp"

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "rmnd/rins.hpp"
#include "rmnd/sndlib.hpp"

namespace rmnd::cli {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

std::string num(double v, const char* format = "%.10g") {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, format, v);
  return buf;
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

RoutingState first_paths(const Instance& in) {
  RoutingState r(in);
  for (int c = 0; c < in.num_commodities(); ++c)
    for (int t = 0; t < in.num_periods; ++t) r.assign(c, t, 0);
  return r;
}

aco::ColonyOptions colony_options(const SolveSettings& s) {
  aco::ColonyOptions o;
  o.ants = {s.alpha, s.ants, s.window > 0 ? s.window : s.ants, s.seed};
  o.attractiveness = s.attractiveness;
  o.time_limit = s.time_limit;
  o.max_iterations = s.max_iterations;
  o.execution = s.execution;
  return o;
}

std::string read_file(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw std::runtime_error("cannot open " + path);
  std::stringstream buf;
  buf << file.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream file(path);
  if (!file) throw std::runtime_error("cannot write " + path);
  file << text;
  if (!file) throw std::runtime_error("write failed: " + path);
}

// Header line (omitted when empty) followed by one line per row.
std::string join_lines(const std::vector<std::string>& rows, std::string_view header) {
  std::string text(header);
  if (!text.empty()) text += '\n';
  for (const auto& r : rows) text += r + '\n';
  return text;
}

// Loads a canonical instance, attaching the file name to any error.
Instance load(const std::string& path) {
  try {
    Instance in = load_instance(path);
    if (in.name.empty()) in.name = fs::path(path).stem().string();
    return in;
  } catch (const std::exception& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

}  // namespace

std::string to_string(Method m) {
  switch (m) {
    case Method::kAco: return "aco";
    case Method::kAcoRins: return "aco-rins";
    case Method::kExact: return "exact";
    case Method::kLpBound: return "lp-bound";
  }
  return "unknown";
}

Method parse_method(const std::string& text) {
  for (Method m : {Method::kAco, Method::kAcoRins, Method::kExact, Method::kLpBound})
    if (to_string(m) == text) return m;
  throw UsageError("unknown method '" + text + "'");
}

void SolveSettings::validate() const {
  if (!(time_limit > 0.0)) throw UsageError("--time-limit must be positive");
  if (!(rins_limit > 0.0)) throw UsageError("--rins-limit must be positive");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw UsageError("--alpha must lie in [0, 1]");
  if (ants < 1) throw UsageError("--ants must be at least 1");
  if (window < 0) throw UsageError("--window must be non-negative");
  if (!(epsilon >= 0.0 && epsilon < 0.5)) throw UsageError("--epsilon must lie in [0, 0.5)");
  if (rins_every < 0) throw UsageError("--rins-every must be non-negative");
}

std::string report_row(const RunReport& r) {
  std::ostringstream os;
  os << r.id << ',' << r.nodes << ',' << r.edges << ',' << r.commodities << ',' << r.periods << ','
     << to_string(r.method) << ',' << num(r.cost) << ',' << num(r.bound) << ',' << num(r.gap_pct, "%.6f") << ','
     << num(r.wall_s, "%.3f") << ',' << r.seed;
  return os.str();
}

std::string ant_log_row(const aco::IterationRecord& r) {
  return "ant," + std::to_string(r.iteration) + ',' + std::to_string(r.ant) + ',' + num(r.cost) + ',' + num(r.zbar) +
         ',' + num(r.best) + ',' + num(r.elapsed, "%.6f") + ",,,";
}

std::string rins_log_row(long iteration, double cost, double best, double elapsed, int fixed, long nodes,
                         double improvement) {
  return "rins," + std::to_string(iteration) + ",," + num(cost) + ",," + num(best) + ',' + num(elapsed, "%.6f") +
         ',' + std::to_string(fixed) + ',' + std::to_string(nodes) + ',' + num(improvement);
}

SolveOutcome solve(const Instance& in, const SolveSettings& s) {
  s.validate();
  const auto start = Clock::now();
  SolveOutcome out;
  RunReport& rep = out.report;
  rep.id = in.name;
  rep.nodes = in.network.num_nodes();
  rep.edges = in.num_edges();
  rep.commodities = in.num_commodities();
  rep.periods = in.num_periods;
  rep.method = s.method;
  rep.seed = s.seed;

  auto on_ant = [&](const aco::IterationRecord& r) { out.log.push_back(ant_log_row(r)); };
  switch (s.method) {
    case Method::kLpBound: {
      const model::RootRelaxation relax = model::relax_robust(in);
      out.solution.cost = out.solution.lower_bound = relax.bound;
      out.solution.gap = 0.0;
      break;
    }
    case Method::kExact: {
      const model::VariableIndex index(in, true);
      const std::vector<double> hint = model::expand_point(in, index, first_paths(in));
      mip::MipOptions opts;
      opts.time_limit = s.time_limit;
      const mip::MipResult res = mip::solve_mip(model::build_robust(in), opts, std::span<const double>(hint));
      if (!res.has_incumbent()) throw mip::InconsistencyError("exact solve lost its feasible hint");
      const auto routing = model::routing_from_point(in, index, res.incumbent);
      if (!routing) throw mip::InconsistencyError("MIP incumbent does not encode a routing");
      out.solution = model::evaluate_routing(in, *routing);
      if (out.solution.cost > res.objective + 1e-6 * std::max(1.0, std::abs(res.objective)))
        throw mip::InconsistencyError("routing evaluation exceeds the MIP objective");
      out.solution.lower_bound = std::min(res.bound, out.solution.cost);
      out.solution.gap = mip::gap_percent(out.solution.cost, out.solution.lower_bound);
      break;
    }
    case Method::kAco: {
      const model::RootRelaxation relax = model::relax_robust(in);
      out.solution = aco::run_colony(in, colony_options(s), relax, on_ant).best;
      break;
    }
    case Method::kAcoRins: {
      const model::RootRelaxation relax = model::relax_robust(in);
      rins::HybridOptions opts{colony_options(s), {s.epsilon, s.rins_limit}, s.rins_every};
      rins::HybridObserver obs;
      obs.on_ant = on_ant;
      obs.on_rins = [&](long it, const rins::RinsReport& r, const model::Solution& sol) {
        out.log.push_back(rins_log_row(it, sol.cost, sol.cost, seconds_since(start), r.fixed, r.nodes, r.improvement));
      };
      out.solution = rins::run_hybrid(in, opts, relax, obs).best;
      break;
    }
  }
  rep.cost = out.solution.cost;
  rep.bound = out.solution.lower_bound;
  rep.gap_pct = mip::gap_percent(rep.cost, rep.bound);
  rep.wall_s = seconds_since(start);
  return out;
}

std::string solution_json(const Instance& in, const SolveOutcome& outcome) {
  using nlohmann::json;
  const model::Solution& sol = outcome.solution;
  json j;
  j["instance"] = in.name;
  j["method"] = to_string(outcome.report.method);
  j["cost"] = sol.cost;
  j["bound"] = sol.lower_bound;
  j["gap_pct"] = outcome.report.gap_pct;
  j["seed"] = outcome.report.seed;
  json routing = json::array();
  json installs = json::array();
  json point = json::array();
  if (sol.routing.consistent_with(in) && sol.routing.complete()) {
    for (int t = 0; t < in.num_periods; ++t)
      for (int c = 0; c < in.num_commodities(); ++c) {
        const int p = sol.routing.path(c, t);
        json edges = json::array();
        for (int e : in.paths[c][p]) edges.push_back(in.network.edges[e].id);
        routing.push_back({{"commodity", in.commodities[c].id}, {"period", t}, {"path", p}, {"edges", edges}});
      }
    for (int e = 0; e < in.num_edges(); ++e)
      installs.push_back({{"edge", in.network.edges[e].id}, {"modules", sol.schedule.installs[e]}});
    const model::VariableIndex index(in, true);
    for (double v : model::expand_point(in, index, sol.routing)) point.push_back(v);
  }
  j["routing"] = routing;
  j["installs"] = installs;
  j["point"] = point;
  return j.dump(2) + "\n";
}

std::vector<double> read_solution_point(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError("$", e.what());
  }
  if (!j.is_object() || !j.contains("point") || !j["point"].is_array()) throw SchemaError("point", "missing array");
  std::vector<double> point;
  for (std::size_t i = 0; i < j["point"].size(); ++i) {
    if (!j["point"][i].is_number()) throw SchemaError("point[" + std::to_string(i) + "]", "not a number");
    point.push_back(j["point"][i].get<double>());
  }
  return point;
}

namespace {

struct SolverFlags {
  SolveSettings settings;
  std::string method = "aco-rins";
  std::string attractiveness = "exact-lp";
  bool serial = false;

  SolveSettings resolve() const {
    SolveSettings s = settings;
    s.method = parse_method(method);
    s.attractiveness = aco::parse_attractiveness(attractiveness);
    s.execution = serial ? aco::Execution::kSerial : aco::Execution::kParallel;
    s.validate();
    return s;
  }
};

void add_solver_flags(CLI::App* app, SolverFlags& f, bool with_method) {
  SolveSettings& s = f.settings;
  if (with_method)
    app->add_option("--method", f.method, "aco | aco-rins | exact | lp-bound")
        ->check(CLI::IsMember({"aco", "aco-rins", "exact", "lp-bound"}))
        ->capture_default_str();
  app->add_option("--time-limit", s.time_limit, "seconds for the ant loop, or for the exact MIP")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app->add_option("--rins-limit", s.rins_limit, "seconds for the neighborhood sub-MIP")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app->add_option("--alpha", s.alpha, "trail weight")->check(CLI::Range(0.0, 1.0))->capture_default_str();
  app->add_option("--ants", s.ants, "ants per iteration")->check(CLI::PositiveNumber)->capture_default_str();
  app->add_option("--window", s.window, "moving-average length; 0 means --ants")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  app->add_option("--epsilon", s.epsilon, "fixing tolerance in [0, 0.5)")->capture_default_str();
  app->add_option("--seed", s.seed, "random seed")->capture_default_str();
  app->add_option("--attractiveness", f.attractiveness, "exact-lp | surrogate")
      ->check(CLI::IsMember({"exact-lp", "surrogate"}))
      ->capture_default_str();
  app->add_option("--max-iterations", s.max_iterations, "cap on ant iterations; negative for none")
      ->capture_default_str();
  app->add_option("--rins-every", s.rins_every, "also search every N ant iterations; 0 disables")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  app->add_flag("--serial", f.serial, "construct ants on one thread");
}

int cmd_generate(const std::string& sndlib, const GeneratorOptions& opts, const std::string& out_path,
                 std::ostream& out, std::ostream& err) {
  SndlibData data;
  try {
    data = parse_sndlib_file(sndlib);
  } catch (const std::exception& e) {
    throw ValidationError(sndlib + ": " + e.what());
  }
  for (const auto& w : data.warnings) err << sndlib << ": warning: " << w << '\n';
  GeneratorOptions o = opts;
  if (o.name.empty()) o.name = data.name.empty() ? fs::path(sndlib).stem().string() : data.name;
  const Instance in = generate_multiperiod(data, o);
  const std::string text = serialize_instance(in);
  if (out_path.empty()) out << text;
  else write_file(out_path, text);
  return kSuccess;
}

int cmd_solve(const std::string& path, const SolveSettings& s, const std::string& out_path,
              const std::string& log_path, std::ostream& out) {
  const Instance in = load(path);
  const SolveOutcome outcome = solve(in, s);
  if (!out_path.empty()) write_file(out_path, solution_json(in, outcome));
  if (!log_path.empty()) write_file(log_path, join_lines(outcome.log, kLogHeader));
  out << kReportHeader << '\n' << report_row(outcome.report) << '\n';
  return kSuccess;
}

int cmd_validate(const std::string& instance_path, const std::string& solution_path, std::ostream& out) {
  const Instance in = load(instance_path);
  std::vector<double> point;
  try {
    point = read_solution_point(read_file(solution_path));
  } catch (const std::exception& e) {
    throw ValidationError(solution_path + ": " + e.what());
  }
  const model::FeasibilityReport report = model::check_feasible(in, point);
  if (report.feasible()) {
    out << "feasible\n";
    return kSuccess;
  }
  for (const auto& v : report.violations) out << v.kind << ' ' << v.where << ' ' << num(v.magnitude) << '\n';
  out << report.violations.size() << " violation(s)\n";
  return kInputError;
}

// Report rows of one instance, one per method, in method order.
std::vector<std::string> bench_instance(const std::string& path, const std::vector<Method>& methods,
                                        const SolveSettings& base, const std::string& plot_dir) {
  const Instance in = load(path);
  std::vector<std::string> rows;
  for (Method m : methods) {
    SolveSettings s = base;
    s.method = m;
    const SolveOutcome outcome = solve(in, s);
    rows.push_back(report_row(outcome.report));
    if (!plot_dir.empty() && !outcome.log.empty())
      write_file((fs::path(plot_dir) / (in.name + "." + to_string(m) + ".csv")).string(),
                 join_lines(outcome.log, kLogHeader));
  }
  return rows;
}

int cmd_bench(const std::string& dir, const std::vector<Method>& methods, const SolveSettings& s, int jobs,
              const std::string& out_path, const std::string& plot_dir, std::ostream& out, std::ostream& err) {
  std::vector<std::string> files;
  if (!fs::is_directory(dir)) throw ValidationError(dir + ": not a directory");
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path().string());
  std::sort(files.begin(), files.end());
  if (files.empty()) throw ValidationError(dir + ": no .json instances");
  if (!plot_dir.empty()) fs::create_directories(plot_dir);

  std::vector<std::vector<std::string>> rows(files.size());
  if (jobs <= 1) {
    for (std::size_t i = 0; i < files.size(); ++i) rows[i] = bench_instance(files[i], methods, s, plot_dir);
  } else {
    // One process per instance; each writes its rows to a private file.
    const fs::path scratch = fs::temp_directory_path() / ("rmnd-bench-" + std::to_string(::getpid()));
    fs::create_directories(scratch);
    std::map<pid_t, std::size_t> running;
    int worst = kSuccess;
    auto reap = [&] {
      int status = 0;
      const pid_t pid = ::wait(&status);
      if (pid < 0) return;
      const std::size_t i = running.at(pid);
      running.erase(pid);
      const int code = WIFEXITED(status) ? WEXITSTATUS(status) : kInternal;
      if (code != kSuccess) {
        err << files[i] << ": worker failed with status " << code << '\n';
        worst = std::max(worst, code);
        return;
      }
      std::istringstream text(read_file((scratch / std::to_string(i)).string()));
      for (std::string line; std::getline(text, line);) rows[i].push_back(line);
    };
    out.flush();
    err.flush();
    std::cout.flush();
    for (std::size_t i = 0; i < files.size(); ++i) {
      while (static_cast<int>(running.size()) >= jobs) reap();
      const pid_t pid = ::fork();
      if (pid < 0) throw std::runtime_error("fork failed");
      if (pid == 0) {
        int code = kSuccess;
        try {
          write_file((scratch / std::to_string(i)).string(),
                     join_lines(bench_instance(files[i], methods, s, plot_dir), ""));
        } catch (const std::invalid_argument& e) {
          std::fprintf(stderr, "%s\n", e.what());
          code = kUsage;
        } catch (const std::logic_error& e) {
          std::fprintf(stderr, "%s\n", e.what());
          code = kInternal;
        } catch (const std::exception& e) {
          std::fprintf(stderr, "%s\n", e.what());
          code = kInputError;
        }
        ::_exit(code);
      }
      running[pid] = i;
    }
    while (!running.empty()) reap();
    fs::remove_all(scratch);
    if (worst != kSuccess) return worst;
  }

  std::vector<std::string> all;
  for (auto& r : rows) all.insert(all.end(), r.begin(), r.end());
  const std::string text = join_lines(all, kReportHeader);
  if (out_path.empty()) out << text;
  else write_file(out_path, text);
  return kSuccess;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Robust multiperiod network design: ant colony + neighborhood search"};
  app.set_config("--config", "", "key-value file with one section per subcommand; flags take precedence");
  app.require_subcommand(1);

  GeneratorOptions gen;
  std::string sndlib, gen_out;
  auto* g = app.add_subcommand("generate", "build an instance from an SNDlib native file");
  g->add_option("--sndlib", sndlib, "SNDlib native-format file")->required()->check(CLI::ExistingFile);
  g->add_option("--periods", gen.periods, "planning periods")->check(CLI::PositiveNumber)->capture_default_str();
  g->add_option("--paths", gen.paths, "admissible paths per commodity")->check(CLI::PositiveNumber)->capture_default_str();
  g->add_option("--bands", gen.bands, "positive deviation bands")->check(CLI::PositiveNumber)->capture_default_str();
  g->add_option("--growth", gen.growth, "demand ratio between periods")->capture_default_str();
  g->add_option("--deviation", gen.deviation_fraction, "largest deviation as a fraction of nominal")
      ->capture_default_str();
  g->add_option("--theta-fraction", gen.theta_fraction, "deviating share of commodities per band")
      ->capture_default_str();
  g->add_option("--cost-decay", gen.cost_decay, "module cost ratio between periods")->capture_default_str();
  g->add_option("--jitter", gen.demand_jitter, "relative demand noise from period 2")->capture_default_str();
  g->add_option("--seed", gen.seed, "random seed")->capture_default_str();
  g->add_option("--name", gen.name, "instance name");
  g->add_option("--out", gen_out, "output file; stdout when omitted");

  SolverFlags solve_flags;
  std::string solve_path, solve_out, solve_log;
  auto* so = app.add_subcommand("solve", "solve one instance and print a report row");
  so->add_option("instance", solve_path, "canonical instance file")->required();
  add_solver_flags(so, solve_flags, true);
  so->add_option("--out", solve_out, "solution file");
  so->add_option("--log", solve_log, "iteration log file");

  std::string val_instance, val_solution;
  auto* va = app.add_subcommand("validate", "check a solution file against the robust model");
  va->add_option("instance", val_instance, "canonical instance file")->required();
  va->add_option("solution", val_solution, "solution file")->required();

  SolverFlags bench_flags;
  std::string bench_dir, bench_out, bench_plots;
  std::vector<std::string> bench_methods{"exact", "aco-rins"};
  int jobs = 1;
  auto* be = app.add_subcommand("bench", "run methods over a directory of instances");
  be->add_option("directory", bench_dir, "directory of .json instances")->required();
  be->add_option("--methods", bench_methods, "methods to run per instance")
      ->check(CLI::IsMember({"aco", "aco-rins", "exact", "lp-bound"}))
      ->delimiter(',')
      ->capture_default_str();
  add_solver_flags(be, bench_flags, false);
  be->add_option("--jobs", jobs, "parallel worker processes")->check(CLI::PositiveNumber)->capture_default_str();
  be->add_option("--out", bench_out, "CSV file; stdout when omitted");
  be->add_option("--plot-dir", bench_plots, "directory for per-run iteration logs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsage;
  }

  try {
    if (g->parsed()) return cmd_generate(sndlib, gen, gen_out, out, err);
    if (so->parsed()) return cmd_solve(solve_path, solve_flags.resolve(), solve_out, solve_log, out);
    if (va->parsed()) return cmd_validate(val_instance, val_solution, out);
    if (be->parsed()) {
      std::vector<Method> methods;
      for (const auto& m : bench_methods) methods.push_back(parse_method(m));
      return cmd_bench(bench_dir, methods, bench_flags.resolve(), jobs, bench_out, bench_plots, out, err);
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const mip::InconsistencyError& e) {
    err << "internal inconsistency: " << e.what() << '\n';
    return kInternal;
  } catch (const std::logic_error& e) {
    err << "internal error: " << e.what() << '\n';
    return kInternal;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
  return kUsage;
}

}  // namespace rmnd::cli
