#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "rmnd/lp.hpp"

namespace rmnd::lp {

int LinearProgram::add_variable(double cost, double lower, double upper, std::string name) {
  cost_.push_back(cost);
  lower_.push_back(lower);
  upper_.push_back(upper);
  if (name.empty()) name = "C" + std::to_string(cost_.size() - 1);
  names_.push_back(std::move(name));
  return static_cast<int>(cost_.size()) - 1;
}

int LinearProgram::add_row(std::vector<Entry> entries, Sense sense, double rhs, std::string name) {
  if (name.empty()) name = "R" + std::to_string(rows_.size());
  rows_.push_back(Row{std::move(entries), sense, rhs, std::move(name)});
  return static_cast<int>(rows_.size()) - 1;
}

void LinearProgram::set_bounds(int j, double lower, double upper) {
  lower_.at(j) = lower;
  upper_.at(j) = upper;
}

double LinearProgram::objective_value(std::span<const double> x) const {
  double total = 0.0;
  for (std::size_t j = 0; j < cost_.size(); ++j) total += cost_[j] * x[j];
  return total;
}

double LinearProgram::row_activity(int i, std::span<const double> x) const {
  double total = 0.0;
  for (const auto& e : rows_[i].entries) total += e.value * x[e.column];
  return total;
}

void LinearProgram::validate() const {
  const int n = num_variables();
  for (int j = 0; j < n; ++j) {
    if (std::isnan(cost_[j]) || std::isinf(cost_[j]))
      throw std::invalid_argument("non-finite cost on column " + names_[j]);
    if (std::isnan(lower_[j]) || std::isnan(upper_[j]) || lower_[j] > upper_[j] ||
        lower_[j] == kInf || upper_[j] == -kInf)
      throw std::invalid_argument("invalid bounds on column " + names_[j]);
  }
  for (const auto& r : rows_) {
    if (!std::isfinite(r.rhs)) throw std::invalid_argument("non-finite rhs in row " + r.name);
    for (const auto& e : r.entries) {
      if (e.column < 0 || e.column >= n)
        throw std::invalid_argument("column index out of range in row " + r.name);
      if (!std::isfinite(e.value))
        throw std::invalid_argument("non-finite coefficient in row " + r.name);
    }
  }
}

double max_violation(const LinearProgram& lp, std::span<const double> x) {
  double worst = 0.0;
  for (int j = 0; j < lp.num_variables(); ++j) {
    worst = std::max(worst, lp.lower(j) - x[j]);
    worst = std::max(worst, x[j] - lp.upper(j));
  }
  for (int i = 0; i < lp.num_rows(); ++i) {
    const Row& r = lp.row(i);
    double scale = 1.0;
    for (const auto& e : r.entries) scale = std::max(scale, std::abs(e.value));
    const double act = lp.row_activity(i, x);
    double v = 0.0;
    switch (r.sense) {
      case Sense::kLessEqual: v = act - r.rhs; break;
      case Sense::kGreaterEqual: v = r.rhs - act; break;
      case Sense::kEqual: v = std::abs(act - r.rhs); break;
    }
    worst = std::max(worst, v / scale);
  }
  return worst;
}

std::optional<LinearProgram> with_fixings(const LinearProgram& lp, const Fixings& fixings,
                                          double tolerance) {
  LinearProgram fixed = lp;
  for (const auto& [j, v] : fixings) {
    if (j < 0 || j >= lp.num_variables()) throw std::out_of_range("fixing column out of range");
    if (v < lp.lower(j) - tolerance || v > lp.upper(j) + tolerance) return std::nullopt;
    fixed.set_bounds(j, v, v);
  }
  return fixed;
}

namespace {

std::string mps_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  std::string s(buf);
  if (s.size() > 12) {
    std::snprintf(buf, sizeof(buf), "%.6e", v);
    s = buf;
  }
  return s;
}

// Field positions of fixed MPS: 2-3, 5-12, 15-22, 25-36, 40-47, 50-61.
std::string mps_line(const std::string& f1, const std::string& f2, const std::string& f3,
                     const std::string& f4, const std::string& f5 = {},
                     const std::string& f6 = {}) {
  std::string line(61, ' ');
  auto put = [&line](std::size_t col, const std::string& s) {
    if (line.size() < col - 1 + s.size()) line.resize(col - 1 + s.size(), ' ');
    line.replace(col - 1, s.size(), s);
  };
  put(2, f1);
  put(5, f2);
  put(15, f3);
  put(25, f4);
  if (!f5.empty()) put(40, f5);
  if (!f6.empty()) put(50, f6);
  while (!line.empty() && line.back() == ' ') line.pop_back();
  return line;
}

}  // namespace

std::string to_mps(const LinearProgram& lp, const std::string& name) {
  // Columns and rows are renamed to 8-character ids; the original names go
  // into comment lines so that fixed-column readers accept the file.
  std::ostringstream out;
  const int n = lp.num_variables();
  const int m = lp.num_rows();
  auto rname = [](int i) { return "R" + std::to_string(i); };
  auto cname = [](int j) { return "C" + std::to_string(j); };
  out << "* rows/columns renamed; original names:\n";
  for (int i = 0; i < m; ++i) out << "* " << rname(i) << " " << lp.row(i).name << "\n";
  for (int j = 0; j < n; ++j) out << "* " << cname(j) << " " << lp.variable_name(j) << "\n";
  out << "NAME          " << name << "\n";
  out << "ROWS\n";
  out << " N  COST\n";
  for (int i = 0; i < m; ++i) {
    const char* t = lp.row(i).sense == Sense::kLessEqual   ? "L"
                    : lp.row(i).sense == Sense::kEqual     ? "E"
                                                           : "G";
    out << mps_line(t, rname(i), "", "") << "\n";
  }
  std::vector<std::vector<Entry>> columns(n);
  for (int i = 0; i < m; ++i)
    for (const auto& e : lp.row(i).entries) columns[e.column].push_back({i, e.value});
  out << "COLUMNS\n";
  for (int j = 0; j < n; ++j) {
    if (lp.cost(j) != 0.0) out << mps_line("", cname(j), "COST", mps_number(lp.cost(j))) << "\n";
    for (const auto& e : columns[j])
      out << mps_line("", cname(j), rname(e.column), mps_number(e.value)) << "\n";
    if (lp.cost(j) == 0.0 && columns[j].empty())
      out << mps_line("", cname(j), "COST", "0") << "\n";
  }
  out << "RHS\n";
  for (int i = 0; i < m; ++i)
    if (lp.row(i).rhs != 0.0) out << mps_line("", "RHS", rname(i), mps_number(lp.row(i).rhs)) << "\n";
  out << "BOUNDS\n";
  for (int j = 0; j < n; ++j) {
    const double lo = lp.lower(j);
    const double up = lp.upper(j);
    if (lo == up) {
      out << mps_line("FX", "BND", cname(j), mps_number(lo)) << "\n";
      continue;
    }
    if (lo == -kInf && up == kInf) {
      out << mps_line("FR", "BND", cname(j), "") << "\n";
      continue;
    }
    if (lo == -kInf) out << mps_line("MI", "BND", cname(j), "") << "\n";
    else if (lo != 0.0) out << mps_line("LO", "BND", cname(j), mps_number(lo)) << "\n";
    if (up != kInf) out << mps_line("UP", "BND", cname(j), mps_number(up)) << "\n";
  }
  out << "ENDATA\n";
  return out.str();
}

std::string to_string(Status s) {
  switch (s) {
    case Status::kOptimal: return "optimal";
    case Status::kInfeasible: return "infeasible";
    case Status::kUnbounded: return "unbounded";
    case Status::kNumericalFailure: return "numerical-failure";
  }
  return "unknown";
}

}  // namespace rmnd::lp
