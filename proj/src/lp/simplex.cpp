// Bounded-variable revised simplex with an explicit dense basis inverse.
//
// Every row i gets a slack s_i so that a_i x + s_i = b_i, with slack bounds
// encoding the comparator. Phase 1 adds signed artificials only on rows whose
// slack cannot absorb the initial residual. Warm starts reuse a basis: a primal
// feasible one goes straight to phase 2, a dual feasible one through the dual
// simplex, anything else falls back to a cold start.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "rmnd/lp.hpp"

namespace rmnd::lp {
namespace {

enum class Outcome { kOptimal, kUnbounded, kInfeasible, kFailure };

class Simplex {
 public:
  Simplex(const LinearProgram& lp, std::span<const double> lower, std::span<const double> upper,
          const SolverOptions& opt)
      : lp_(lp), lower_(lower), upper_(upper), opt_(opt) {
    n_ = lp.num_variables();
    m_ = lp.num_rows();
    scale_.assign(m_, 1.0);
    for (int i = 0; i < m_; ++i) {
      double big = 0.0;
      for (const auto& e : lp.row(i).entries) big = std::max(big, std::abs(e.value));
      if (big > 0.0) scale_[i] = std::ldexp(1.0, -std::ilogb(big));
    }
    b_.resize(m_);
    for (int i = 0; i < m_; ++i) b_[i] = lp.row(i).rhs * scale_[i];
  }

  LpSolution run(const Basis* warm) {
    LpSolution sol;
    if (!presolve_empty_rows()) {
      sol.status = Status::kInfeasible;
      sol.message = "empty row with unsatisfiable right-hand side";
      return sol;
    }
    Outcome out = Outcome::kFailure;
    bool warm_ok = false;
    if (warm != nullptr) {
      warm_ok = try_warm(*warm, out);
      sol.warm_started = warm_ok;
    }
    if (!warm_ok) out = cold();
    sol.iterations = iterations_;
    switch (out) {
      case Outcome::kInfeasible: sol.status = Status::kInfeasible; return sol;
      case Outcome::kUnbounded: sol.status = Status::kUnbounded; return sol;
      case Outcome::kFailure:
        sol.status = Status::kNumericalFailure;
        sol.message = message_;
        return sol;
      case Outcome::kOptimal: break;
    }
    extract(sol);
    return sol;
  }

 private:
  // ---- setup -------------------------------------------------------------

  bool presolve_empty_rows() const {
    const double tol = opt_.tol.feasibility;
    for (int i = 0; i < m_; ++i) {
      const Row& r = lp_.row(i);
      bool empty = true;
      for (const auto& e : r.entries)
        if (e.value != 0.0) empty = false;
      if (!empty) continue;
      if (r.sense == Sense::kLessEqual && r.rhs < -tol) return false;
      if (r.sense == Sense::kGreaterEqual && r.rhs > tol) return false;
      if (r.sense == Sense::kEqual && std::abs(r.rhs) > tol) return false;
    }
    return true;
  }

  void build_columns(const std::vector<std::pair<int, double>>& artificials) {
    const int total = n_ + m_ + static_cast<int>(artificials.size());
    std::vector<int> count(total + 1, 0);
    for (int i = 0; i < m_; ++i)
      for (const auto& e : lp_.row(i).entries)
        if (e.value != 0.0) ++count[e.column];
    for (int i = 0; i < m_; ++i) count[n_ + i] = 1;
    for (std::size_t a = 0; a < artificials.size(); ++a) count[n_ + m_ + a] = 1;
    start_.assign(total + 1, 0);
    for (int j = 0; j < total; ++j) start_[j + 1] = start_[j] + count[j];
    index_.assign(start_[total], 0);
    value_.assign(start_[total], 0.0);
    std::vector<int> fill(start_.begin(), start_.end() - 1);
    for (int i = 0; i < m_; ++i)
      for (const auto& e : lp_.row(i).entries) {
        if (e.value == 0.0) continue;
        const int k = fill[e.column]++;
        index_[k] = i;
        value_[k] = e.value * scale_[i];
      }
    for (int i = 0; i < m_; ++i) {
      const int k = fill[n_ + i]++;
      index_[k] = i;
      value_[k] = 1.0;
    }
    for (std::size_t a = 0; a < artificials.size(); ++a) {
      const int k = fill[n_ + m_ + a]++;
      index_[k] = artificials[a].first;
      value_[k] = artificials[a].second;
    }
    total_ = total;
  }

  void set_structural_and_slack_bounds() {
    lo_.assign(total_, 0.0);
    up_.assign(total_, 0.0);
    for (int j = 0; j < n_; ++j) {
      lo_[j] = lower_[j];
      up_[j] = upper_[j];
    }
    for (int i = 0; i < m_; ++i) {
      switch (lp_.row(i).sense) {
        case Sense::kLessEqual: lo_[n_ + i] = 0.0; up_[n_ + i] = kInf; break;
        case Sense::kGreaterEqual: lo_[n_ + i] = -kInf; up_[n_ + i] = 0.0; break;
        case Sense::kEqual: lo_[n_ + i] = 0.0; up_[n_ + i] = 0.0; break;
      }
    }
    for (int j = n_ + m_; j < total_; ++j) {
      lo_[j] = 0.0;
      up_[j] = kInf;
    }
  }

  void phase2_costs() {
    cost_.assign(total_, 0.0);
    for (int j = 0; j < n_; ++j) cost_[j] = lp_.cost(j);
  }

  static BasisStatus resting_status(double lo, double up) {
    if (lo > -kInf) return BasisStatus::kAtLower;
    if (up < kInf) return BasisStatus::kAtUpper;
    return BasisStatus::kFree;
  }

  double resting_value(int j) const {
    switch (status_[j]) {
      case BasisStatus::kAtLower: return lo_[j];
      case BasisStatus::kAtUpper: return up_[j];
      default: return 0.0;
    }
  }

  // ---- linear algebra ----------------------------------------------------

  double dot_column(const std::vector<double>& y, int j) const {
    double s = 0.0;
    for (int k = start_[j]; k < start_[j + 1]; ++k) s += y[index_[k]] * value_[k];
    return s;
  }

  void ftran(int j, std::vector<double>& out) const {
    out.assign(m_, 0.0);
    for (int k = start_[j]; k < start_[j + 1]; ++k) {
      const int i = index_[k];
      const double v = value_[k];
      for (int r = 0; r < m_; ++r) out[r] += binv_[r * m_ + i] * v;
    }
  }

  void compute_duals(std::vector<double>& y) const {
    y.assign(m_, 0.0);
    for (int r = 0; r < m_; ++r) {
      const double c = cost_[head_[r]];
      if (c == 0.0) continue;
      const double* row = &binv_[r * m_];
      for (int i = 0; i < m_; ++i) y[i] += c * row[i];
    }
  }

  bool refactor() {
    std::vector<double> mat(static_cast<std::size_t>(m_) * m_, 0.0);
    for (int r = 0; r < m_; ++r) {
      const int j = head_[r];
      for (int k = start_[j]; k < start_[j + 1]; ++k) mat[index_[k] * m_ + r] = value_[k];
    }
    binv_.assign(static_cast<std::size_t>(m_) * m_, 0.0);
    for (int i = 0; i < m_; ++i) binv_[i * m_ + i] = 1.0;
    // Gauss-Jordan with partial pivoting on [B | I].
    for (int col = 0; col < m_; ++col) {
      int piv = col;
      double best = std::abs(mat[col * m_ + col]);
      for (int r = col + 1; r < m_; ++r)
        if (std::abs(mat[r * m_ + col]) > best) {
          best = std::abs(mat[r * m_ + col]);
          piv = r;
        }
      if (best < 1e-11) return false;
      if (piv != col) {
        for (int k = 0; k < m_; ++k) {
          std::swap(mat[piv * m_ + k], mat[col * m_ + k]);
          std::swap(binv_[piv * m_ + k], binv_[col * m_ + k]);
        }
      }
      const double inv = 1.0 / mat[col * m_ + col];
      for (int k = 0; k < m_; ++k) {
        mat[col * m_ + k] *= inv;
        binv_[col * m_ + k] *= inv;
      }
      for (int r = 0; r < m_; ++r) {
        if (r == col) continue;
        const double f = mat[r * m_ + col];
        if (f == 0.0) continue;
        for (int k = 0; k < m_; ++k) {
          mat[r * m_ + k] -= f * mat[col * m_ + k];
          binv_[r * m_ + k] -= f * binv_[col * m_ + k];
        }
      }
    }
    updates_since_refactor_ = 0;
    return true;
  }

  void recompute_basics() {
    std::vector<double> rhs = b_;
    for (int j = 0; j < total_; ++j) {
      if (status_[j] == BasisStatus::kBasic) continue;
      const double v = x_[j];
      if (v == 0.0) continue;
      for (int k = start_[j]; k < start_[j + 1]; ++k) rhs[index_[k]] -= value_[k] * v;
    }
    for (int r = 0; r < m_; ++r) {
      double s = 0.0;
      const double* row = &binv_[r * m_];
      for (int i = 0; i < m_; ++i) s += row[i] * rhs[i];
      x_[head_[r]] = s;
    }
  }

  void pivot(int r, const std::vector<double>& alpha) {
    const double p = alpha[r];
    double* prow = &binv_[r * m_];
    for (int k = 0; k < m_; ++k) prow[k] /= p;
    for (int i = 0; i < m_; ++i) {
      if (i == r || alpha[i] == 0.0) continue;
      const double f = alpha[i];
      double* row = &binv_[i * m_];
      for (int k = 0; k < m_; ++k) row[k] -= f * prow[k];
    }
    ++updates_since_refactor_;
  }

  bool maybe_refactor() {
    if (updates_since_refactor_ < opt_.refactor_interval) return true;
    if (!refactor()) {
      message_ = "singular basis during refactorization";
      return false;
    }
    recompute_basics();
    return true;
  }

  double primal_infeasibility(int j) const {
    const double v = x_[j];
    if (v < lo_[j]) return lo_[j] - v;
    if (v > up_[j]) return v - up_[j];
    return 0.0;
  }

  // Artificials only ever leave the basis.
  bool can_enter(int j) const { return j < n_ + m_ && lo_[j] < up_[j]; }

  // ---- primal simplex ----------------------------------------------------

  Outcome primal() {
    bool bland = false;
    int degenerate = 0;
    std::vector<double> y;
    std::vector<double> alpha;
    const double opt_tol = opt_.tol.optimality;
    const double piv_tol = opt_.tol.pivot;
    while (true) {
      if (iterations_ >= opt_.max_iterations) {
        message_ = "iteration limit";
        return Outcome::kFailure;
      }
      if (!maybe_refactor()) return Outcome::kFailure;
      compute_duals(y);

      int q = -1;
      double best = 0.0;
      double dq = 0.0;
      for (int j = 0; j < total_; ++j) {
        const BasisStatus st = status_[j];
        if (st == BasisStatus::kBasic || !can_enter(j)) continue;
        const double d = cost_[j] - dot_column(y, j);
        bool eligible = false;
        if (st == BasisStatus::kAtLower) eligible = d < -opt_tol;
        else if (st == BasisStatus::kAtUpper) eligible = d > opt_tol;
        else eligible = std::abs(d) > opt_tol;
        if (!eligible) continue;
        if (bland) {
          q = j;
          dq = d;
          break;
        }
        if (std::abs(d) > best) {
          best = std::abs(d);
          q = j;
          dq = d;
        }
      }
      if (q < 0) return Outcome::kOptimal;

      const double dir = dq < 0.0 ? 1.0 : -1.0;
      ftran(q, alpha);

      double theta = kInf;
      int leave = -1;
      double leave_alpha = 0.0;
      if (lo_[q] > -kInf && up_[q] < kInf) theta = up_[q] - lo_[q];
      for (int r = 0; r < m_; ++r) {
        const double a = alpha[r];
        if (std::abs(a) <= piv_tol) continue;
        const int j = head_[r];
        const double rate = -dir * a;  // d x_j / d theta
        double limit;
        if (rate < 0.0) {
          if (lo_[j] == -kInf) continue;
          limit = std::max(0.0, x_[j] - lo_[j]) / -rate;
        } else {
          if (up_[j] == kInf) continue;
          limit = std::max(0.0, up_[j] - x_[j]) / rate;
        }
        bool take = false;
        if (limit < theta - 1e-12) {
          take = true;
        } else if (limit <= theta + 1e-12) {
          take = leave < 0 || (bland ? j < head_[leave] : std::abs(a) > std::abs(leave_alpha));
        }
        if (take) {
          theta = limit;
          leave = r;
          leave_alpha = a;
        }
      }
      if (theta == kInf) return Outcome::kUnbounded;

      ++iterations_;
      if (theta < 1e-12) {
        if (++degenerate > opt_.degenerate_before_bland) bland = true;
      } else {
        degenerate = 0;
      }

      x_[q] += dir * theta;
      for (int r = 0; r < m_; ++r)
        if (alpha[r] != 0.0) x_[head_[r]] -= dir * theta * alpha[r];

      if (leave < 0) {
        // bound flip
        status_[q] = dir > 0 ? BasisStatus::kAtUpper : BasisStatus::kAtLower;
        x_[q] = dir > 0 ? up_[q] : lo_[q];
        continue;
      }
      const int out = head_[leave];
      const double rate = -dir * alpha[leave];
      if (rate < 0.0) {
        status_[out] = BasisStatus::kAtLower;
        x_[out] = lo_[out];
      } else {
        status_[out] = BasisStatus::kAtUpper;
        x_[out] = up_[out];
      }
      status_[q] = BasisStatus::kBasic;
      head_[leave] = q;
      pivot(leave, alpha);
    }
  }

  // ---- dual simplex ------------------------------------------------------

  bool dual_feasible(const std::vector<double>& y) const {
    const double tol = 1e-7;
    for (int j = 0; j < total_; ++j) {
      if (status_[j] == BasisStatus::kBasic || !can_enter(j)) continue;
      const double d = cost_[j] - dot_column(y, j);
      switch (status_[j]) {
        case BasisStatus::kAtLower: if (d < -tol) return false; break;
        case BasisStatus::kAtUpper: if (d > tol) return false; break;
        case BasisStatus::kFree: if (std::abs(d) > tol) return false; break;
        default: break;
      }
    }
    return true;
  }

  Outcome dual(int iteration_cap) {
    std::vector<double> y;
    std::vector<double> alpha;
    const double feas = opt_.tol.phase1;
    const double piv_tol = 1e-7;
    int local = 0;
    while (true) {
      if (local++ >= iteration_cap || iterations_ >= opt_.max_iterations) {
        message_ = "dual simplex iteration cap";
        return Outcome::kFailure;
      }
      if (!maybe_refactor()) return Outcome::kFailure;

      int r = -1;
      double worst = feas;
      for (int i = 0; i < m_; ++i) {
        const double v = primal_infeasibility(head_[i]);
        if (v > worst) {
          worst = v;
          r = i;
        }
      }
      if (r < 0) return Outcome::kOptimal;

      const int leaving = head_[r];
      const bool to_lower = x_[leaving] < lo_[leaving];
      compute_duals(y);
      const double* rho = &binv_[r * m_];
      int q = -1;
      double best_ratio = kInf;
      double best_alpha = 0.0;
      for (int j = 0; j < total_; ++j) {
        if (status_[j] == BasisStatus::kBasic || !can_enter(j)) continue;
        double a = 0.0;
        for (int k = start_[j]; k < start_[j + 1]; ++k) a += rho[index_[k]] * value_[k];
        if (std::abs(a) <= piv_tol) continue;
        const BasisStatus st = status_[j];
        bool eligible;
        if (st == BasisStatus::kFree) eligible = true;
        else if (st == BasisStatus::kAtLower) eligible = to_lower ? a < 0.0 : a > 0.0;
        else eligible = to_lower ? a > 0.0 : a < 0.0;
        if (!eligible) continue;
        const double d = cost_[j] - dot_column(y, j);
        const double ratio = std::abs(d) / std::abs(a);
        if (ratio < best_ratio - 1e-12 ||
            (ratio <= best_ratio + 1e-12 && std::abs(a) > std::abs(best_alpha))) {
          best_ratio = ratio;
          best_alpha = a;
          q = j;
        }
      }
      if (q < 0) return Outcome::kInfeasible;

      ftran(q, alpha);
      if (std::abs(alpha[r]) <= piv_tol) {
        message_ = "unstable dual pivot";
        return Outcome::kFailure;
      }
      const double target = to_lower ? lo_[leaving] : up_[leaving];
      const double step = (x_[leaving] - target) / alpha[r];
      x_[q] += step;
      for (int i = 0; i < m_; ++i)
        if (alpha[i] != 0.0) x_[head_[i]] -= alpha[i] * step;
      x_[leaving] = target;
      status_[leaving] = to_lower ? BasisStatus::kAtLower : BasisStatus::kAtUpper;
      status_[q] = BasisStatus::kBasic;
      head_[r] = q;
      pivot(r, alpha);
      ++iterations_;
    }
  }

  // ---- drivers -----------------------------------------------------------

  Outcome cold() {
    iterations_ = 0;
    // Initial nonbasic values of structural columns.
    std::vector<BasisStatus> st(n_ + m_);
    std::vector<double> xs(n_, 0.0);
    for (int j = 0; j < n_; ++j) {
      st[j] = resting_status(lower_[j], upper_[j]);
      xs[j] = st[j] == BasisStatus::kAtLower   ? lower_[j]
              : st[j] == BasisStatus::kAtUpper ? upper_[j]
                                               : 0.0;
    }
    std::vector<double> residual = b_;
    for (int i = 0; i < m_; ++i)
      for (const auto& e : lp_.row(i).entries) residual[i] -= e.value * scale_[i] * xs[e.column];

    std::vector<std::pair<int, double>> artificials;
    std::vector<double> slack_value(m_, 0.0);
    std::vector<bool> slack_basic(m_, false);
    for (int i = 0; i < m_; ++i) {
      double slo = 0.0;
      double sup = 0.0;
      switch (lp_.row(i).sense) {
        case Sense::kLessEqual: slo = 0.0; sup = kInf; break;
        case Sense::kGreaterEqual: slo = -kInf; sup = 0.0; break;
        case Sense::kEqual: break;
      }
      const double r = residual[i];
      if (r >= slo && r <= sup && lp_.row(i).sense != Sense::kEqual) {
        slack_basic[i] = true;
        slack_value[i] = r;
      } else {
        slack_value[i] = std::clamp(r, slo, sup);
        const double rest = r - slack_value[i];
        artificials.emplace_back(i, rest >= 0.0 ? 1.0 : -1.0);
      }
    }
    build_columns(artificials);
    set_structural_and_slack_bounds();
    status_.assign(total_, BasisStatus::kAtLower);
    x_.assign(total_, 0.0);
    head_.assign(m_, -1);
    for (int j = 0; j < n_; ++j) {
      status_[j] = st[j];
      x_[j] = xs[j];
    }
    for (int i = 0; i < m_; ++i) {
      const int j = n_ + i;
      x_[j] = slack_value[i];
      if (slack_basic[i]) {
        status_[j] = BasisStatus::kBasic;
        head_[i] = j;
      } else {
        status_[j] = slack_value[i] == lo_[j] ? BasisStatus::kAtLower : BasisStatus::kAtUpper;
        if (lo_[j] == up_[j]) status_[j] = BasisStatus::kAtLower;
      }
    }
    for (std::size_t a = 0; a < artificials.size(); ++a) {
      const int j = n_ + m_ + static_cast<int>(a);
      const int i = artificials[a].first;
      status_[j] = BasisStatus::kBasic;
      head_[i] = j;
      x_[j] = std::abs(residual[i] - slack_value[i]);
    }
    if (!refactor()) {
      message_ = "singular starting basis";
      return Outcome::kFailure;
    }
    recompute_basics();

    if (!artificials.empty()) {
      cost_.assign(total_, 0.0);
      for (int j = n_ + m_; j < total_; ++j) cost_[j] = 1.0;
      const Outcome p1 = primal();
      if (p1 == Outcome::kFailure) return p1;
      double infeas = 0.0;
      for (int j = n_ + m_; j < total_; ++j) infeas += x_[j];
      if (infeas > opt_.tol.feasibility) return Outcome::kInfeasible;
      if (!drive_out_artificials()) return Outcome::kFailure;
    }
    phase2_costs();
    return finish_primal();
  }

  bool drive_out_artificials() {
    std::vector<double> alpha;
    for (int r = 0; r < m_; ++r) {
      const int j_art = head_[r];
      if (j_art < n_ + m_) continue;
      const double* rho = &binv_[r * m_];
      int best = -1;
      double best_abs = 1e-7;
      for (int j = 0; j < n_ + m_; ++j) {
        if (status_[j] == BasisStatus::kBasic) continue;
        double a = 0.0;
        for (int k = start_[j]; k < start_[j + 1]; ++k) a += rho[index_[k]] * value_[k];
        if (std::abs(a) > best_abs) {
          best_abs = std::abs(a);
          best = j;
        }
      }
      if (best < 0) continue;  // redundant row; artificial stays basic at zero
      ftran(best, alpha);
      status_[j_art] = BasisStatus::kAtLower;
      x_[j_art] = 0.0;
      status_[best] = BasisStatus::kBasic;
      head_[r] = best;
      pivot(r, alpha);
    }
    for (int j = n_ + m_; j < total_; ++j) {
      lo_[j] = 0.0;
      up_[j] = 0.0;
      if (status_[j] != BasisStatus::kBasic) {
        status_[j] = BasisStatus::kAtLower;
        x_[j] = 0.0;
      }
    }
    if (!refactor()) {
      message_ = "singular basis after phase 1";
      return false;
    }
    recompute_basics();
    return true;
  }

  Outcome finish_primal() {
    for (int attempt = 0; attempt <= opt_.max_refactor_failures; ++attempt) {
      const Outcome out = primal();
      if (out != Outcome::kOptimal) return out;
      if (!refactor()) {
        message_ = "singular final basis";
        return Outcome::kFailure;
      }
      recompute_basics();
      double worst = 0.0;
      for (int r = 0; r < m_; ++r) worst = std::max(worst, primal_infeasibility(head_[r]));
      if (worst <= opt_.tol.feasibility) return Outcome::kOptimal;
      // Drift after refactorization: restore feasibility through the dual
      // simplex, which keeps the (dual feasible) optimal basis as a start.
      const Outcome d = dual(10 * (m_ + n_) + 100);
      if (d != Outcome::kOptimal) {
        message_ = "primal drift after refactorization";
        return d == Outcome::kInfeasible ? Outcome::kInfeasible : Outcome::kFailure;
      }
    }
    message_ = "repeated loss of feasibility";
    return Outcome::kFailure;
  }

  bool try_warm(const Basis& warm, Outcome& out) {
    if (static_cast<int>(warm.status.size()) != n_ + m_) return false;
    int basic = 0;
    for (auto s : warm.status)
      if (s == BasisStatus::kBasic) ++basic;
    if (basic != m_) return false;
    iterations_ = 0;
    build_columns({});
    set_structural_and_slack_bounds();
    status_ = warm.status;
    x_.assign(total_, 0.0);
    head_.clear();
    for (int j = 0; j < total_; ++j) {
      if (status_[j] == BasisStatus::kBasic) {
        head_.push_back(j);
        continue;
      }
      // Repair statuses that point at an infinite bound.
      if (status_[j] == BasisStatus::kAtLower && lo_[j] == -kInf) status_[j] = resting_status(lo_[j], up_[j]);
      if (status_[j] == BasisStatus::kAtUpper && up_[j] == kInf) status_[j] = resting_status(lo_[j], up_[j]);
      if (status_[j] == BasisStatus::kFree && (lo_[j] > -kInf || up_[j] < kInf))
        status_[j] = resting_status(lo_[j], up_[j]);
      x_[j] = resting_value(j);
    }
    if (!refactor()) return false;
    recompute_basics();
    phase2_costs();
    double worst = 0.0;
    for (int r = 0; r < m_; ++r) worst = std::max(worst, primal_infeasibility(head_[r]));
    if (worst <= opt_.tol.phase1) {
      out = finish_primal();
      return out != Outcome::kFailure;
    }
    std::vector<double> y;
    compute_duals(y);
    if (!dual_feasible(y)) return false;
    const Outcome d = dual(20 * (m_ + n_) + 200);
    if (d == Outcome::kFailure) return false;
    if (d == Outcome::kInfeasible) {
      out = Outcome::kInfeasible;
      return true;
    }
    out = finish_primal();
    return out != Outcome::kFailure;
  }

  void extract(LpSolution& sol) {
    compute_duals(y_);
    sol.status = Status::kOptimal;
    sol.primal.assign(x_.begin(), x_.begin() + n_);
    sol.dual.resize(m_);
    for (int i = 0; i < m_; ++i) sol.dual[i] = y_[i] * scale_[i];
    sol.reduced_cost.resize(n_);
    for (int j = 0; j < n_; ++j) sol.reduced_cost[j] = cost_[j] - dot_column(y_, j);
    sol.objective = lp_.objective_value(sol.primal);

    double dual_obj = 0.0;
    for (int i = 0; i < m_; ++i) dual_obj += sol.dual[i] * lp_.row(i).rhs;
    for (int j = 0; j < n_; ++j) {
      const double d = sol.reduced_cost[j];
      if (std::abs(d) <= opt_.tol.optimality * 10) {
        dual_obj += d * sol.primal[j];
      } else if (d > 0.0) {
        dual_obj += d * (lo_[j] > -kInf ? lo_[j] : sol.primal[j]);
      } else {
        dual_obj += d * (up_[j] < kInf ? up_[j] : sol.primal[j]);
      }
    }
    sol.dual_objective = dual_obj;

    Basis basis;
    basis.status.assign(status_.begin(), status_.begin() + n_ + m_);
    int basic = 0;
    for (auto s : basis.status)
      if (s == BasisStatus::kBasic) ++basic;
    if (basic == m_) sol.basis = std::move(basis);
  }

  const LinearProgram& lp_;
  std::span<const double> lower_;
  std::span<const double> upper_;
  const SolverOptions& opt_;
  int n_ = 0;
  int m_ = 0;
  int total_ = 0;
  std::vector<double> scale_;
  std::vector<double> b_;
  std::vector<int> start_;
  std::vector<int> index_;
  std::vector<double> value_;
  std::vector<double> lo_;
  std::vector<double> up_;
  std::vector<double> cost_;
  std::vector<double> x_;
  std::vector<BasisStatus> status_;
  std::vector<int> head_;
  std::vector<double> binv_;
  std::vector<double> y_;
  int updates_since_refactor_ = 0;
  int iterations_ = 0;
  std::string message_;
};

}  // namespace

LpSolution solve_lp(const LinearProgram& lp, const SolverOptions& options, const Basis* warm_start) {
  lp.validate();
  Simplex simplex(lp, lp.lowers(), lp.uppers(), options);
  return simplex.run(warm_start);
}

LpSolution solve_lp_with_bounds(const LinearProgram& lp, std::span<const double> lower,
                                std::span<const double> upper, const SolverOptions& options,
                                const Basis* warm_start) {
  if (static_cast<int>(lower.size()) != lp.num_variables() ||
      static_cast<int>(upper.size()) != lp.num_variables())
    throw std::invalid_argument("bound vectors do not match the column count");
  for (std::size_t j = 0; j < lower.size(); ++j)
    if (lower[j] > upper[j]) {
      LpSolution sol;
      sol.status = Status::kInfeasible;
      sol.message = "crossed bounds";
      return sol;
    }
  Simplex simplex(lp, lower, upper, options);
  return simplex.run(warm_start);
}

LpSolution solve_lp_with_fixings(const LinearProgram& lp, const Fixings& fixings,
                                 const SolverOptions& options, const Basis* warm_start) {
  auto fixed = with_fixings(lp, fixings);
  if (!fixed) {
    LpSolution sol;
    sol.status = Status::kInfeasible;
    sol.message = "fixing outside variable bounds";
    return sol;
  }
  return solve_lp(*fixed, options, warm_start);
}

}  // namespace rmnd::lp
