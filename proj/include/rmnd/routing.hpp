// Partial or complete assignment of one admissible path per (commodity, period).
#pragma once

#include <stdexcept>
#include <vector>

#include "rmnd/instance.hpp"

namespace rmnd {

struct Move {
  int commodity = 0;
  int path = 0;
  int period = 0;

  bool operator==(const Move&) const = default;
};

class RoutingState {
 public:
  static constexpr int kUnassigned = -1;

  RoutingState() = default;
  RoutingState(int num_commodities, int num_periods)
      : commodities_(num_commodities), periods_(num_periods),
        path_(static_cast<std::size_t>(num_commodities) * num_periods, kUnassigned) {}
  explicit RoutingState(const Instance& in) : RoutingState(in.num_commodities(), in.num_periods) {}

  int num_commodities() const { return commodities_; }
  int num_periods() const { return periods_; }

  int path(int c, int t) const { return path_[index(c, t)]; }
  bool assigned(int c, int t) const { return path(c, t) != kUnassigned; }

  // Throws std::logic_error when (c, t) already carries a path.
  void assign(int c, int t, int p) {
    auto& slot = path_[index(c, t)];
    if (slot != kUnassigned) throw std::logic_error("commodity already routed in this period");
    slot = p;
    ++assigned_;
  }
  void assign(const Move& m) { assign(m.commodity, m.period, m.path); }
  void set(int c, int t, int p) {
    auto& slot = path_[index(c, t)];
    if (slot == kUnassigned && p != kUnassigned) ++assigned_;
    if (slot != kUnassigned && p == kUnassigned) --assigned_;
    slot = p;
  }

  int size() const { return assigned_; }
  bool complete() const { return assigned_ == commodities_ * periods_; }

  std::vector<Move> moves() const {
    std::vector<Move> out;
    for (int t = 0; t < periods_; ++t)
      for (int c = 0; c < commodities_; ++c)
        if (assigned(c, t)) out.push_back({c, path(c, t), t});
    return out;
  }

  // Paths must index into the commodity's admissible list.
  bool consistent_with(const Instance& in) const {
    if (commodities_ != in.num_commodities() || periods_ != in.num_periods) return false;
    for (int c = 0; c < commodities_; ++c)
      for (int t = 0; t < periods_; ++t) {
        const int p = path(c, t);
        if (p != kUnassigned && (p < 0 || p >= in.num_paths(c))) return false;
      }
    return true;
  }

  bool operator==(const RoutingState&) const = default;

 private:
  std::size_t index(int c, int t) const {
    return static_cast<std::size_t>(t) * commodities_ + static_cast<std::size_t>(c);
  }

  int commodities_ = 0;
  int periods_ = 0;
  std::vector<int> path_;
  int assigned_ = 0;
};

}  // namespace rmnd
