#include <stdexcept>

#include "rmnd/model.hpp"

namespace rmnd::model {

VariableIndex::VariableIndex(const Instance& instance, bool robust)
    : paths_(instance.paths),
      robust_(robust),
      periods_(instance.num_periods),
      bands_(robust ? instance.num_bands() : 0) {
  for (const auto& e : instance.network.edges) edge_ids_.push_back(e.id);
  for (const auto& c : instance.commodities) commodity_ids_.push_back(c.id);
  const int C = instance.num_commodities();
  const int E = instance.num_edges();
  const int T = periods_;
  crossings_.assign(E, {});

  int col = 0;
  x_offset_.resize(C);
  for (int c = 0; c < C; ++c) {
    x_offset_[c] = col;
    for (int p = 0; p < static_cast<int>(paths_[c].size()); ++p)
      for (int t = 0; t < T; ++t) info_.push_back({Block::kX, -1, c, p, t, -1});
    col += static_cast<int>(paths_[c].size()) * T;
  }
  y_base_ = col;
  for (int e = 0; e < E; ++e)
    for (int t = 0; t < T; ++t) info_.push_back({Block::kY, e, -1, -1, t, -1});
  col += E * T;
  w_base_ = col;
  if (robust_) {
    for (int e = 0; e < E; ++e)
      for (int t = 0; t < T; ++t)
        for (int k = 1; k <= bands_; ++k) info_.push_back({Block::kW, e, -1, -1, t, k});
    col += E * T * bands_;
  }
  z_base_ = col;
  z_offset_.resize(C);
  for (int c = 0; c < C; ++c) {
    z_offset_[c].assign(paths_[c].size(), -1);
    for (int p = 0; p < static_cast<int>(paths_[c].size()); ++p) {
      const Path& path = paths_[c][p];
      for (int pos = 0; pos < static_cast<int>(path.size()); ++pos)
        crossings_[path[pos]].push_back({c, p, pos});
      if (!robust_) continue;
      z_offset_[c][p] = col;
      for (int pos = 0; pos < static_cast<int>(path.size()); ++pos)
        for (int t = 0; t < T; ++t) info_.push_back({Block::kZ, path[pos], c, p, t, -1});
      col += static_cast<int>(path.size()) * T;
    }
  }
  total_ = col;
}

int VariableIndex::z(int e, int c, int p, int t) const {
  if (!robust_) return -1;
  const Path& path = paths_[c][p];
  for (int pos = 0; pos < static_cast<int>(path.size()); ++pos)
    if (path[pos] == e) return z_at(c, p, pos, t);
  return -1;
}

ColumnInfo VariableIndex::describe(int column) const {
  if (column < 0 || column >= total_) throw std::out_of_range("column out of range");
  return info_[column];
}

std::string VariableIndex::name(int column) const {
  const ColumnInfo info = describe(column);
  const std::string t = std::to_string(info.period);
  switch (info.block) {
    case Block::kX:
      return "x[" + commodity_ids_[info.commodity] + "," + std::to_string(info.path) + "," + t + "]";
    case Block::kY:
      return "y[" + edge_ids_[info.edge] + "," + t + "]";
    case Block::kW:
      return "w[" + edge_ids_[info.edge] + "," + t + "," + std::to_string(info.band) + "]";
    case Block::kZ:
      return "z[" + edge_ids_[info.edge] + "," + commodity_ids_[info.commodity] + "," +
             std::to_string(info.path) + "," + t + "]";
  }
  return {};
}

}  // namespace rmnd::model
