// Yen's k loopless shortest paths on hop count with lexicographic tie-breaking.

#include <algorithm>
#include <deque>
#include <limits>
#include <optional>
#include <set>

#include "rmnd/sndlib.hpp"

namespace rmnd {
namespace {

struct Adjacency {
  std::vector<std::vector<std::pair<int, int>>> out;  // node -> (edge, neighbour), sorted by edge

  explicit Adjacency(const Network& net) : out(net.num_nodes()) {
    for (int e = 0; e < net.num_edges(); ++e) {
      out[net.edges[e].a].emplace_back(e, net.edges[e].b);
      out[net.edges[e].b].emplace_back(e, net.edges[e].a);
    }
  }
};

// Orders paths by length, then lexicographically by edge index.
struct PathLess {
  bool operator()(const Path& x, const Path& y) const {
    if (x.size() != y.size()) return x.size() < y.size();
    return x < y;
  }
};

// Lexicographically smallest hop-shortest path from `from` to `to` avoiding
// banned nodes and edges.
std::optional<Path> spur_path(const Adjacency& adj, int from, int to, const std::vector<char>& banned_node,
                              const std::vector<char>& banned_edge) {
  constexpr int kUnreached = std::numeric_limits<int>::max();
  std::vector<int> dist(adj.out.size(), kUnreached);
  std::deque<int> queue{to};
  dist[to] = 0;
  while (!queue.empty()) {
    const int u = queue.front();
    queue.pop_front();
    for (auto [e, v] : adj.out[u]) {
      if (banned_edge[e] || banned_node[v] || dist[v] != kUnreached) continue;
      dist[v] = dist[u] + 1;
      queue.push_back(v);
    }
  }
  if (dist[from] == kUnreached) return std::nullopt;
  Path path;
  int at = from;
  while (at != to) {
    for (auto [e, v] : adj.out[at]) {  // ascending edge index
      if (banned_edge[e] || dist[v] != dist[at] - 1) continue;
      if (banned_node[v]) continue;
      path.push_back(e);
      at = v;
      break;
    }
  }
  return path;
}

std::vector<Path> yen(const Network& network, int source, int target, int k) {
  Adjacency adj(network);
  for (auto& list : adj.out) std::sort(list.begin(), list.end());
  const int V = network.num_nodes();
  const int E = network.num_edges();
  std::vector<char> no_nodes(V, 0);
  std::vector<char> no_edges(E, 0);
  std::vector<Path> found;
  auto first = spur_path(adj, source, target, no_nodes, no_edges);
  if (!first) return found;
  found.push_back(*first);
  std::set<Path, PathLess> candidates;

  while (static_cast<int>(found.size()) < k) {
    const Path& last = found.back();
    const std::vector<int> walk = path_nodes(network, source, last);
    for (std::size_t i = 0; i < last.size(); ++i) {
      const int spur = walk[i];
      std::vector<char> banned_node(V, 0);
      std::vector<char> banned_edge(E, 0);
      for (std::size_t h = 0; h < i; ++h) banned_node[walk[h]] = 1;
      for (const auto& p : found)
        if (p.size() > i && std::equal(p.begin(), p.begin() + i, last.begin())) banned_edge[p[i]] = 1;
      auto tail = spur_path(adj, spur, target, banned_node, banned_edge);
      if (!tail) continue;
      Path total(last.begin(), last.begin() + i);
      total.insert(total.end(), tail->begin(), tail->end());
      candidates.insert(std::move(total));
    }
    // Drop candidates already accepted.
    while (!candidates.empty() &&
           std::find(found.begin(), found.end(), *candidates.begin()) != found.end())
      candidates.erase(candidates.begin());
    if (candidates.empty()) break;
    found.push_back(*candidates.begin());
    candidates.erase(candidates.begin());
  }
  return found;
}

}  // namespace

std::vector<Path> k_shortest_paths(const Network& network, int source, int target, int k) {
  if (k < 1) throw std::invalid_argument("k must be at least 1");
  // Relabel edges in id order so index comparisons follow edge ids.
  std::vector<int> order(network.num_edges());
  for (int e = 0; e < network.num_edges(); ++e) order[e] = e;
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return network.edges[a].id < network.edges[b].id; });
  Network sorted;
  sorted.nodes = network.nodes;
  for (int e : order) sorted.edges.push_back(network.edges[e]);
  std::vector<Path> found = yen(sorted, source, target, k);
  for (auto& path : found)
    for (int& e : path) e = order[e];
  return found;
}

PathSet generate_paths(const Network& network, std::span<const Commodity> commodities, int k) {
  PathSet out;
  out.reserve(commodities.size());
  for (const auto& c : commodities) {
    auto paths = k_shortest_paths(network, c.source, c.target, k);
    if (paths.empty())
      throw ValidationError("commodity " + c.id + ": source and target are disconnected");
    out.push_back(std::move(paths));
  }
  return out;
}

}  // namespace rmnd
