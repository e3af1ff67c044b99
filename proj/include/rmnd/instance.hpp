// Instance data model for robust multiperiod network design.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace rmnd {

// Raised for structurally invalid instance data.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised by deserialize_instance; field_path names the offending field,
// e.g. "commodities[2].nominal_demand".
class SchemaError : public std::runtime_error {
 public:
  SchemaError(std::string field_path, const std::string& what)
      : std::runtime_error(field_path + ": " + what), field_path_(std::move(field_path)) {}
  const std::string& field_path() const { return field_path_; }

 private:
  std::string field_path_;
};

struct Edge {
  std::string id;
  int a = 0;
  int b = 0;

  int other(int v) const { return v == a ? b : a; }
  bool operator==(const Edge&) const = default;
};

// Undirected graph; edges are addressed by their position in `edges`.
struct Network {
  std::vector<std::string> nodes;
  std::vector<Edge> edges;

  int num_nodes() const { return static_cast<int>(nodes.size()); }
  int num_edges() const { return static_cast<int>(edges.size()); }
  int node_index(std::string_view id) const;  // -1 when absent
  int edge_index(std::string_view id) const;  // -1 when absent
  void validate() const;

  bool operator==(const Network&) const = default;
};

struct Commodity {
  std::string id;
  int source = 0;
  int target = 0;
  std::vector<double> nominal_demand;               // [t]
  std::vector<std::vector<double>> band_deviation;  // [t][k], k = 0..K+, entry 0 is 0
  std::vector<double> negative_deviation;           // [t], largest downward deviation

  double deviation(int t, int band) const { return band_deviation[t][band]; }
  // [nominal - negative deviation, nominal + largest positive deviation]
  std::pair<double, double> demand_interval(int t) const;

  bool operator==(const Commodity&) const = default;
};

// Sequence of edge indices from a commodity's source to its target.
using Path = std::vector<int>;
// paths[c] lists the admissible paths of commodity c.
using PathSet = std::vector<std::vector<Path>>;

struct UncertaintyProfile {
  int num_bands = 0;                          // K+, positive bands 1..K+
  std::vector<std::vector<std::vector<int>>> theta;  // [e][t][k-1]

  int count(int e, int t, int band) const { return theta[e][t][band - 1]; }
  bool operator==(const UncertaintyProfile&) const = default;
};

struct Instance {
  std::string name;
  Network network;
  std::vector<Commodity> commodities;
  PathSet paths;
  UncertaintyProfile uncertainty;
  double module_capacity = 1.0;
  std::vector<std::vector<double>> module_cost;  // [e][t]
  int num_periods = 1;

  int num_commodities() const { return static_cast<int>(commodities.size()); }
  int num_edges() const { return network.num_edges(); }
  int num_bands() const { return uncertainty.num_bands; }
  int num_paths(int c) const { return static_cast<int>(paths[c].size()); }

  // Throws ValidationError naming the first broken invariant.
  void validate() const;

  bool operator==(const Instance&) const = default;
};

// Node sequence visited by `path` when walked from `source`; throws
// ValidationError if consecutive edges do not share an endpoint.
std::vector<int> path_nodes(const Network& network, int source, const Path& path);

// True when `path` is a simple source-target walk.
bool is_simple_path(const Network& network, int source, int target, const Path& path);

// Canonical JSON text; see FORMAT.md. Identical instances give identical bytes.
std::string serialize_instance(const Instance& instance);
Instance deserialize_instance(std::string_view text);

Instance load_instance(const std::string& path);
void save_instance(const Instance& instance, const std::string& path);

}  // namespace rmnd
