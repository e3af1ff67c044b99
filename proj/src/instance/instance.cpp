#include "rmnd/instance.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace rmnd {

using nlohmann::json;

int Network::node_index(std::string_view id) const {
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (nodes[i] == id) return static_cast<int>(i);
  return -1;
}

int Network::edge_index(std::string_view id) const {
  for (std::size_t i = 0; i < edges.size(); ++i)
    if (edges[i].id == id) return static_cast<int>(i);
  return -1;
}

void Network::validate() const {
  std::set<std::string> seen_nodes;
  for (const auto& n : nodes)
    if (!seen_nodes.insert(n).second) throw ValidationError("duplicate node id " + n);
  std::set<std::string> seen_edges;
  for (const auto& e : edges) {
    if (!seen_edges.insert(e.id).second) throw ValidationError("duplicate edge id " + e.id);
    if (e.a < 0 || e.a >= num_nodes() || e.b < 0 || e.b >= num_nodes())
      throw ValidationError("edge " + e.id + " references an unknown node");
    if (e.a == e.b) throw ValidationError("edge " + e.id + " is a self-loop");
  }
}

std::pair<double, double> Commodity::demand_interval(int t) const {
  const double neg = negative_deviation.empty() ? 0.0 : negative_deviation[t];
  return {nominal_demand[t] - neg, nominal_demand[t] + band_deviation[t].back()};
}

std::vector<int> path_nodes(const Network& network, int source, const Path& path) {
  std::vector<int> out{source};
  int at = source;
  for (int e : path) {
    if (e < 0 || e >= network.num_edges()) throw ValidationError("path uses unknown edge");
    const Edge& edge = network.edges[e];
    if (edge.a != at && edge.b != at)
      throw ValidationError("path edge " + edge.id + " does not continue the walk");
    at = edge.other(at);
    out.push_back(at);
  }
  return out;
}

bool is_simple_path(const Network& network, int source, int target, const Path& path) {
  if (path.empty()) return false;
  std::vector<int> walk;
  try {
    walk = path_nodes(network, source, path);
  } catch (const ValidationError&) {
    return false;
  }
  if (walk.back() != target) return false;
  std::set<int> unique(walk.begin(), walk.end());
  return unique.size() == walk.size();
}

void Instance::validate() const {
  network.validate();
  if (num_periods < 1) throw ValidationError("num_periods must be at least 1");
  if (!(module_capacity > 0.0)) throw ValidationError("module_capacity must be positive");
  const int T = num_periods;
  const int K = uncertainty.num_bands;
  if (K < 0) throw ValidationError("negative band count");
  const int C = num_commodities();
  std::set<std::string> ids;
  for (const auto& c : commodities) {
    if (!ids.insert(c.id).second) throw ValidationError("duplicate commodity id " + c.id);
    if (c.source < 0 || c.source >= network.num_nodes() || c.target < 0 ||
        c.target >= network.num_nodes())
      throw ValidationError("commodity " + c.id + " references an unknown node");
    if (c.source == c.target) throw ValidationError("commodity " + c.id + " has source == target");
    if (static_cast<int>(c.nominal_demand.size()) != T)
      throw ValidationError("commodity " + c.id + " needs one nominal demand per period");
    if (static_cast<int>(c.band_deviation.size()) != T)
      throw ValidationError("commodity " + c.id + " needs deviations per period");
    if (!c.negative_deviation.empty() && static_cast<int>(c.negative_deviation.size()) != T)
      throw ValidationError("commodity " + c.id + " needs one negative deviation per period");
    for (int t = 0; t < T; ++t) {
      if (!(c.nominal_demand[t] > 0.0))
        throw ValidationError("commodity " + c.id + " has a non-positive nominal demand");
      const auto& dev = c.band_deviation[t];
      if (static_cast<int>(dev.size()) != K + 1)
        throw ValidationError("commodity " + c.id + " needs K+1 deviation values per period");
      if (dev[0] != 0.0) throw ValidationError("commodity " + c.id + ": deviation of band 0 must be 0");
      for (int k = 1; k <= K; ++k)
        if (!(dev[k] > dev[k - 1]))
          throw ValidationError("commodity " + c.id + ": deviations must increase with the band");
    }
  }
  if (static_cast<int>(paths.size()) != C) throw ValidationError("path set does not cover all commodities");
  for (int c = 0; c < C; ++c) {
    const auto& list = paths[c];
    if (list.empty()) throw ValidationError("commodity " + commodities[c].id + " has no admissible path");
    std::set<Path> unique;
    for (const auto& p : list) {
      if (!is_simple_path(network, commodities[c].source, commodities[c].target, p))
        throw ValidationError("commodity " + commodities[c].id + " has an invalid path");
      if (!unique.insert(p).second)
        throw ValidationError("commodity " + commodities[c].id + " has duplicate paths");
    }
  }
  const int E = num_edges();
  if (static_cast<int>(module_cost.size()) != E) throw ValidationError("module_cost needs one row per edge");
  for (const auto& row : module_cost) {
    if (static_cast<int>(row.size()) != T) throw ValidationError("module_cost needs one value per period");
    for (double g : row)
      if (!(g >= 0.0) || !std::isfinite(g)) throw ValidationError("module_cost must be non-negative");
  }
  if (static_cast<int>(uncertainty.theta.size()) != E) throw ValidationError("theta needs one entry per edge");
  for (const auto& per_t : uncertainty.theta) {
    if (static_cast<int>(per_t.size()) != T) throw ValidationError("theta needs one entry per period");
    for (const auto& per_k : per_t) {
      if (static_cast<int>(per_k.size()) != K) throw ValidationError("theta needs one count per positive band");
      for (int v : per_k)
        if (v < 0 || v > C) throw ValidationError("theta counts must lie in [0, |C|]");
    }
  }
}

// ---- canonical JSON --------------------------------------------------------

std::string serialize_instance(const Instance& in) {
  json doc;
  doc["name"] = in.name;
  doc["num_periods"] = in.num_periods;
  doc["module_capacity"] = in.module_capacity;
  json nodes = json::array();
  for (const auto& n : in.network.nodes) nodes.push_back(n);
  json edges = json::array();
  for (const auto& e : in.network.edges)
    edges.push_back({{"id", e.id}, {"a", in.network.nodes[e.a]}, {"b", in.network.nodes[e.b]}});
  doc["network"] = {{"nodes", nodes}, {"edges", edges}};
  json commodities = json::array();
  for (const auto& c : in.commodities) {
    json item;
    item["id"] = c.id;
    item["source"] = in.network.nodes[c.source];
    item["target"] = in.network.nodes[c.target];
    item["nominal_demand"] = c.nominal_demand;
    item["deviations"] = c.band_deviation;
    item["negative_deviation"] = c.negative_deviation;
    commodities.push_back(std::move(item));
  }
  doc["commodities"] = commodities;
  json paths = json::array();
  for (const auto& list : in.paths) {
    json per = json::array();
    for (const auto& p : list) {
      json ids = json::array();
      for (int e : p) ids.push_back(in.network.edges[e].id);
      per.push_back(ids);
    }
    paths.push_back(per);
  }
  doc["paths"] = paths;
  doc["uncertainty"] = {{"num_bands", in.uncertainty.num_bands}, {"theta", in.uncertainty.theta}};
  doc["module_cost"] = in.module_cost;
  return doc.dump(1) + "\n";
}

namespace {

const json& field(const json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) throw SchemaError(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw SchemaError(path.empty() ? key : path + "." + key, "missing field");
  return *it;
}

std::string join(const std::string& path, const char* key) {
  return path.empty() ? std::string(key) : path + "." + key;
}

std::string at(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

double number(const json& v, const std::string& path) {
  if (!v.is_number()) throw SchemaError(path, "expected a number");
  return v.get<double>();
}

int integer(const json& v, const std::string& path) {
  if (!v.is_number_integer()) throw SchemaError(path, "expected an integer");
  return v.get<int>();
}

std::string text(const json& v, const std::string& path) {
  if (!v.is_string()) throw SchemaError(path, "expected a string");
  return v.get<std::string>();
}

const json& array(const json& v, const std::string& path) {
  if (!v.is_array()) throw SchemaError(path, "expected an array");
  return v;
}

std::vector<double> numbers(const json& v, const std::string& path) {
  std::vector<double> out;
  const json& a = array(v, path);
  for (std::size_t i = 0; i < a.size(); ++i) out.push_back(number(a[i], at(path, i)));
  return out;
}

}  // namespace

Instance deserialize_instance(std::string_view text_in) {
  json doc;
  try {
    doc = json::parse(text_in);
  } catch (const json::parse_error& e) {
    throw SchemaError("$", std::string("not valid JSON: ") + e.what());
  }
  Instance in;
  const std::string root;
  if (doc.contains("name")) in.name = text(doc["name"], "name");
  in.num_periods = integer(field(doc, "num_periods", root), "num_periods");
  in.module_capacity = number(field(doc, "module_capacity", root), "module_capacity");

  const json& net = field(doc, "network", root);
  const json& nodes = array(field(net, "nodes", "network"), "network.nodes");
  for (std::size_t i = 0; i < nodes.size(); ++i)
    in.network.nodes.push_back(text(nodes[i], at("network.nodes", i)));
  const json& edges = array(field(net, "edges", "network"), "network.edges");
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const std::string p = at("network.edges", i);
    Edge e;
    e.id = text(field(edges[i], "id", p), join(p, "id"));
    const std::string a = text(field(edges[i], "a", p), join(p, "a"));
    const std::string b = text(field(edges[i], "b", p), join(p, "b"));
    e.a = in.network.node_index(a);
    e.b = in.network.node_index(b);
    if (e.a < 0) throw SchemaError(join(p, "a"), "unknown node " + a);
    if (e.b < 0) throw SchemaError(join(p, "b"), "unknown node " + b);
    in.network.edges.push_back(std::move(e));
  }

  const json& comms = array(field(doc, "commodities", root), "commodities");
  for (std::size_t i = 0; i < comms.size(); ++i) {
    const std::string p = at("commodities", i);
    Commodity c;
    c.id = text(field(comms[i], "id", p), join(p, "id"));
    const std::string s = text(field(comms[i], "source", p), join(p, "source"));
    const std::string t = text(field(comms[i], "target", p), join(p, "target"));
    c.source = in.network.node_index(s);
    c.target = in.network.node_index(t);
    if (c.source < 0) throw SchemaError(join(p, "source"), "unknown node " + s);
    if (c.target < 0) throw SchemaError(join(p, "target"), "unknown node " + t);
    c.nominal_demand = numbers(field(comms[i], "nominal_demand", p), join(p, "nominal_demand"));
    const std::string dp = join(p, "deviations");
    const json& dev = array(field(comms[i], "deviations", p), dp);
    for (std::size_t t2 = 0; t2 < dev.size(); ++t2) c.band_deviation.push_back(numbers(dev[t2], at(dp, t2)));
    if (comms[i].contains("negative_deviation"))
      c.negative_deviation = numbers(comms[i]["negative_deviation"], join(p, "negative_deviation"));
    in.commodities.push_back(std::move(c));
  }

  const json& paths = array(field(doc, "paths", root), "paths");
  for (std::size_t c = 0; c < paths.size(); ++c) {
    const std::string p = at("paths", c);
    std::vector<Path> list;
    const json& per = array(paths[c], p);
    for (std::size_t k = 0; k < per.size(); ++k) {
      const std::string pk = at(p, k);
      Path path;
      const json& ids = array(per[k], pk);
      for (std::size_t h = 0; h < ids.size(); ++h) {
        const std::string id = text(ids[h], at(pk, h));
        const int e = in.network.edge_index(id);
        if (e < 0) throw SchemaError(at(pk, h), "unknown edge " + id);
        path.push_back(e);
      }
      list.push_back(std::move(path));
    }
    in.paths.push_back(std::move(list));
  }

  const json& unc = field(doc, "uncertainty", root);
  in.uncertainty.num_bands = integer(field(unc, "num_bands", "uncertainty"), "uncertainty.num_bands");
  const json& theta = array(field(unc, "theta", "uncertainty"), "uncertainty.theta");
  for (std::size_t e = 0; e < theta.size(); ++e) {
    const std::string pe = at("uncertainty.theta", e);
    std::vector<std::vector<int>> per_t;
    const json& te = array(theta[e], pe);
    for (std::size_t t = 0; t < te.size(); ++t) {
      const std::string pt = at(pe, t);
      std::vector<int> per_k;
      const json& tk = array(te[t], pt);
      for (std::size_t k = 0; k < tk.size(); ++k) per_k.push_back(integer(tk[k], at(pt, k)));
      per_t.push_back(std::move(per_k));
    }
    in.uncertainty.theta.push_back(std::move(per_t));
  }

  const json& cost = array(field(doc, "module_cost", root), "module_cost");
  for (std::size_t e = 0; e < cost.size(); ++e) in.module_cost.push_back(numbers(cost[e], at("module_cost", e)));

  try {
    in.validate();
  } catch (const ValidationError& e) {
    throw SchemaError("$", e.what());
  }
  return in;
}

Instance load_instance(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw std::runtime_error("cannot open " + path);
  std::stringstream buf;
  buf << file.rdbuf();
  return deserialize_instance(buf.str());
}

void save_instance(const Instance& instance, const std::string& path) {
  std::ofstream file(path);
  if (!file) throw std::runtime_error("cannot write " + path);
  file << serialize_instance(instance);
}

}  // namespace rmnd
