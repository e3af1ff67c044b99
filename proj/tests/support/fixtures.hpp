// Small hand-built instances shared by several tests.
#pragma once

#include <string>
#include <vector>

#include "rmnd/instance.hpp"

namespace fixtures {

inline rmnd::Commodity commodity(std::string id, int s, int t, std::vector<double> nominal,
                                 std::vector<double> deviation_per_band) {
  rmnd::Commodity c;
  c.id = std::move(id);
  c.source = s;
  c.target = t;
  c.nominal_demand = nominal;
  for (std::size_t p = 0; p < nominal.size(); ++p) {
    std::vector<double> dev{0.0};
    dev.insert(dev.end(), deviation_per_band.begin(), deviation_per_band.end());
    c.band_deviation.push_back(dev);
    c.negative_deviation.push_back(deviation_per_band.back());
  }
  return c;
}

// One link, one band, both commodities may deviate by 10%.
inline rmnd::Instance shared_link(int theta = 2, double capacity = 250.0) {
  rmnd::Instance in;
  in.name = "shared-link";
  in.network.nodes = {"u", "v"};
  in.network.edges = {{"uv", 0, 1}};
  in.commodities = {commodity("k1", 0, 1, {100.0}, {10.0}), commodity("k2", 0, 1, {150.0}, {15.0})};
  in.paths = {{{0}}, {{0}}};
  in.uncertainty.num_bands = 1;
  in.uncertainty.theta = {{{theta}}};
  in.module_capacity = capacity;
  in.module_cost = {{1.0}};
  in.num_periods = 1;
  in.validate();
  return in;
}

// Triangle a-b-c with one commodity a->c on two paths: direct (cost 10/module)
// or two hops (cost 1/module each).
inline rmnd::Instance triangle(std::vector<double> demand, int bands, int theta) {
  rmnd::Instance in;
  in.name = "triangle";
  in.network.nodes = {"a", "b", "c"};
  in.network.edges = {{"ab", 0, 1}, {"bc", 1, 2}, {"ac", 0, 2}};
  const int T = static_cast<int>(demand.size());
  std::vector<double> dev;
  for (int k = 1; k <= bands; ++k) dev.push_back(2.0 * k);
  in.commodities = {commodity("k", 0, 2, demand, dev)};
  in.paths = {{{2}, {0, 1}}};
  in.uncertainty.num_bands = bands;
  in.uncertainty.theta.assign(3, std::vector<std::vector<int>>(T, std::vector<int>(bands, theta)));
  in.module_capacity = 10.0;
  in.module_cost = {std::vector<double>(T, 1.0), std::vector<double>(T, 1.0), std::vector<double>(T, 10.0)};
  in.num_periods = T;
  in.validate();
  return in;
}

}  // namespace fixtures
