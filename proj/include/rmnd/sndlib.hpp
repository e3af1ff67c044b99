// SNDlib native-format ingestion and instance generation.
#pragma once

#include <cstdint>
#include <istream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rmnd/instance.hpp"

namespace rmnd {

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

struct BaseDemand {
  std::string id;
  int source = 0;
  int target = 0;
  double value = 0.0;

  bool operator==(const BaseDemand&) const = default;
};

struct SndlibData {
  std::string name;
  Network network;
  std::vector<BaseDemand> demands;
  std::vector<double> module_cost;      // [e], first listed module
  std::vector<double> module_capacity;  // [e], first listed module
  std::vector<std::string> warnings;
};

// Parses NODES, LINKS and DEMANDS in any order. Other sections are skipped
// with a warning. Throws ParseError for malformed text and ValidationError for
// references to unknown nodes.
SndlibData parse_sndlib(std::string_view text);
SndlibData parse_sndlib_file(const std::string& path);

struct GeneratorOptions {
  int periods = 1;
  double growth = 1.0;              // demand ratio between consecutive periods
  double deviation_fraction = 0.1;  // largest deviation as a fraction of nominal
  int bands = 1;                    // positive deviation bands K+
  double theta_fraction = 0.1;      // theta_etk = ceil(fraction * |C|)
  double cost_decay = 1.0;          // gamma_et = gamma_e * decay^(t-1)
  double demand_jitter = 0.0;       // relative noise on periods t >= 2, drawn from seed
  int paths = 5;                    // admissible paths per commodity
  std::uint64_t seed = 0;
  std::string name;
};

// Expands single-period SNDlib data into a multiperiod instance with band
// deviations and admissible paths.
Instance generate_multiperiod(const SndlibData& base, const GeneratorOptions& options);

// Up to k loopless paths per commodity, ordered by hop count and then by the
// lexicographic edge-id sequence. Throws ValidationError naming the
// commodity when source and target are disconnected.
PathSet generate_paths(const Network& network, std::span<const Commodity> commodities, int k);

// Single-pair variant of generate_paths; empty when disconnected.
std::vector<Path> k_shortest_paths(const Network& network, int source, int target, int k);

}  // namespace rmnd
