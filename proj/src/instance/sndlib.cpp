#include "rmnd/sndlib.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

namespace rmnd {
namespace {

struct Token {
  enum Kind { kWord, kOpen, kClose, kEnd } kind = kEnd;
  std::string text;
  int line = 0;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  Token next() {
    skip();
    Token t;
    t.line = line_;
    if (pos_ >= text_.size()) return t;
    const char ch = text_[pos_];
    if (ch == '(') {
      ++pos_;
      t.kind = Token::kOpen;
      return t;
    }
    if (ch == ')') {
      ++pos_;
      t.kind = Token::kClose;
      return t;
    }
    t.kind = Token::kWord;
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')' || c == '#') break;
      t.text.push_back(c);
      ++pos_;
    }
    return t;
  }

  Token peek() {
    const auto p = pos_;
    const int l = line_;
    Token t = next();
    pos_ = p;
    line_ = l;
    return t;
  }

 private:
  void skip() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == '\n') {
        ++line_;
        ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else if (c == '#' || (c == '?' && at_line_start())) {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  bool at_line_start() const {
    std::size_t p = pos_;
    while (p > 0 && (text_[p - 1] == ' ' || text_[p - 1] == '\t')) --p;
    return p == 0 || text_[p - 1] == '\n';
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
};

double parse_number(const Token& t) {
  double v = 0.0;
  const char* b = t.text.data();
  const char* e = b + t.text.size();
  auto [ptr, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || ptr != e) throw ParseError(t.line, "expected a number, got '" + t.text + "'");
  return v;
}

Token expect_word(Lexer& lex, const char* what) {
  Token t = lex.next();
  if (t.kind != Token::kWord) throw ParseError(t.line, std::string("expected ") + what);
  return t;
}

void expect(Lexer& lex, Token::Kind kind, const char* what) {
  Token t = lex.next();
  if (t.kind != kind) throw ParseError(t.line, std::string("expected ") + what);
}

struct RawLink {
  std::string id, a, b;
  double capacity = 0.0;
  double cost = 0.0;
  bool has_module = false;
  int line = 0;
};

struct RawDemand {
  std::string id, a, b;
  double value = 0.0;
  int line = 0;
};

}  // namespace

SndlibData parse_sndlib(std::string_view text) {
  Lexer lex(text);
  SndlibData out;
  std::vector<RawLink> links;
  std::vector<RawDemand> demands;
  bool seen_nodes = false;
  bool seen_links = false;
  bool seen_demands = false;

  while (true) {
    Token head = lex.next();
    if (head.kind == Token::kEnd) break;
    if (head.kind != Token::kWord) throw ParseError(head.line, "expected a section name");
    Token open = lex.next();
    if (open.kind != Token::kOpen)
      throw ParseError(head.line, "malformed section header '" + head.text + "': missing '('");
    const std::string& section = head.text;
    if (section == "NODES") {
      seen_nodes = true;
      while (lex.peek().kind != Token::kClose) {
        Token id = expect_word(lex, "a node id");
        out.network.nodes.push_back(id.text);
        if (lex.peek().kind == Token::kOpen) {
          lex.next();
          while (lex.peek().kind == Token::kWord) lex.next();
          expect(lex, Token::kClose, "')' after node coordinates");
        }
      }
      lex.next();
    } else if (section == "LINKS") {
      seen_links = true;
      while (lex.peek().kind != Token::kClose) {
        RawLink l;
        Token id = expect_word(lex, "a link id");
        l.id = id.text;
        l.line = id.line;
        expect(lex, Token::kOpen, "'(' before link endpoints");
        l.a = expect_word(lex, "link source").text;
        l.b = expect_word(lex, "link target").text;
        expect(lex, Token::kClose, "')' after link endpoints");
        // pre-installed capacity, its cost, routing cost, setup cost
        for (int i = 0; i < 4; ++i) parse_number(expect_word(lex, "a link number"));
        expect(lex, Token::kOpen, "'(' before module list");
        while (lex.peek().kind == Token::kWord) {
          const double cap = parse_number(lex.next());
          const double cost = parse_number(expect_word(lex, "module cost"));
          if (!l.has_module) {
            l.capacity = cap;
            l.cost = cost;
            l.has_module = true;
          }
        }
        expect(lex, Token::kClose, "')' after module list");
        links.push_back(std::move(l));
      }
      lex.next();
    } else if (section == "DEMANDS") {
      seen_demands = true;
      while (lex.peek().kind != Token::kClose) {
        RawDemand d;
        Token id = expect_word(lex, "a demand id");
        d.id = id.text;
        d.line = id.line;
        expect(lex, Token::kOpen, "'(' before demand endpoints");
        d.a = expect_word(lex, "demand source").text;
        d.b = expect_word(lex, "demand target").text;
        expect(lex, Token::kClose, "')' after demand endpoints");
        parse_number(expect_word(lex, "routing unit"));
        d.value = parse_number(expect_word(lex, "demand value"));
        expect_word(lex, "max path length");
        demands.push_back(std::move(d));
      }
      lex.next();
    } else {
      out.warnings.push_back("ignored section " + section + " (line " + std::to_string(head.line) + ")");
      int depth = 1;
      while (depth > 0) {
        Token t = lex.next();
        if (t.kind == Token::kEnd) throw ParseError(t.line, "unterminated section " + section);
        if (t.kind == Token::kOpen) ++depth;
        if (t.kind == Token::kClose) --depth;
      }
    }
  }
  if (!seen_nodes) throw ParseError(1, "missing NODES section");
  if (!seen_links) throw ParseError(1, "missing LINKS section");
  if (!seen_demands) throw ParseError(1, "missing DEMANDS section");

  for (const auto& l : links) {
    const int a = out.network.node_index(l.a);
    const int b = out.network.node_index(l.b);
    if (a < 0 || b < 0) throw ValidationError("link " + l.id + " references an unknown node");
    if (!l.has_module) throw ValidationError("link " + l.id + " lists no capacity module");
    out.network.edges.push_back(Edge{l.id, a, b});
    out.module_capacity.push_back(l.capacity);
    out.module_cost.push_back(l.cost);
  }
  for (std::size_t e = 1; e < out.module_capacity.size(); ++e)
    if (out.module_capacity[e] != out.module_capacity[0]) {
      out.warnings.push_back("links list different first-module capacities; using " +
                             std::to_string(out.module_capacity[0]));
      break;
    }
  for (const auto& d : demands) {
    const int a = out.network.node_index(d.a);
    const int b = out.network.node_index(d.b);
    if (a < 0 || b < 0) throw ValidationError("demand " + d.id + " references an unknown node");
    if (!(d.value > 0.0)) {
      out.warnings.push_back("skipped demand " + d.id + " with non-positive value");
      continue;
    }
    out.demands.push_back(BaseDemand{d.id, a, b, d.value});
  }
  out.network.validate();
  return out;
}

SndlibData parse_sndlib_file(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw std::runtime_error("cannot open " + path);
  std::stringstream buf;
  buf << file.rdbuf();
  SndlibData data = parse_sndlib(buf.str());
  auto slash = path.find_last_of('/');
  std::string stem = slash == std::string::npos ? path : path.substr(slash + 1);
  if (auto dot = stem.rfind('.'); dot != std::string::npos) stem.resize(dot);
  data.name = stem;
  return data;
}

Instance generate_multiperiod(const SndlibData& base, const GeneratorOptions& opt) {
  if (opt.periods < 1) throw std::invalid_argument("periods must be at least 1");
  if (opt.bands < 1) throw std::invalid_argument("bands must be at least 1");
  if (!(opt.deviation_fraction >= 0.0 && opt.deviation_fraction < 1.0))
    throw std::invalid_argument("deviation_fraction must lie in [0, 1)");
  // Band values must increase strictly; a nominal instance is theta_fraction = 0.
  if (opt.deviation_fraction == 0.0)
    throw std::invalid_argument("deviation_fraction 0 collapses the bands; use theta_fraction 0 instead");
  if (!(opt.theta_fraction >= 0.0 && opt.theta_fraction <= 1.0))
    throw std::invalid_argument("theta_fraction must lie in [0, 1]");
  if (base.network.num_edges() == 0) throw std::invalid_argument("base network has no links");

  Instance in;
  in.name = opt.name.empty() ? base.name : opt.name;
  in.network = base.network;
  in.num_periods = opt.periods;
  in.module_capacity = base.module_capacity.front();

  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> noise(-1.0, 1.0);
  const int T = opt.periods;
  const int K = opt.bands;
  for (const auto& d : base.demands) {
    Commodity c;
    c.id = d.id;
    c.source = d.source;
    c.target = d.target;
    for (int t = 0; t < T; ++t) {
      double nominal = d.value * std::pow(opt.growth, t);
      if (t > 0 && opt.demand_jitter > 0.0) nominal *= 1.0 + opt.demand_jitter * noise(rng);
      c.nominal_demand.push_back(nominal);
      std::vector<double> dev(K + 1, 0.0);
      for (int k = 1; k <= K; ++k) dev[k] = (static_cast<double>(k) / K) * opt.deviation_fraction * nominal;
      c.band_deviation.push_back(std::move(dev));
      c.negative_deviation.push_back(opt.deviation_fraction * nominal);
    }
    in.commodities.push_back(std::move(c));
  }
  const int C = in.num_commodities();
  const int E = in.num_edges();
  in.module_cost.assign(E, std::vector<double>(T, 0.0));
  for (int e = 0; e < E; ++e)
    for (int t = 0; t < T; ++t) in.module_cost[e][t] = base.module_cost[e] * std::pow(opt.cost_decay, t);
  const int theta = static_cast<int>(std::ceil(opt.theta_fraction * C - 1e-9));
  in.uncertainty.num_bands = K;
  in.uncertainty.theta.assign(E, std::vector<std::vector<int>>(T, std::vector<int>(K, std::max(0, theta))));
  in.paths = generate_paths(in.network, in.commodities, opt.paths);
  in.validate();
  return in;
}

}  // namespace rmnd
