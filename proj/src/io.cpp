#include "graphhardy/io.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

namespace graphhardy {

namespace {

std::string strip(std::string s) {
  const auto hash = s.find('#');
  if (hash != std::string::npos) s.resize(hash);
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::ifstream open(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return in;
}

double number(const std::string& text, const std::string& source, int line) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw ParseError(source, line, "expected a number, got `" + text + "`");
  }
  if (used != text.size()) throw ParseError(source, line, "trailing characters in `" + text + "`");
  return v;
}

VertexId vertex(const std::string& text, std::size_t n, const std::string& source, int line) {
  const double v = number(text, source, line);
  if (v < 0 || v != static_cast<double>(static_cast<long long>(v)) || static_cast<std::size_t>(v) >= n) {
    throw ParseError(source, line, "vertex id `" + text + "` out of range");
  }
  return static_cast<VertexId>(v);
}

}  // namespace

ExponentFunction parse_exponent(const WeightedGraph& g, std::istream& in, const std::string& source) {
  std::map<std::string, std::pair<std::string, int>> keys;
  std::vector<double> table(g.size(), 0.0);
  std::vector<bool> seen(g.size(), false);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string s = strip(raw);
    if (s.empty()) continue;
    const auto eq = s.find('=');
    if (eq != std::string::npos) {
      keys[strip(s.substr(0, eq))] = {strip(s.substr(eq + 1)), line};
      continue;
    }
    std::istringstream ls(s);
    std::string xs, ps, extra;
    if (!(ls >> xs >> ps) || (ls >> extra)) throw ParseError(source, line, "expected `x p(x)` or `key=value`");
    const VertexId x = vertex(xs, g.size(), source, line);
    const double p = number(ps, source, line);
    if (!(p > 0.0 && std::isfinite(p))) throw ParseError(source, line, "exponent must be positive and finite");
    table[x] = p;
    seen[x] = true;
  }
  auto get = [&](const std::string& k) -> std::pair<double, int> {
    const auto it = keys.find(k);
    if (it == keys.end()) throw ParseError(source, line, "missing key `" + k + "`");
    return {number(it->second.first, source, it->second.second), it->second.second};
  };
  const auto kind = keys.find("kind");
  if (kind == keys.end()) throw ParseError(source, line, "missing key `kind`");
  const std::string& k = kind->second.first;
  if (k == "constant") {
    const auto [q, l] = get("q");
    if (!(q > 0.0 && std::isfinite(q))) throw ParseError(source, l, "q must be positive and finite");
    return ExponentFunction::constant(g, q);
  }
  if (k == "logfamily") {
    const auto [a, la] = get("a");
    const auto [b, lb] = get("b");
    const auto [x0, lx] = get("x0");
    if (x0 < 0 || static_cast<std::size_t>(x0) >= g.size()) throw ParseError(source, lx, "x0 out of range");
    if (!(a + std::min(0.0, b) > 0.0)) throw ParseError(source, la, "exponent family must stay positive");
    (void)lb;
    return ExponentFunction::log_family(g, a, b, static_cast<VertexId>(x0));
  }
  if (k == "table") {
    const auto miss = std::find(seen.begin(), seen.end(), false);
    if (miss != seen.end()) {
      throw ParseError(source, line, "table misses vertex " + std::to_string(miss - seen.begin()));
    }
    ExponentFunction p(table);
    p.set_log_holder(check_log_holder(g, table, 0));
    p.set_description("table:" + source);
    return p;
  }
  throw ParseError(source, kind->second.second, "unknown kind `" + k + "`");
}

ExponentFunction load_exponent(const WeightedGraph& g, const std::string& path) {
  auto in = open(path);
  return parse_exponent(g, in, path);
}

VertexFunction parse_vertex_function(std::istream& in, std::size_t n, const std::string& source) {
  VertexFunction f(n, 0.0);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string s = strip(raw);
    if (s.empty()) continue;
    std::istringstream ls(s);
    std::string xs, vs, extra;
    if (!(ls >> xs >> vs) || (ls >> extra)) throw ParseError(source, line, "expected `x value`");
    const double v = number(vs, source, line);
    if (!std::isfinite(v)) throw ParseError(source, line, "value must be finite");
    f[vertex(xs, n, source, line)] = v;
  }
  return f;
}

VertexFunction load_vertex_function(const std::string& path, std::size_t n) {
  auto in = open(path);
  return parse_vertex_function(in, n, path);
}

SparseTent parse_tent(std::istream& in, std::size_t n, const std::string& source) {
  SparseTent out;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string s = strip(raw);
    if (s.empty()) continue;
    std::istringstream ls(s);
    std::string xs, ks, vs, extra;
    if (!(ls >> xs >> ks >> vs) || (ls >> extra)) throw ParseError(source, line, "expected `x k value`");
    if (out.empty() && xs == "x" && ks == "k") continue;
    const VertexId x = vertex(xs, n, source, line);
    const double k = number(ks, source, line);
    if (k < 1 || k != static_cast<double>(static_cast<int>(k))) throw ParseError(source, line, "level must be an integer >= 1");
    const double v = number(vs, source, line);
    if (!std::isfinite(v)) throw ParseError(source, line, "value must be finite");
    out.push_back({x, static_cast<int>(k), v});
  }
  std::sort(out.begin(), out.end(), [](const TentEntry& a, const TentEntry& b) {
    return a.level != b.level ? a.level < b.level : a.y < b.y;
  });
  return out;
}

SparseTent load_tent(const std::string& path, std::size_t n) {
  auto in = open(path);
  return parse_tent(in, n, path);
}

}  // namespace graphhardy
