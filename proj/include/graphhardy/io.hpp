#pragma once

#include <istream>
#include <string>

#include "graphhardy/graph.hpp"
#include "graphhardy/tent.hpp"
#include "graphhardy/types.hpp"
#include "graphhardy/varexp.hpp"

namespace graphhardy {

/// Parse failure carrying `source:line: message`.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& source, int line, const std::string& what)
      : std::runtime_error(source + ":" + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// Exponent file: `key=value` lines with kind=constant (q=), kind=logfamily (a=, b=, x0=)
/// or kind=table followed by `x p(x)` lines covering every vertex. `#` starts a comment.
ExponentFunction parse_exponent(const WeightedGraph& g, std::istream& in, const std::string& source = "<exponent>");
ExponentFunction load_exponent(const WeightedGraph& g, const std::string& path);

/// Vertex function file: `x value` lines; vertices not listed are 0.
VertexFunction parse_vertex_function(std::istream& in, std::size_t n, const std::string& source = "<function>");
VertexFunction load_vertex_function(const std::string& path, std::size_t n);

/// Tent CSV as written by write_tent_csv: optional `x k value` header, then entries.
SparseTent parse_tent(std::istream& in, std::size_t n, const std::string& source = "<tent>");
SparseTent load_tent(const std::string& path, std::size_t n);

}  // namespace graphhardy
