#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "graphhardy/graph.hpp"
#include "graphhardy/varexp.hpp"

namespace graphhardy::harness {

inline constexpr const char* kSchema = "v1";
inline constexpr const char* kVersion = "0.1.0";

struct BuiltGraph {
  std::unique_ptr<WeightedGraph> graph;
  double D = 1.0;  // lattice dimension, or the fitted doubling exponent for file graphs
  std::string description;
};

/// lattice:dim:side[:laziness[:torus|reflect|open]] | twocopies:side | path:n | file:path
BuiltGraph build_graph(const std::string& spec);
/// constant:q | logfamily:a:b:x0 | file:path
ExponentFunction build_exponent(const WeightedGraph& g, const std::string& spec);

/// Every selector accepted by `verify`, in report order.
const std::vector<std::string>& check_names();

struct Tolerances {
  double stability = 2.0;        // allowed factor between constants at K and 2K
  double residual = 1e-3;        // relative L^2 residual of the Hardy round trip
  double reconstruction = 1e-10;  // pointwise tent reconstruction
  double rescale = 100.0;        // cap on a global atom rescale
};

/// `key=value` items; unknown keys throw std::invalid_argument.
Tolerances parse_tolerances(const std::vector<std::string>& items);

struct RunConfig {
  std::string graph = "lattice:1:64";
  std::string p = "constant:2";
  std::vector<std::string> checks;
  int trials = 8;
  std::uint64_t seed = 1;
  int first = 0;   // first trial index; replays a stored worst case
  int levels = 0;  // 0 picks each check's default level cap
  std::string multiplier = "heat:2";
  std::string weight;  // vertex-function file; empty means w = 1
  Tolerances tol;
};

struct VerifyResult {
  nlohmann::json report;
  bool all_pass = false;
};

/// Runs the selected checks. Throws PreconditionError when a hypothesis fails and
/// std::invalid_argument on an unknown or empty selector list.
VerifyResult run_verify(const RunConfig& config);

/// Stable serialization: two-space indent and a trailing newline.
std::string dump(const nlohmann::json& j);

/// Writes through a temporary file in the same directory followed by a rename.
void write_atomic(const std::filesystem::path& path, const std::string& bytes);

struct DecomposeConfig {
  std::string graph = "lattice:1:64";
  std::string p = "constant:1.5";
  std::string input;
  bool tent_input = false;  // input is a tent CSV rather than a vertex function
  int levels = 0;
  std::filesystem::path out = ".";
};

struct DecomposeSummary {
  std::size_t atoms = 0;
  double residual = 0.0;
  double aggregate = 0.0;
  nlohmann::json json;
};

/// Writes decomposition.json and atoms.csv (plus atom_values.csv for Hardy input) into `out`.
DecomposeSummary run_decompose(const DecomposeConfig& config);

struct HeatmapConfig {
  std::string graph = "lattice:1:64";
  int horizon = 64;
  std::vector<VertexId> sources{0};
  std::filesystem::path out = ".";
};

/// Writes heat.csv (`n,x,y,p_n,bound,slack`) and heat_fit.json; returns the fit as JSON.
nlohmann::json run_heatmap(const HeatmapConfig& config);

}  // namespace graphhardy::harness
