#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "graphhardy/types.hpp"

namespace graphhardy {

struct Edge {
  VertexId u = 0;
  VertexId v = 0;
  double weight = 0.0;
};

enum class BoundaryMode { None, Torus, Reflecting };

/// Finite weighted graph (Gamma, mu, d). Immutable after construction; the
/// full metric is tabulated up front so ball queries are O(1) lookups.
class WeightedGraph {
 public:
  static constexpr std::size_t kMaxVertices = 4096;

  /// Duplicate (u,v) entries accumulate. Zero weights are dropped.
  /// Throws PreconditionError on negative weights, out-of-range ids, a
  /// disconnected graph, or more than kMaxVertices vertices.
  WeightedGraph(std::size_t n, const std::vector<Edge>& edges, BoundaryMode mode = BoundaryMode::None);

  std::size_t size() const { return n_; }
  BoundaryMode boundary_mode() const { return mode_; }

  double mu(VertexId x) const { return mu_[x]; }
  const std::vector<double>& measure() const { return mu_; }
  double total_measure() const { return total_mu_; }

  /// Neighbors of x including x itself when it carries a loop, ascending.
  std::span<const VertexId> neighbors(VertexId x) const {
    return {adj_.data() + row_[x], adj_.data() + row_[x + 1]};
  }
  std::span<const double> conductances(VertexId x) const {
    return {nu_.data() + row_[x], nu_.data() + row_[x + 1]};
  }
  double conductance(VertexId x, VertexId y) const;
  bool has_loop(VertexId x) const { return conductance(x, x) > 0.0; }
  std::size_t degree(VertexId x) const { return row_[x + 1] - row_[x]; }
  std::size_t max_degree() const;

  /// Canonical edge list with u <= v.
  std::vector<Edge> edges() const;

  int distance(VertexId x, VertexId y) const { return dist_[static_cast<std::size_t>(x) * n_ + y]; }
  int eccentricity(VertexId x) const { return ecc_[x]; }
  int diameter() const { return diameter_; }

  /// Members of B(x, r) ordered by distance from x (x first).
  std::span<const std::uint16_t> ball(VertexId x, int r) const;
  std::size_t ball_size(VertexId x, int r) const;
  /// mu(B(x, r)); any r beyond the eccentricity gives mu(Gamma).
  double ball_measure(VertexId x, int r) const;
  /// All vertices ordered by distance from x.
  std::span<const std::uint16_t> by_distance(VertexId x) const {
    return {order_.data() + static_cast<std::size_t>(x) * n_, n_};
  }
  /// Index into by_distance(x) where the sphere {d = s} starts; s in [0, ecc+1].
  std::size_t shell_start(VertexId x, int s) const { return shell_[shell_row_[x] + static_cast<std::size_t>(s)]; }

 private:
  void build_metric();

  std::size_t n_ = 0;
  BoundaryMode mode_ = BoundaryMode::None;
  std::vector<std::size_t> row_;
  std::vector<VertexId> adj_;
  std::vector<double> nu_;
  std::vector<double> mu_;
  double total_mu_ = 0.0;

  std::vector<std::uint16_t> dist_;
  std::vector<std::uint16_t> order_;
  std::vector<std::size_t> shell_row_;
  std::vector<std::size_t> shell_;
  std::vector<double> shell_mass_;
  std::vector<int> ecc_;
  int diameter_ = 0;
};

/// Integer radius for a real one: B(x, r) = B(x, ceil(r)), clamped to >= 1.
int ceil_radius(double r);

Ball make_ball(VertexId center, double radius);

/// Plain BFS distances from x (independent of the cached table).
std::vector<int> bfs_distances(const WeightedGraph& g, VertexId x);
int bfs_distance(const WeightedGraph& g, VertexId x, VertexId y);

/// Lazy nearest-neighbour lattice on {0..side-1}^dim with unit edges and a
/// loop of weight `laziness` at every vertex. Reflecting mode folds each
/// missing boundary neighbour into the loop so mu stays uniform.
WeightedGraph build_lattice(int dim, int side, double laziness = 1.0, BoundaryMode mode = BoundaryMode::Torus);

/// Two lazy 2D tori of the given side joined by a single unit edge between
/// their vertex 0. Returns the graph; the bridge endpoints are 0 and side^2.
WeightedGraph build_two_copies(int side, double laziness = 1.0);

/// Path 0-1-...-(n-1) with unit edges and optional loops.
WeightedGraph build_path(int n, double loop_weight = 0.0);

/// Edge-list text: `u v weight` per line, `#` comments, loops allowed.
/// Throws std::runtime_error naming the offending line.
WeightedGraph parse_edge_list(std::istream& in);
WeightedGraph load_edge_list(const std::string& path);

struct DoublingReport {
  double C_doubling = 0.0;
  double D_exponent = 0.0;
  double fitted_D = 0.0;
  VertexId worst_x = 0;
  int worst_r = 1;
  int worst_s = 1;
};

/// Smallest C with mu(B(x,r)) <= C (r/s)^D mu(B(x,s)) over all x and
/// 1 <= s <= r <= r_max. D defaults to the log-log regression slope.
DoublingReport fit_doubling(const WeightedGraph& g, int r_max, std::optional<double> D = std::nullopt);

struct DeltaAlphaResult {
  bool ok = false;
  double alpha = 0.0;
  std::optional<VertexId> missing_loop;
};

DeltaAlphaResult check_delta_alpha(const WeightedGraph& g);

struct PoincareReport {
  double C = 0.0;
  VertexId worst_center = 0;
  int worst_radius = 1;
  int balls = 0;
};

/// Smallest C with
///   sum_{B} |f - f_B|^2 mu <= C r0^2 sum_{x,y in 2B} |f(x)-f(y)|^2 nu(x,y)
/// over the sampled balls B = B(x0, r0). For every ball the extremal f is
/// found by a generalized eigenproblem; `random_trials` extra random f per
/// ball are evaluated as well. Empty `centers` samples up to 16 centers.
PoincareReport check_poincare(const WeightedGraph& g, const std::vector<int>& radii,
                              std::vector<VertexId> centers = {}, int random_trials = 4,
                              std::uint64_t seed = 1);

/// Both sides of the Poincare inequality for one function and ball.
struct PoincareSides {
  double variance = 0.0;
  double energy = 0.0;
};
PoincareSides poincare_sides(const WeightedGraph& g, const VertexFunction& f, const Ball& b);

}  // namespace graphhardy
