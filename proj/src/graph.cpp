#include "graphhardy/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <queue>
#include <sstream>
#include <stdexcept>

#include <Eigen/Dense>

#include "graphhardy/rng.hpp"

namespace graphhardy {

WeightedGraph::WeightedGraph(std::size_t n, const std::vector<Edge>& edges, BoundaryMode mode)
    : n_(n), mode_(mode) {
  if (n == 0) throw PreconditionError("graph has no vertices");
  if (n > kMaxVertices) {
    throw PreconditionError("graph has " + std::to_string(n) + " vertices; the cap is " +
                            std::to_string(kMaxVertices));
  }
  std::vector<std::map<VertexId, double>> rows(n);
  for (const Edge& e : edges) {
    if (e.u >= n || e.v >= n) throw PreconditionError("edge endpoint out of range");
    if (!(e.weight >= 0.0) || !std::isfinite(e.weight)) throw PreconditionError("edge weight must be finite and >= 0");
    if (e.weight == 0.0) continue;
    rows[e.u][e.v] += e.weight;
    if (e.u != e.v) rows[e.v][e.u] += e.weight;
  }
  row_.assign(n + 1, 0);
  mu_.assign(n, 0.0);
  for (std::size_t x = 0; x < n; ++x) {
    row_[x + 1] = row_[x] + rows[x].size();
    for (const auto& [y, w] : rows[x]) {
      adj_.push_back(y);
      nu_.push_back(w);
      mu_[x] += w;
    }
    if (mu_[x] <= 0.0) throw PreconditionError("vertex " + std::to_string(x) + " is isolated");
    total_mu_ += mu_[x];
  }
  build_metric();
}

void WeightedGraph::build_metric() {
  dist_.assign(n_ * n_, 0);
  order_.assign(n_ * n_, 0);
  ecc_.assign(n_, 0);
  std::vector<std::vector<std::size_t>> shells(n_);
  bool connected = true;

#pragma omp parallel for schedule(dynamic, 16) reduction(&& : connected)
  for (std::size_t s = 0; s < n_; ++s) {
    std::vector<int> d(n_, -1);
    std::uint16_t* ord = order_.data() + s * n_;
    std::size_t head = 0;
    std::size_t tail = 0;
    d[s] = 0;
    ord[tail++] = static_cast<std::uint16_t>(s);
    std::vector<std::size_t>& sh = shells[s];
    sh.push_back(0);
    int current = 0;
    while (head < tail) {
      const VertexId x = ord[head];
      if (d[x] != current) {
        sh.push_back(head);
        current = d[x];
      }
      ++head;
      for (std::size_t i = row_[x]; i < row_[x + 1]; ++i) {
        const VertexId y = adj_[i];
        if (d[y] < 0) {
          d[y] = d[x] + 1;
          ord[tail++] = static_cast<std::uint16_t>(y);
        }
      }
    }
    if (tail != n_) connected = false;
    sh.push_back(tail);
    ecc_[s] = current;
    for (std::size_t y = 0; y < n_; ++y) dist_[s * n_ + y] = static_cast<std::uint16_t>(std::max(d[y], 0));
  }
  if (!connected) throw PreconditionError("graph is not connected");

  shell_row_.assign(n_ + 1, 0);
  for (std::size_t x = 0; x < n_; ++x) shell_row_[x + 1] = shell_row_[x] + shells[x].size();
  shell_.resize(shell_row_[n_]);
  shell_mass_.resize(shell_row_[n_]);
  for (std::size_t x = 0; x < n_; ++x) {
    const std::uint16_t* ord = order_.data() + x * n_;
    double mass = 0.0;
    std::size_t done = 0;
    for (std::size_t s = 0; s < shells[x].size(); ++s) {
      const std::size_t end = shells[x][s];
      for (; done < end; ++done) mass += mu_[ord[done]];
      shell_[shell_row_[x] + s] = end;
      shell_mass_[shell_row_[x] + s] = mass;
    }
  }
  diameter_ = *std::max_element(ecc_.begin(), ecc_.end());
}

double WeightedGraph::conductance(VertexId x, VertexId y) const {
  const auto first = adj_.begin() + static_cast<std::ptrdiff_t>(row_[x]);
  const auto last = adj_.begin() + static_cast<std::ptrdiff_t>(row_[x + 1]);
  const auto it = std::lower_bound(first, last, y);
  if (it == last || *it != y) return 0.0;
  return nu_[static_cast<std::size_t>(it - adj_.begin())];
}

std::size_t WeightedGraph::max_degree() const {
  std::size_t best = 0;
  for (std::size_t x = 0; x < n_; ++x) best = std::max(best, degree(static_cast<VertexId>(x)));
  return best;
}

std::vector<Edge> WeightedGraph::edges() const {
  std::vector<Edge> out;
  for (std::size_t x = 0; x < n_; ++x) {
    for (std::size_t i = row_[x]; i < row_[x + 1]; ++i) {
      if (adj_[i] >= x) out.push_back({static_cast<VertexId>(x), adj_[i], nu_[i]});
    }
  }
  return out;
}

std::size_t WeightedGraph::ball_size(VertexId x, int r) const {
  if (r < 1) throw std::invalid_argument("ball radius must be >= 1");
  const int s = std::min(r, ecc_[x] + 1);
  return shell_start(x, s);
}

std::span<const std::uint16_t> WeightedGraph::ball(VertexId x, int r) const {
  return {order_.data() + static_cast<std::size_t>(x) * n_, ball_size(x, r)};
}

double WeightedGraph::ball_measure(VertexId x, int r) const {
  if (r < 1) throw std::invalid_argument("ball radius must be >= 1");
  if (r > ecc_[x]) return total_mu_;
  return shell_mass_[shell_row_[x] + static_cast<std::size_t>(r)];
}

int ceil_radius(double r) {
  const double c = std::ceil(r - 1e-12);
  return std::max(1, static_cast<int>(c));
}

Ball make_ball(VertexId center, double radius) { return Ball{center, ceil_radius(radius)}; }

std::vector<int> bfs_distances(const WeightedGraph& g, VertexId x) {
  std::vector<int> d(g.size(), -1);
  std::queue<VertexId> q;
  d[x] = 0;
  q.push(x);
  while (!q.empty()) {
    const VertexId u = q.front();
    q.pop();
    for (VertexId v : g.neighbors(u)) {
      if (d[v] < 0) {
        d[v] = d[u] + 1;
        q.push(v);
      }
    }
  }
  return d;
}

int bfs_distance(const WeightedGraph& g, VertexId x, VertexId y) {
  const int d = bfs_distances(g, x)[y];
  if (d < 0) throw PreconditionError("vertices are in different components");
  return d;
}

WeightedGraph build_lattice(int dim, int side, double laziness, BoundaryMode mode) {
  if (dim < 1 || dim > 3) throw PreconditionError("lattice dimension must be 1, 2 or 3");
  if (side < 3) throw PreconditionError("lattice side must be >= 3");
  if (!(laziness > 0.0)) throw PreconditionError("laziness must be > 0");
  if (mode == BoundaryMode::None) mode = BoundaryMode::Torus;
  std::size_t n = 1;
  for (int i = 0; i < dim; ++i) n *= static_cast<std::size_t>(side);
  if (n > WeightedGraph::kMaxVertices) throw PreconditionError("lattice exceeds the vertex cap");

  std::vector<Edge> edges;
  std::vector<int> coord(static_cast<std::size_t>(dim));
  for (std::size_t x = 0; x < n; ++x) {
    std::size_t rest = x;
    for (int i = 0; i < dim; ++i) {
      coord[static_cast<std::size_t>(i)] = static_cast<int>(rest % static_cast<std::size_t>(side));
      rest /= static_cast<std::size_t>(side);
    }
    double loop = laziness;
    std::size_t stride = 1;
    for (int i = 0; i < dim; ++i) {
      const int c = coord[static_cast<std::size_t>(i)];
      if (c + 1 < side) {
        edges.push_back({static_cast<VertexId>(x), static_cast<VertexId>(x + stride), 1.0});
      } else if (mode == BoundaryMode::Torus) {
        edges.push_back({static_cast<VertexId>(x), static_cast<VertexId>(x - stride * (side - 1)), 1.0});
      }
      if (mode == BoundaryMode::Reflecting) {
        if (c == 0) loop += 1.0;
        if (c == side - 1) loop += 1.0;
      }
      stride *= static_cast<std::size_t>(side);
    }
    edges.push_back({static_cast<VertexId>(x), static_cast<VertexId>(x), loop});
  }
  return WeightedGraph(n, edges, mode);
}

WeightedGraph build_two_copies(int side, double laziness) {
  const WeightedGraph one = build_lattice(2, side, laziness, BoundaryMode::Torus);
  const auto n = static_cast<VertexId>(one.size());
  std::vector<Edge> edges = one.edges();
  const std::size_t m = edges.size();
  for (std::size_t i = 0; i < m; ++i) edges.push_back({edges[i].u + n, edges[i].v + n, edges[i].weight});
  edges.push_back({0, n, 1.0});
  return WeightedGraph(2 * static_cast<std::size_t>(n), edges, BoundaryMode::Torus);
}

WeightedGraph build_path(int n, double loop_weight) {
  if (n < 1) throw PreconditionError("path needs at least one vertex");
  std::vector<Edge> edges;
  for (int i = 0; i + 1 < n; ++i) edges.push_back({static_cast<VertexId>(i), static_cast<VertexId>(i + 1), 1.0});
  if (loop_weight > 0.0) {
    for (int i = 0; i < n; ++i) edges.push_back({static_cast<VertexId>(i), static_cast<VertexId>(i), loop_weight});
  }
  return WeightedGraph(static_cast<std::size_t>(n), edges, BoundaryMode::None);
}

WeightedGraph parse_edge_list(std::istream& in) {
  std::vector<Edge> edges;
  std::string line;
  std::size_t lineno = 0;
  VertexId max_id = 0;
  bool any = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    long long u = 0;
    long long v = 0;
    double w = 0.0;
    if (!(ls >> u)) continue;
    std::string extra;
    if (!(ls >> v >> w) || (ls >> extra) || u < 0 || v < 0) {
      throw std::runtime_error("edge list line " + std::to_string(lineno) + ": expected `u v weight`");
    }
    edges.push_back({static_cast<VertexId>(u), static_cast<VertexId>(v), w});
    max_id = std::max({max_id, static_cast<VertexId>(u), static_cast<VertexId>(v)});
    any = true;
  }
  if (!any) throw std::runtime_error("edge list is empty");
  return WeightedGraph(static_cast<std::size_t>(max_id) + 1, edges, BoundaryMode::None);
}

WeightedGraph load_edge_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open edge list " + path);
  return parse_edge_list(in);
}

DoublingReport fit_doubling(const WeightedGraph& g, int r_max, std::optional<double> D) {
  if (r_max < 1) throw std::invalid_argument("r_max must be >= 1");
  DoublingReport rep;

  // Slope of log of the average ball mass against log r on the upper part of the range.
  const int lo = std::max(2, r_max / 4);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (int r = lo; r <= r_max; ++r) {
    double mass = 0.0;
    for (std::size_t x = 0; x < g.size(); ++x) mass += g.ball_measure(static_cast<VertexId>(x), r);
    const double lx = std::log(static_cast<double>(r));
    const double ly = std::log(mass / static_cast<double>(g.size()));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++m;
  }
  rep.fitted_D = (m >= 2) ? (m * sxy - sx * sy) / (m * sxx - sx * sx) : 0.0;
  rep.D_exponent = D.value_or(rep.fitted_D);

  rep.C_doubling = 1.0;
  for (std::size_t xi = 0; xi < g.size(); ++xi) {
    const auto x = static_cast<VertexId>(xi);
    for (int r = 1; r <= r_max; ++r) {
      for (int s = 1; s <= r; ++s) {
        const double ratio = g.ball_measure(x, r) / g.ball_measure(x, s) /
                             std::pow(static_cast<double>(r) / s, rep.D_exponent);
        if (ratio > rep.C_doubling) {
          rep.C_doubling = ratio;
          rep.worst_x = x;
          rep.worst_r = r;
          rep.worst_s = s;
        }
      }
    }
  }
  return rep;
}

DeltaAlphaResult check_delta_alpha(const WeightedGraph& g) {
  DeltaAlphaResult res;
  double alpha = kInf;
  for (std::size_t xi = 0; xi < g.size(); ++xi) {
    const auto x = static_cast<VertexId>(xi);
    if (!g.has_loop(x)) {
      res.missing_loop = x;
      return res;
    }
    for (double w : g.conductances(x)) alpha = std::min(alpha, w / g.mu(x));
  }
  res.ok = true;
  res.alpha = alpha;
  return res;
}

PoincareSides poincare_sides(const WeightedGraph& g, const VertexFunction& f, const Ball& b) {
  PoincareSides s;
  const auto inner = g.ball(b.center, b.radius);
  double mass = 0.0;
  double avg = 0.0;
  for (auto x : inner) {
    mass += g.mu(x);
    avg += f[x] * g.mu(x);
  }
  avg /= mass;
  for (auto x : inner) s.variance += (f[x] - avg) * (f[x] - avg) * g.mu(x);

  const int outer_r = 2 * b.radius;
  for (auto x : g.ball(b.center, outer_r)) {
    const auto nb = g.neighbors(x);
    const auto w = g.conductances(x);
    for (std::size_t i = 0; i < nb.size(); ++i) {
      if (g.distance(b.center, nb[i]) < outer_r) {
        const double d = f[x] - f[nb[i]];
        s.energy += d * d * w[i];
      }
    }
  }
  return s;
}

namespace {

// Largest generalized Rayleigh quotient variance / (r0^2 energy) for one ball.
double extremal_poincare_ratio(const WeightedGraph& g, const Ball& b) {
  const auto inner = g.ball(b.center, b.radius);
  const auto outer = g.ball(b.center, 2 * b.radius);
  const auto nb = static_cast<Eigen::Index>(inner.size());
  const auto no = static_cast<Eigen::Index>(outer.size());
  if (nb < 2) return 0.0;

  std::vector<Eigen::Index> local(g.size(), -1);
  for (Eigen::Index i = 0; i < no; ++i) local[outer[static_cast<std::size_t>(i)]] = i;

  // Laplacian of the subgraph induced on 2B; inner vertices come first.
  Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(no, no);
  for (Eigen::Index i = 0; i < no; ++i) {
    const VertexId x = outer[static_cast<std::size_t>(i)];
    const auto nbrs = g.neighbors(x);
    const auto w = g.conductances(x);
    for (std::size_t k = 0; k < nbrs.size(); ++k) {
      const Eigen::Index j = local[nbrs[k]];
      if (j < 0 || j == i) continue;
      Q(i, j) -= w[k];
      Q(i, i) += w[k];
    }
  }
  Eigen::MatrixXd S = Q.topLeftCorner(nb, nb);
  if (no > nb) {
    const Eigen::MatrixXd Qbe = Q.topRightCorner(nb, no - nb);
    const Eigen::MatrixXd Qee = Q.bottomRightCorner(no - nb, no - nb);
    S -= Qbe * Qee.ldlt().solve(Qbe.transpose());
  }
  // energy = 2 f^T Q f; minimizing over the exterior leaves the Schur complement.
  S *= 2.0;
  const double shift = S.trace() / static_cast<double>(nb);
  S += Eigen::MatrixXd::Constant(nb, nb, shift / static_cast<double>(nb));
  S = 0.5 * (S + S.transpose());

  Eigen::VectorXd m(nb);
  for (Eigen::Index i = 0; i < nb; ++i) m(i) = g.mu(inner[static_cast<std::size_t>(i)]);
  const double mass = m.sum();
  Eigen::MatrixXd N = -m * m.transpose() / mass;
  N.diagonal() += m;

  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(N, S, Eigen::EigenvaluesOnly);
  const double lam = es.eigenvalues().maxCoeff();
  return std::max(0.0, lam) / (static_cast<double>(b.radius) * b.radius);
}

}  // namespace

PoincareReport check_poincare(const WeightedGraph& g, const std::vector<int>& radii,
                              std::vector<VertexId> centers, int random_trials, std::uint64_t seed) {
  Rng rng(seed);
  if (centers.empty()) {
    if (g.size() <= 16) {
      centers.resize(g.size());
      std::iota(centers.begin(), centers.end(), 0);
    } else {
      std::vector<VertexId> all(g.size());
      std::iota(all.begin(), all.end(), 0);
      for (std::size_t i = 0; i < 16; ++i) {
        std::swap(all[i], all[i + rng.index(all.size() - i)]);
        centers.push_back(all[i]);
      }
    }
  }
  std::vector<Ball> balls;
  for (VertexId c : centers) {
    for (int r : radii) balls.push_back({c, std::max(1, r)});
  }

  std::vector<double> ratio(balls.size(), 0.0);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::size_t i = 0; i < balls.size(); ++i) {
    double best = extremal_poincare_ratio(g, balls[i]);
    Rng local = rng.split(i);
    VertexFunction f(g.size(), 0.0);
    for (int t = 0; t < random_trials; ++t) {
      for (auto x : g.ball(balls[i].center, 2 * balls[i].radius)) f[x] = local.uniform(-1.0, 1.0);
      const PoincareSides s = poincare_sides(g, f, balls[i]);
      if (s.energy > 0.0) {
        const double r0 = balls[i].radius;
        best = std::max(best, s.variance / (r0 * r0 * s.energy));
      }
    }
    ratio[i] = best;
  }

  PoincareReport rep;
  rep.balls = static_cast<int>(balls.size());
  for (std::size_t i = 0; i < balls.size(); ++i) {
    if (ratio[i] > rep.C) {
      rep.C = ratio[i];
      rep.worst_center = balls[i].center;
      rep.worst_radius = balls[i].radius;
    }
  }
  return rep;
}

}  // namespace graphhardy
