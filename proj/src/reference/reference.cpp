#include "graphhardy/reference.hpp"

#include <algorithm>
#include <cmath>

namespace graphhardy::reference {

namespace {

std::vector<std::vector<int>> all_distances(const WeightedGraph& g) {
  std::vector<std::vector<int>> d;
  d.reserve(g.size());
  for (std::size_t x = 0; x < g.size(); ++x) d.push_back(bfs_distances(g, static_cast<VertexId>(x)));
  return d;
}

double ball_mass(const WeightedGraph& g, const std::vector<int>& dx, int r) {
  double m = 0.0;
  for (std::size_t y = 0; y < g.size(); ++y) {
    if (dx[y] < r) m += g.mu(static_cast<VertexId>(y));
  }
  return m;
}

}  // namespace

VertexFunction apply_P(const WeightedGraph& g, const VertexFunction& f) {
  VertexFunction out(g.size(), 0.0);
  for (const Edge& e : g.edges()) {
    out[e.u] += e.weight * f[e.v];
    if (e.u != e.v) out[e.v] += e.weight * f[e.u];
  }
  for (std::size_t x = 0; x < g.size(); ++x) out[x] /= g.mu(static_cast<VertexId>(x));
  return out;
}

VertexFunction hl_maximal(const WeightedGraph& g, const VertexFunction& f) {
  const auto d = all_distances(g);
  VertexFunction out(g.size(), 0.0);
  for (std::size_t x = 0; x < g.size(); ++x) {
    const int ecc = *std::max_element(d[x].begin(), d[x].end());
    for (int r = 1; r <= ecc + 1; ++r) {
      double s = 0.0, m = 0.0;
      for (std::size_t y = 0; y < g.size(); ++y) {
        if (d[x][y] < r) {
          s += std::abs(f[y]) * g.mu(static_cast<VertexId>(y));
          m += g.mu(static_cast<VertexId>(y));
        }
      }
      out[x] = std::max(out[x], s / m);
    }
  }
  return out;
}

VertexFunction area_functional(const WeightedGraph& g, const TentFunction& F) {
  const auto d = all_distances(g);
  VertexFunction out(g.size(), 0.0);
  for (std::size_t x = 0; x < g.size(); ++x) {
    double s = 0.0;
    for (int k = 1; k <= F.levels(); ++k) {
      const double mb = ball_mass(g, d[x], k);
      for (std::size_t y = 0; y < g.size(); ++y) {
        if (d[x][y] < k) {
          const double v = F(static_cast<VertexId>(y), k);
          s += v * v * g.mu(static_cast<VertexId>(y)) / (k * mb);
        }
      }
    }
    out[x] = std::sqrt(s);
  }
  return out;
}

VertexFunction square_function_SL(const WeightedGraph& g, const VertexFunction& f, int K) {
  const auto d = all_distances(g);
  const std::size_t n = g.size();
  // h[k] = k (I - P) P^{floor(k/2)} f
  std::vector<VertexFunction> h(static_cast<std::size_t>(K) + 1);
  VertexFunction pk = f;
  int m = 0;
  for (int k = 1; k <= K; ++k) {
    while (m < k / 2) {
      pk = apply_P(g, pk);
      ++m;
    }
    const VertexFunction ppk = apply_P(g, pk);
    h[static_cast<std::size_t>(k)].resize(n);
    for (std::size_t y = 0; y < n; ++y) h[static_cast<std::size_t>(k)][y] = k * (pk[y] - ppk[y]);
  }
  VertexFunction out(n, 0.0);
  for (std::size_t x = 0; x < n; ++x) {
    double s = 0.0;
    for (int k = 1; k <= K; ++k) {
      for (std::size_t y = 0; y < n; ++y) {
        if (d[x][y] < k) {
          const double v = h[static_cast<std::size_t>(k)][y];
          s += v * v * g.mu(static_cast<VertexId>(y)) / (k * ball_mass(g, d[y], k));
        }
      }
    }
    out[x] = std::sqrt(s);
  }
  return out;
}

VertexFunction gradient(const WeightedGraph& g, const VertexFunction& f) {
  VertexFunction s(g.size(), 0.0);
  for (const Edge& e : g.edges()) {
    const double diff = f[e.u] - f[e.v];
    s[e.u] += e.weight * diff * diff / g.mu(e.u);
    if (e.u != e.v) s[e.v] += e.weight * diff * diff / g.mu(e.v);
  }
  for (double& v : s) v = std::sqrt(0.5 * v);
  return s;
}

}  // namespace graphhardy::reference
