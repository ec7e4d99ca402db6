#include "graphhardy/sampling.hpp"

#include <algorithm>

namespace graphhardy {

Ball random_ball(const WeightedGraph& g, Rng& rng, int r_min, int r_max) {
  Ball b;
  b.center = static_cast<VertexId>(rng.index(g.size()));
  b.radius = rng.integer(std::max(1, r_min), std::max(std::max(1, r_min), r_max));
  return b;
}

VertexFunction random_dense(const WeightedGraph& g, Rng& rng) {
  VertexFunction f(g.size());
  for (double& v : f) v = rng.uniform(-1.0, 1.0);
  return f;
}

VertexFunction random_on_ball(const WeightedGraph& g, Rng& rng, const Ball& b) {
  VertexFunction f(g.size(), 0.0);
  for (auto x : g.ball(b.center, b.radius)) f[x] = rng.uniform(-1.0, 1.0);
  return f;
}

VertexFunction random_mean_zero_on_ball(const WeightedGraph& g, Rng& rng, const Ball& b) {
  VertexFunction f = random_on_ball(g, rng, b);
  double mass = 0.0;
  double avg = 0.0;
  for (auto x : g.ball(b.center, b.radius)) {
    mass += g.mu(x);
    avg += f[x] * g.mu(x);
  }
  avg /= mass;
  for (auto x : g.ball(b.center, b.radius)) f[x] -= avg;
  return f;
}

VertexFunction random_test_function(const WeightedGraph& g, Rng& rng, int trial) {
  const int r_max = std::max(1, g.diameter() / 2);
  switch (trial % 4) {
    case 0:
      return random_dense(g, rng);
    case 1: {
      const Ball b = random_ball(g, rng, 1, r_max);
      VertexFunction f(g.size(), 0.0);
      const double h = rng.uniform(0.5, 2.0);
      for (auto x : g.ball(b.center, b.radius)) f[x] = h;
      return f;
    }
    case 2: {
      VertexFunction f(g.size(), 0.0);
      f[rng.index(g.size())] = rng.uniform(0.5, 2.0);
      return f;
    }
    default:
      return random_on_ball(g, rng, random_ball(g, rng, 1, r_max));
  }
}

}  // namespace graphhardy
