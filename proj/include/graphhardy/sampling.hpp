#pragma once

#include "graphhardy/graph.hpp"
#include "graphhardy/rng.hpp"
#include "graphhardy/types.hpp"

namespace graphhardy {

/// Random ball with radius uniform in [r_min, r_max].
Ball random_ball(const WeightedGraph& g, Rng& rng, int r_min, int r_max);

/// i.i.d. uniform [-1, 1] values on every vertex.
VertexFunction random_dense(const WeightedGraph& g, Rng& rng);

/// i.i.d. uniform [-1, 1] values on B, zero elsewhere.
VertexFunction random_on_ball(const WeightedGraph& g, Rng& rng, const Ball& b);

/// random_on_ball with the mu-weighted mean over B removed.
VertexFunction random_mean_zero_on_ball(const WeightedGraph& g, Rng& rng, const Ball& b);

/// Test input for maximal-type sweeps; cycles through dense noise, ball
/// indicators, single spikes and localized noise depending on `trial`.
VertexFunction random_test_function(const WeightedGraph& g, Rng& rng, int trial);

}  // namespace graphhardy
