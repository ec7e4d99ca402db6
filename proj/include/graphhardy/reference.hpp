#pragma once

#include "graphhardy/graph.hpp"
#include "graphhardy/markov.hpp"
#include "graphhardy/tent.hpp"
#include "graphhardy/types.hpp"

/// Serial brute-force versions of the parallel kernels. They recompute every
/// distance by BFS and sum definitions literally; used as test oracles and
/// as the baseline in the benchmarks.
namespace graphhardy::reference {

VertexFunction apply_P(const WeightedGraph& g, const VertexFunction& f);
VertexFunction hl_maximal(const WeightedGraph& g, const VertexFunction& f);
/// Vertex-centered area functional with aperture 1, straight from the cone definition.
VertexFunction area_functional(const WeightedGraph& g, const TentFunction& F);
/// S_L f from the printed double sum.
VertexFunction square_function_SL(const WeightedGraph& g, const VertexFunction& f, int K);
VertexFunction gradient(const WeightedGraph& g, const VertexFunction& f);

}  // namespace graphhardy::reference
