#include <gtest/gtest.h>

#include <sstream>

#include "graphhardy/graph.hpp"
#include "graphhardy/rng.hpp"

using namespace graphhardy;

namespace {

WeightedGraph two_vertex() { return WeightedGraph(2, {{0, 1, 1.0}, {0, 0, 1.0}, {1, 1, 1.0}}); }

}  // namespace

TEST(Graph, TwoVertexMeasure) {
  const auto g = two_vertex();
  EXPECT_DOUBLE_EQ(g.mu(0), 2.0);
  EXPECT_DOUBLE_EQ(g.mu(1), 2.0);
  EXPECT_EQ(g.diameter(), 1);
  EXPECT_TRUE(g.has_loop(0));
}

TEST(Graph, TwoVertexDeltaAlpha) {
  const auto da = check_delta_alpha(two_vertex());
  ASSERT_TRUE(da.ok);
  EXPECT_DOUBLE_EQ(da.alpha, 0.5);
}

TEST(Graph, MissingLoopIsReported) {
  const auto da = check_delta_alpha(build_path(3));
  EXPECT_FALSE(da.ok);
  ASSERT_TRUE(da.missing_loop.has_value());
  EXPECT_EQ(*da.missing_loop, 0u);
}

TEST(Graph, CycleDistances) {
  const auto g = build_lattice(1, 8);
  EXPECT_EQ(g.distance(0, 5), 3);
  EXPECT_EQ(g.distance(5, 0), 3);
  EXPECT_EQ(g.diameter(), 4);
}

TEST(Graph, CycleBallSizes) {
  const auto g = build_lattice(1, 64);
  for (int r = 1; r <= 32; ++r) EXPECT_EQ(g.ball_size(7, r), static_cast<std::size_t>(2 * r - 1)) << r;
  EXPECT_EQ(g.ball_size(7, 33), 64u);
  EXPECT_DOUBLE_EQ(g.ball_measure(7, 1000), g.total_measure());
}

TEST(Graph, StrictBallExcludesBoundary) {
  const auto g = build_lattice(1, 16);
  for (auto y : g.ball(3, 4)) EXPECT_LT(g.distance(3, y), 4);
  EXPECT_EQ(g.ball(3, 1).size(), 1u);
  EXPECT_EQ(g.ball(3, 1)[0], 3u);
}

TEST(Graph, CachedMetricMatchesBfs) {
  const auto g = build_lattice(2, 7, 1.0, BoundaryMode::Reflecting);
  for (VertexId x = 0; x < g.size(); x += 5) {
    const auto d = bfs_distances(g, x);
    for (VertexId y = 0; y < g.size(); ++y) EXPECT_EQ(d[y], g.distance(x, y));
  }
}

TEST(Graph, ReflectingLatticeHasUniformMeasure) {
  const auto g = build_lattice(2, 6, 1.0, BoundaryMode::Reflecting);
  for (VertexId x = 0; x < g.size(); ++x) EXPECT_DOUBLE_EQ(g.mu(x), g.mu(0));
}

TEST(Graph, CeilRadius) {
  EXPECT_EQ(ceil_radius(0.1), 1);
  EXPECT_EQ(ceil_radius(2.0), 2);
  EXPECT_EQ(ceil_radius(2.0000000000001), 2);
  EXPECT_EQ(ceil_radius(2.5), 3);
}

TEST(Graph, RejectsBadInput) {
  EXPECT_THROW(WeightedGraph(3, {{0, 1, 1.0}}), PreconditionError);
  EXPECT_THROW(WeightedGraph(2, {{0, 1, -1.0}}), PreconditionError);
  EXPECT_THROW(WeightedGraph(2, {{0, 2, 1.0}}), PreconditionError);
  EXPECT_THROW(build_lattice(1, 2), PreconditionError);
}

TEST(Graph, EdgeListParsing) {
  std::istringstream in("# triangle\n0 1 1\n1 2 2.5\n2 0 1\n0 0 1\n");
  const auto g = parse_edge_list(in);
  EXPECT_EQ(g.size(), 3u);
  EXPECT_DOUBLE_EQ(g.mu(0), 3.0);
  EXPECT_DOUBLE_EQ(g.conductance(1, 2), 2.5);
  std::istringstream bad("0 1 1\n1 x 2\n");
  try {
    parse_edge_list(bad);
    FAIL();
  } catch (const std::exception& e) {
    EXPECT_NE(std::string(e.what()).find('2'), std::string::npos);
  }
}

TEST(Graph, DoublingOnLattices) {
  const auto line = build_lattice(1, 64);
  const auto d1 = fit_doubling(line, 16, 1.0);
  EXPECT_TRUE(std::isfinite(d1.C_doubling));
  EXPECT_LE(d1.C_doubling, 2.0 + 1e-12);  // (2r-1)/(2s-1) <= 2 r/s
  const auto plane = build_lattice(2, 16);
  const auto d2 = fit_doubling(plane, 8, 2.0);
  EXPECT_TRUE(std::isfinite(d2.C_doubling));
}

TEST(Graph, PoincareFiniteOnLattice) {
  const auto g = build_lattice(1, 32);
  const auto pc = check_poincare(g, {1, 2, 4, 8});
  EXPECT_TRUE(std::isfinite(pc.C));
  EXPECT_GT(pc.C, 0.0);
}

// Property: the extremal value from the eigenproblem dominates random test functions.
TEST(Graph, PoincareDominatesRandomFunctions) {
  const auto g = build_lattice(2, 8);
  const auto pc = check_poincare(g, {2, 3}, {0, 9}, 0);
  Rng rng(3);
  for (int t = 0; t < 50; ++t) {
    VertexFunction f(g.size());
    for (double& v : f) v = rng.uniform(-1.0, 1.0);
    for (VertexId x : {0u, 9u}) {
      for (int r : {2, 3}) {
        const auto s = poincare_sides(g, f, {x, r});
        if (s.energy > 0.0) EXPECT_LE(s.variance, pc.C * r * r * s.energy * (1.0 + 1e-9));
      }
    }
  }
}
