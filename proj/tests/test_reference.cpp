#include <gtest/gtest.h>

#include "graphhardy/reference.hpp"
#include "graphhardy/sampling.hpp"
#include "graphhardy/spectral.hpp"
#include "graphhardy/tent.hpp"
#include "graphhardy/varexp.hpp"

using namespace graphhardy;

namespace {

void expect_close(const VertexFunction& a, const VertexFunction& b, double tol) {
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t x = 0; x < a.size(); ++x) EXPECT_NEAR(a[x], b[x], tol * (1.0 + std::abs(b[x]))) << "x = " << x;
}

std::vector<WeightedGraph> graphs() {
  std::vector<WeightedGraph> out;
  out.push_back(build_lattice(1, 37));
  out.push_back(build_lattice(2, 7, 0.5));
  out.push_back(build_lattice(2, 6, 1.0, BoundaryMode::Reflecting));
  out.push_back(build_two_copies(5));
  return out;
}

}  // namespace

TEST(Reference, ApplyP) {
  Rng rng(1);
  for (const auto& g : graphs()) {
    const MarkovOperator op(g);
    const auto f = random_dense(g, rng);
    expect_close(op.apply_P(f), reference::apply_P(g, f), 1e-14);
  }
}

TEST(Reference, MaximalFunction) {
  Rng rng(2);
  for (const auto& g : graphs()) {
    for (int t = 0; t < 4; ++t) {
      const auto f = random_test_function(g, rng, t);
      expect_close(hl_maximal(g, f), reference::hl_maximal(g, f), 1e-13);
    }
  }
}

TEST(Reference, AreaFunctional) {
  Rng rng(3);
  for (const auto& g : graphs()) {
    TentFunction F(g.size(), 6);
    for (int k = 1; k <= 6; ++k)
      for (std::size_t y = 0; y < g.size(); ++y)
        if (rng.uniform() < 0.3) F.at(static_cast<VertexId>(y), k) = rng.normal();
    expect_close(area_functional(g, F), reference::area_functional(g, F), 1e-13);
    expect_close(area_functional(g, to_sparse(F)), reference::area_functional(g, F), 1e-13);
  }
}

TEST(Reference, SquareFunction) {
  Rng rng(4);
  for (const auto& g : graphs()) {
    const MarkovOperator op(g);
    const auto f = random_dense(g, rng);
    expect_close(square_function_SL(op, f, 12), reference::square_function_SL(g, f, 12), 1e-12);
  }
}

TEST(Reference, Gradient) {
  Rng rng(5);
  for (const auto& g : graphs()) {
    const MarkovOperator op(g);
    const auto f = random_dense(g, rng);
    expect_close(gradient(op, f), reference::gradient(g, f), 1e-13);
  }
}
