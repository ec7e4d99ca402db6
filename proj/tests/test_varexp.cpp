#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "graphhardy/io.hpp"
#include "graphhardy/rng.hpp"
#include "graphhardy/sampling.hpp"
#include "graphhardy/varexp.hpp"

using namespace graphhardy;

TEST(Varexp, ConstantExponentClosedForm) {
  const auto g = build_lattice(1, 16);
  const auto p = ExponentFunction::constant(g, 3.0);
  Rng rng(1);
  const auto f = random_dense(g, rng);
  EXPECT_NEAR(luxemburg_norm(g, p, f), lq_norm(g, 3.0, f), 1e-12 * lq_norm(g, 3.0, f));
}

TEST(Varexp, IndicatorNorm) {
  // ||chi_B||_q = mu(B)^{1/q}; mu = 3 per vertex on the lazy cycle.
  const auto g = build_lattice(1, 32);
  const auto p = ExponentFunction::constant(g, 2.0);
  EXPECT_NEAR(ball_norm(g, p, {4, 3}), std::sqrt(15.0), 1e-12);
}

TEST(Varexp, ModularAtNormIsAtMostOne) {
  const auto g = build_lattice(1, 40);
  const auto p = ExponentFunction::log_family(g, 1.3, 0.9, 5);
  Rng rng(2);
  for (int t = 0; t < 40; ++t) {
    const auto f = random_test_function(g, rng, t);
    const double n = luxemburg_norm(g, p, f);
    if (n == 0.0) continue;
    VertexFunction h = f;
    for (double& v : h) v /= n;
    const double rho = modular(g, p, h);
    EXPECT_LE(rho, 1.0);
    EXPECT_GE(rho, 1.0 - 1e-9);
  }
}

TEST(Varexp, Homogeneity) {
  const auto g = build_lattice(1, 24);
  const auto p = ExponentFunction::log_family(g, 1.1, 1.5, 0);
  Rng rng(4);
  const auto f = random_dense(g, rng);
  for (double s : {0.25, 3.0, 1e3}) {
    VertexFunction h = f;
    for (double& v : h) v *= s;
    EXPECT_NEAR(luxemburg_norm(g, p, h), s * luxemburg_norm(g, p, f), 1e-12 * s * luxemburg_norm(g, p, f));
  }
}

TEST(Varexp, LogFamilyShape) {
  const auto g = build_lattice(1, 32);
  const auto p = ExponentFunction::log_family(g, 1.2, 0.6, 0);
  EXPECT_NEAR(p(0), 1.8, 1e-15);
  EXPECT_NEAR(p(3), 1.2 + 0.6 / std::log(std::exp(1.0) + 3.0), 1e-15);
  ASSERT_TRUE(p.log_holder().has_value());
  EXPECT_TRUE(std::isfinite(p.log_holder()->C_local));
}

TEST(Varexp, TwoVertexMaximal) {
  const WeightedGraph g(2, {{0, 1, 1.0}, {0, 0, 1.0}, {1, 1, 1.0}});
  const auto m = hl_maximal(g, {1.0, 0.0});
  EXPECT_DOUBLE_EQ(m[0], 1.0);
  EXPECT_DOUBLE_EQ(m[1], 0.5);
}

// Property: M f >= |f| pointwise and M is sublinear.
TEST(Varexp, MaximalProperties) {
  const auto g = build_lattice(2, 7);
  Rng rng(9);
  for (int t = 0; t < 20; ++t) {
    const auto f = random_test_function(g, rng, t);
    const auto h = random_dense(g, rng);
    const auto mf = hl_maximal(g, f);
    const auto mh = hl_maximal(g, h);
    VertexFunction s(f.size());
    for (std::size_t x = 0; x < f.size(); ++x) s[x] = f[x] + h[x];
    const auto ms = hl_maximal(g, s);
    for (std::size_t x = 0; x < f.size(); ++x) {
      EXPECT_GE(mf[x], std::abs(f[x]) - 1e-15);
      EXPECT_LE(ms[x], mf[x] + mh[x] + 1e-12);
    }
  }
}

TEST(Varexp, MaximalConstantAtLeastOne) {
  const auto g = build_lattice(1, 32);
  const auto p = ExponentFunction::log_family(g, 1.5, 0.5, 0);
  const auto fit = verify_theorem_A(g, p, {3, 12, 0});
  EXPECT_EQ(fit.trials, 12);
  EXPECT_GE(fit.fitted_C, 1.0);
  EXPECT_TRUE(std::isfinite(fit.fitted_C));
  EXPECT_THROW(verify_theorem_A(g, ExponentFunction::constant(g, 1.0), {3, 2, 0}), PreconditionError);
}

TEST(Varexp, MaximalL2BoundDominatesConstantTwoFit) {
  const auto g = build_lattice(1, 24);
  const auto fit = verify_theorem_A(g, ExponentFunction::constant(g, 2.0), {1, 16, 0});
  EXPECT_LE(fit.fitted_C, maximal_l2_bound(g) * (1.0 + 1e-12));
}

TEST(Varexp, Muckenhoupt) {
  const auto g = build_lattice(1, 16);
  EXPECT_NEAR(check_muckenhoupt(g, VertexFunction(16, 2.0), 2.0), 1.0, 1e-12);
  VertexFunction w(16, 1.0);
  w[3] = 100.0;
  EXPECT_GT(check_muckenhoupt(g, w, 2.0), 2.0);
}

TEST(Varexp, QuasiTriangleForPBelowOne) {
  const auto g = build_lattice(1, 16);
  const auto p = ExponentFunction::constant(g, 0.7);
  const auto fit = fit_quasi_triangle(g, p, {2, 20, 0});
  EXPECT_LE(fit.fitted_C, 1.0 + 1e-9);
}

TEST(Varexp, ExponentFileKinds) {
  const auto g = build_lattice(1, 4);
  std::istringstream c("kind=constant\nq=2.5\n");
  EXPECT_DOUBLE_EQ(parse_exponent(g, c)(2), 2.5);
  std::istringstream t("kind=table\n0 1.5\n1 2\n2 2\n3 1.5 # last\n");
  const auto pt = parse_exponent(g, t);
  EXPECT_DOUBLE_EQ(pt(1), 2.0);
  EXPECT_DOUBLE_EQ(pt.p_minus(), 1.5);
  std::istringstream missing("kind=table\n0 1.5\n1 2\n");
  EXPECT_THROW(parse_exponent(g, missing), ParseError);
  std::istringstream bad("kind=logfamily\na=1.2\nb=oops\nx0=0\n");
  try {
    parse_exponent(g, bad, "e.txt");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3);
    EXPECT_NE(std::string(e.what()).find("e.txt:3"), std::string::npos);
  }
}
