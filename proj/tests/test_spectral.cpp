#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>

#include "graphhardy/sampling.hpp"
#include "graphhardy/spectral.hpp"

using namespace graphhardy;

TEST(Spectral, CycleEigenvaluesClosedForm) {
  const int n = 24;
  const auto g = build_lattice(1, n);
  const MarkovOperator op(g);
  const SpectralDecomposition sd(op);
  std::vector<double> expect;
  for (int j = 0; j < n; ++j) expect.push_back(2.0 / 3.0 * (1.0 - std::cos(2.0 * std::numbers::pi * j / n)));
  std::sort(expect.begin(), expect.end());
  for (int j = 0; j < n; ++j) EXPECT_NEAR(sd.eigenvalue(static_cast<std::size_t>(j)), expect[static_cast<std::size_t>(j)], 1e-12);
  EXPECT_NEAR(sd.gap(), expect[1], 1e-12);
}

TEST(Spectral, EigenvectorsSolveTheEquation) {
  const auto g = build_lattice(2, 5, 1.0, BoundaryMode::Reflecting);
  const MarkovOperator op(g);
  const SpectralDecomposition sd(op);
  for (std::size_t i = 0; i < sd.size(); i += 4) {
    const auto v = sd.eigenvector(i);
    const auto Lv = op.apply_L(v);
    EXPECT_NEAR(op.norm2(v), 1.0, 1e-12);
    for (std::size_t x = 0; x < v.size(); ++x) EXPECT_NEAR(Lv[x], sd.eigenvalue(i) * v[x], 1e-12);
  }
}

TEST(Spectral, HeatMultiplierEqualsPowers) {
  const auto g = build_lattice(1, 30);
  const MarkovOperator op(g);
  const SpectralDecomposition sd(op);
  Rng rng(1);
  const auto f = random_dense(g, rng);
  for (int n = 0; n <= 8; ++n) {
    const auto spec = MultiplierSpec::parse("heat:" + std::to_string(n));
    const auto a = spectral_multiplier(sd, spec, f);
    const auto b = op.apply_P_power(n, f);
    for (std::size_t x = 0; x < f.size(); ++x) EXPECT_NEAR(a[x], b[x], 1e-12);
  }
}

TEST(Spectral, GradientNormIsHalfPowerNorm) {
  const auto g = build_lattice(2, 6);
  const MarkovOperator op(g);
  const SpectralDecomposition sd(op);
  Rng rng(2);
  for (int t = 0; t < 10; ++t) {
    auto f = random_dense(g, rng);
    const double m = op.mean(f);
    for (double& v : f) v -= m;
    EXPECT_NEAR(op.norm2(gradient(op, f)), op.norm2(spectral_power(sd, 0.5, f)), 1e-10);
  }
}

TEST(Spectral, TwoVertexGradient) {
  const WeightedGraph g(2, {{0, 1, 1.0}, {0, 0, 1.0}, {1, 1, 1.0}});
  const MarkovOperator op(g);
  const auto gr = gradient(op, {1.0, 0.0});
  EXPECT_DOUBLE_EQ(gr[0], 0.5);
  EXPECT_DOUBLE_EQ(gr[1], 0.5);
}

TEST(Riesz, BetaCoefficients) {
  const auto b = beta_coefficients(4);
  EXPECT_DOUBLE_EQ(b[0], 1.0);
  EXPECT_DOUBLE_EQ(b[1], 0.5);
  EXPECT_DOUBLE_EQ(b[2], 0.375);
  EXPECT_DOUBLE_EQ(b[3], 0.3125);
}

TEST(Riesz, Terms) {
  EXPECT_EQ(riesz_terms(0.5, 1e-3), 10);
  EXPECT_EQ(riesz_terms(0.9, 0.5), 7);
}

TEST(Riesz, SeriesMatchesSpectralOracle) {
  const auto g = build_lattice(1, 32);
  const MarkovOperator op(g);
  const SpectralDecomposition sd(op);
  Rng rng(3);
  auto f = random_mean_zero_on_ball(g, rng, {4, 6});
  const double rho = sd.contraction();
  const int K = riesz_terms(rho, 1e-9);
  const auto s = riesz_transform_series(op, f, K, rho);
  const auto e = riesz_transform_spectral(sd, f);
  VertexFunction d(f.size());
  for (std::size_t x = 0; x < f.size(); ++x) d[x] = s.value[x] - e[x];
  EXPECT_LE(op.norm2(d), s.tail_bound + 1e-12);
  EXPECT_LT(op.norm2(d), 1e-6);
}

TEST(Multiplier, Parse) {
  EXPECT_DOUBLE_EQ(MultiplierSpec::parse("identity").F(0.7), 1.0);
  EXPECT_DOUBLE_EQ(MultiplierSpec::parse("heat:3").F(0.5), 0.125);
  EXPECT_DOUBLE_EQ(MultiplierSpec::parse("step").F(0.5), 1.0);
  EXPECT_DOUBLE_EQ(MultiplierSpec::parse("step").F(1.5), 0.0);
  EXPECT_DOUBLE_EQ(MultiplierSpec::parse("imaginary-power:2").F(0.0), 0.0);
  EXPECT_NEAR(MultiplierSpec::parse("imaginary-power:2").F(0.5), std::cos(2.0 * std::log(0.5)), 1e-15);
  EXPECT_THROW(MultiplierSpec::parse("heat:-1"), std::invalid_argument);
  EXPECT_THROW(MultiplierSpec::parse("bogus"), std::invalid_argument);
}

TEST(Multiplier, TableFile) {
  const std::string path = ::testing::TempDir() + "/mult.txt";
  {
    std::ofstream out(path);
    out << "# lambda F\n0 1\n1 0\n2 0.5\n";
  }
  const auto spec = MultiplierSpec::parse("file:" + path);
  EXPECT_DOUBLE_EQ(spec.F(0.5), 0.5);
  EXPECT_DOUBLE_EQ(spec.F(1.5), 0.25);
  {
    std::ofstream out(path);
    out << "0 1\n1 x\n";
  }
  try {
    MultiplierSpec::parse("file:" + path);
    FAIL();
  } catch (const std::exception& e) {
    EXPECT_NE(std::string(e.what()).find(":2:"), std::string::npos);
  }
}

TEST(Dyadic, CutoffShape) {
  EXPECT_DOUBLE_EQ(theta_cutoff(0.5), 1.0);
  EXPECT_DOUBLE_EQ(theta_cutoff(1.0), 1.0);
  EXPECT_DOUBLE_EQ(theta_cutoff(1.5), 0.0);
  EXPECT_DOUBLE_EQ(eta_bump(1.0), 1.0);
  EXPECT_DOUBLE_EQ(eta_bump(0.5), 0.0);
  for (double t = 0.0; t < 3.0; t += 0.01) {
    EXPECT_GE(theta_cutoff(t), 0.0);
    EXPECT_LE(theta_cutoff(t), 1.0);
  }
}

// Property: the pieces reassemble F exactly on the resolved range.
TEST(Dyadic, Reassembly) {
  const auto spec = MultiplierSpec::parse("imaginary-power:1.5");
  for (int L : {2, 5, 9}) {
    const auto pieces = dyadic_decomposition(spec, L);
    for (double l = dyadic_resolved_from(L); l <= 2.0; l += 0.003) {
      double s = 0.0;
      for (const auto& piece : pieces) s += piece(l);
      EXPECT_NEAR(s, spec.F(l), 1e-14) << L << ' ' << l;
    }
  }
}

TEST(Rs, HeatEstimateFinite) {
  const auto r = estimate_Rs(MultiplierSpec::parse("heat:2"), 2.5, default_t_grid(), 101);
  EXPECT_TRUE(std::isfinite(r.value));
  EXPECT_GT(r.value, 0.0);
  for (double t : default_t_grid()) EXPECT_LE(t, 4.0 / 3.0);
}

TEST(Spectral, RefusesLargeGraphs) {
  const auto g = build_lattice(2, 46);
  const MarkovOperator op(g);
  EXPECT_THROW(SpectralDecomposition sd(op), PreconditionError);
}
