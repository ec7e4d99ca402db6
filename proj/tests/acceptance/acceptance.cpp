// Acceptance run: criteria 1-10, one PASS/FAIL line each. Exit code 0 iff all pass.
#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "graphhardy/atomic.hpp"
#include "graphhardy/graph.hpp"
#include "graphhardy/hardy.hpp"
#include "graphhardy/markov.hpp"
#include "graphhardy/parallel.hpp"
#include "graphhardy/sampling.hpp"
#include "graphhardy/spectral.hpp"
#include "graphhardy/tent.hpp"
#include "graphhardy/varexp.hpp"

using namespace graphhardy;
namespace fs = std::filesystem;

namespace {

// Pinned tolerances.
constexpr double kExact = 1e-10;          // criterion 1 identities
constexpr double kLuxemburg = 1e-9;       // criterion 2 closed form and modular window
constexpr double kHomogeneity = 1e-12;    // criterion 2
constexpr double kReconstruction = 1e-10;  // criterion 3
constexpr double kAtomRescaleCap = 100.0;  // criteria 3 and 6
constexpr double kStability = 2.0;         // criteria 3, 5, 6, 7
constexpr double kResidual = 1e-3;         // criteria 4 and 5, relative to ||f||_2
constexpr double kEigenOracle = 1e-8;      // criterion 4
constexpr double kRiesz = 1e-6;            // criterion 8
constexpr double kSpectral = 1e-8;         // criterion 8
constexpr double kPoincareGapFactor = 10.0;  // criterion 9

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

void need(Outcome& o, bool ok, const std::string& what) {
  if (!ok) {
    o.pass = false;
    o.detail += (o.detail.empty() ? "" : "; ") + std::string("failed: ") + what;
  }
}

void note(Outcome& o, const std::string& s) { o.detail += (o.detail.empty() ? "" : "; ") + s; }

double spread(const std::vector<double>& v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return *lo > 0.0 ? *hi / *lo : kInf;
}

// Largest ratio between consecutive entries.
double step_spread(const std::vector<double>& v) {
  double s = 1.0;
  for (std::size_t i = 1; i < v.size(); ++i) s = std::max(s, spread({v[i - 1], v[i]}));
  return s;
}

// ---- 1 -------------------------------------------------------------------------

unsigned __int128 binomial(int n, int k) {
  unsigned __int128 r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<unsigned __int128>(n - k + i) / static_cast<unsigned __int128>(i);
  return r;
}

Outcome criterion1() {
  Outcome o;
  std::vector<WeightedGraph> graphs;
  graphs.push_back(build_lattice(1, 64));
  graphs.push_back(build_lattice(2, 12, 0.5, BoundaryMode::Reflecting));
  graphs.push_back(build_two_copies(6));
  graphs.push_back(build_path(20, 1.0));
  double row = 0.0, kill = 0.0;
  for (const auto& g : graphs) {
    const MarkovOperator op(g);
    for (std::size_t x = 0; x < g.size(); ++x) {
      double s = 0.0;
      for (double v : op.row_values(static_cast<VertexId>(x))) s += v;
      row = std::max(row, std::abs(s - 1.0));
    }
    for (double v : op.apply_L(VertexFunction(g.size(), 3.5))) kill = std::max(kill, std::abs(v));
  }
  need(o, row <= kExact, "row sums");
  need(o, kill <= kExact, "L 1 = 0");

  // Reversibility on Z/64 and on the non-uniform two-copies graph.
  double rev = 0.0;
  for (const WeightedGraph* gp : {&graphs[0], &graphs[2]}) {
    const auto& g = *gp;
    const MarkovOperator op(g);
    std::vector<HeatKernelTable> t;
    for (std::size_t x = 0; x < g.size(); ++x) t.push_back(heat_kernel_table(op, static_cast<VertexId>(x), 32));
    for (int n = 1; n <= 32; ++n)
      for (std::size_t x = 0; x < g.size(); ++x)
        for (std::size_t y = 0; y < g.size(); ++y) {
          const auto xx = static_cast<VertexId>(x), yy = static_cast<VertexId>(y);
          const double a = t[x].rows[static_cast<std::size_t>(n - 1)][y] * g.mu(xx);
          const double b = t[y].rows[static_cast<std::size_t>(n - 1)][x] * g.mu(yy);
          rev = std::max(rev, std::abs(a - b));
        }
  }
  need(o, rev <= kExact, "reversibility");

  // Semigroup on sampled (x, n, m).
  double semi = 0.0;
  {
    const auto& g = graphs[1];
    const MarkovOperator op(g);
    Rng rng(101);
    for (int s = 0; s < 40; ++s) {
      const auto x = static_cast<VertexId>(rng.index(g.size()));
      const int n = rng.integer(1, 16), m = rng.integer(1, 16);
      const auto pn = heat_kernel_row(op, x, n);
      const auto pnm = heat_kernel_row(op, x, n + m);
      VertexFunction comp(g.size(), 0.0);
      for (std::size_t z = 0; z < g.size(); ++z) {
        if (pn[z] == 0.0) continue;
        const auto pm = heat_kernel_row(op, static_cast<VertexId>(z), m);
        for (std::size_t y = 0; y < g.size(); ++y) comp[y] += pn[z] * pm[y];
      }
      for (std::size_t y = 0; y < g.size(); ++y) semi = std::max(semi, std::abs(comp[y] - pnm[y]));
    }
  }
  need(o, semi <= kExact, "semigroup");

  // c_{k,N}: recursion and the binomial closed form, both in exact integers.
  bool coeff = true;
  for (int N = 1; N <= 8; ++N)
    for (int k = 0; k <= 300; ++k) {
      const Coefficient c = coefficients_c(k, N);
      coeff = coeff && c == binomial(k + N - 1, N - 1);
      Coefficient s = 0;
      for (int j = 0; j <= k; ++j) s += coefficients_c(j, N);
      coeff = coeff && coefficients_c(k, N + 1) == s;
    }
  need(o, coeff, "c_{k,N} recursion");

  // Pi_M against the dense definition sum_k c_{k,M+1}/(k+1) L^M P^{floor(k/2)} F(., k+1).
  double pi_err = 0.0;
  {
    const auto& g = graphs[3];
    const MarkovOperator op(g);
    const Eigen::MatrixXd P = dense_transition(op);
    const Eigen::MatrixXd Lm = [&] {
      const Eigen::MatrixXd L = Eigen::MatrixXd::Identity(P.rows(), P.cols()) - P;
      return Eigen::MatrixXd(L * L * L);
    }();
    Rng rng(102);
    TentFunction F(g.size(), 9);
    for (int k = 1; k <= 9; ++k)
      for (std::size_t y = 0; y < g.size(); ++y) F.at(static_cast<VertexId>(y), k) = rng.normal();
    Eigen::VectorXd want = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(g.size()));
    Eigen::MatrixXd Pk = Eigen::MatrixXd::Identity(P.rows(), P.cols());
    for (int k = 0; k < 9; ++k) {
      if (k > 0 && k % 2 == 0) Pk = Pk * P;
      Eigen::VectorXd col(static_cast<Eigen::Index>(g.size()));
      for (std::size_t y = 0; y < g.size(); ++y) col(static_cast<Eigen::Index>(y)) = F(static_cast<VertexId>(y), k + 1);
      want += static_cast<double>(binomial(k + 3, 3)) / (k + 1) * (Lm * (Pk * col));
    }
    const auto got = pi_M(op, F, 3);
    for (std::size_t x = 0; x < g.size(); ++x) pi_err = std::max(pi_err, std::abs(got[x] - want(static_cast<Eigen::Index>(x))));
  }
  need(o, pi_err <= kExact, "Pi_M");
  note(o, fmt("rows %.1e, L1 %.1e, reversibility %.1e, semigroup %.1e, Pi_M %.1e", row, kill, rev, semi, pi_err));
  return o;
}

// ---- 2 -------------------------------------------------------------------------

Outcome criterion2() {
  Outcome o;
  const auto g1 = build_lattice(1, 40);
  const auto g2 = build_lattice(2, 7, 0.5, BoundaryMode::Reflecting);
  const auto g3 = build_two_copies(4);
  const std::vector<const WeightedGraph*> graphs{&g1, &g2, &g3};
  Rng rng(201);
  double closed = 0.0, lo = 1.0, hi = 0.0, homog = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const auto& g = *graphs[static_cast<std::size_t>(t) % graphs.size()];
    const double q = rng.uniform(0.3, 8.0);
    VertexFunction f = random_dense(g, rng);
    const double scale = std::pow(10.0, rng.uniform(-6.0, 6.0));
    for (double& v : f) v = rng.uniform() < 0.2 ? 0.0 : v * scale;
    if (std::all_of(f.begin(), f.end(), [](double v) { return v == 0.0; })) f[0] = scale;
    const ExponentFunction p = ExponentFunction::constant(g, q);
    long double s = 0.0L;
    for (std::size_t x = 0; x < f.size(); ++x)
      s += std::pow(std::abs(static_cast<long double>(f[x])), static_cast<long double>(q)) * g.mu(static_cast<VertexId>(x));
    const double oracle = static_cast<double>(std::pow(s, 1.0L / static_cast<long double>(q)));
    const double n = luxemburg_norm(g, p, f);
    closed = std::max(closed, std::abs(n - oracle) / oracle);

    // Variable exponents for the modular window and homogeneity.
    const ExponentFunction pv = ExponentFunction::log_family(g, rng.uniform(0.4, 2.0), rng.uniform(0.0, 2.0), 0);
    const double nv = luxemburg_norm(g, pv, f);
    VertexFunction u = f;
    for (double& v : u) v /= nv;
    const double r = modular(g, pv, u);
    lo = std::min(lo, r);
    hi = std::max(hi, r);
    const double c = (rng.uniform() < 0.5 ? -1.0 : 1.0) * std::pow(10.0, rng.uniform(-3.0, 3.0));
    VertexFunction cf = f;
    for (double& v : cf) v *= c;
    homog = std::max(homog, std::abs(luxemburg_norm(g, pv, cf) - std::abs(c) * nv) / (std::abs(c) * nv));
  }
  need(o, closed < kLuxemburg, "closed form");
  need(o, lo >= 1.0 - kLuxemburg && hi <= 1.0, "modular window");
  need(o, homog <= kHomogeneity, "homogeneity");
  note(o, fmt("closed form %.1e, modular [%.12f, %.12f], homogeneity %.1e", closed, lo, hi, homog));
  return o;
}

// ---- 3 -------------------------------------------------------------------------

struct TentSweep {
  double C = 0.0;
  double atom_constant = 0.0;
  double reconstruction = 0.0;
  bool structure_ok = true;
};

// Normal noise on B x {1..16}, B a random ball of radius 2..24.
TentSweep tent_sweep(int N) {
  const auto g = build_lattice(1, N);
  const auto p = ExponentFunction::log_family(g, 1.2, 0.6, 0);
  const Rng root(301);
  TentSweep s;
  for (int t = 0; t < 50; ++t) {
    Rng rng = root.split(static_cast<std::uint64_t>(t));
    TentFunction F(g.size(), 16);
    const Ball b = random_ball(g, rng, 2, 24);
    for (int k = 1; k <= 16; ++k)
      for (auto y : g.ball(b.center, b.radius)) F.at(y, k) = rng.normal();
    const auto d = tent_atomic_decomposition(g, p, F, 2.0, false);
    s.C = std::max(s.C, d.aggregate / d.tent_norm);
    s.atom_constant = std::max(s.atom_constant, d.atom_constant);
    s.reconstruction = std::max(s.reconstruction, d.reconstruction_error);
    s.structure_ok = s.structure_ok && d.supports_ok && d.covers_ok && d.stopping_bound_excess <= 1e-9;
  }
  return s;
}

Outcome criterion3() {
  Outcome o;
  const TentSweep a = tent_sweep(128), b = tent_sweep(256);
  need(o, a.reconstruction < kReconstruction && b.reconstruction < kReconstruction, "reconstruction");
  need(o, a.atom_constant <= kAtomRescaleCap && b.atom_constant <= kAtomRescaleCap, "atom rescale");
  need(o, a.structure_ok && b.structure_ok, "supports, covers or stopping bound");
  need(o, std::isfinite(a.C) && spread({a.C, b.C}) <= kStability, "stability of C");
  note(o, fmt("C %.2f -> %.2f, rescale %.2f/%.2f, reconstruction %.1e", a.C, b.C, a.atom_constant, b.atom_constant,
              std::max(a.reconstruction, b.reconstruction)));
  return o;
}

// ---- 4 -------------------------------------------------------------------------

Outcome criterion4() {
  Outcome o;
  const auto g = build_lattice(1, 128);
  const MarkovOperator op(g);
  const Rng root(401);
  double worst = 0.0;
  for (int t = 0; t < 20; ++t) {
    Rng rng = root.split(static_cast<std::uint64_t>(t));
    const auto f = random_mean_zero_on_ball(g, rng, random_ball(g, rng, 2, 32));
    const auto r = verify_representation(op, f, 2, {10000});
    worst = std::max(worst, r[0] / op.norm2(f));
  }
  need(o, worst < kResidual, "residual");

  // Eigenvector inputs: the residual is |1 - lambda^2 sum_{k<=K} (k+1)(1-lambda)^k|.
  const SpectralDecomposition sd(op);
  double oracle = 0.0;
  for (std::size_t i = 1; i < sd.size(); i += 9) {
    const auto v = sd.eigenvector(i);
    const long double lam = sd.eigenvalue(i);
    for (int K : {10, 1000, 10000}) {
      long double s = 0.0L, pw = 1.0L;
      for (int k = 0; k <= K; ++k) {
        s += (k + 1) * pw;
        pw *= 1.0L - lam;
      }
      const double want = static_cast<double>(std::abs(1.0L - lam * lam * s));
      oracle = std::max(oracle, std::abs(verify_representation(op, v, 2, {K})[0] - want));
    }
  }
  need(o, oracle <= kEigenOracle, "eigenvalue-series oracle");
  note(o, fmt("worst residual %.2e ||f||, oracle gap %.1e", worst, oracle));
  return o;
}

// ---- 5 -------------------------------------------------------------------------

Outcome criterion5() {
  Outcome o;
  std::vector<double> C;
  double worst_res = 0.0;
  bool certs = true;
  std::string per;
  for (int N : {64, 128, 256}) {
    const auto g = build_lattice(1, N);
    const MarkovOperator op(g);
    const auto p = ExponentFunction::log_family(g, 1.2, 0.6, 0);
    const double D = 1.0;
    const int M = static_cast<int>(std::ceil(2.0 * D / p.p_minus())) + 1;
    const Rng root(501);
    double c = 0.0;
    for (int t = 0; t < 20; ++t) {
      Rng rng = root.split(static_cast<std::uint64_t>(t));
      const auto f = random_mean_zero_on_ball(g, rng, random_ball(g, rng, 2, 8));
      const auto d = hardy_atomic_decomposition(op, p, f, 2.0, M, D, N * N);
      worst_res = std::max(worst_res, d.relative_residual);
      certs = certs && d.certificates_ok;
      c = std::max(c, d.aggregate / d.hardy_norm);
    }
    C.push_back(c);
    per += fmt("%s%d:%.1f", per.empty() ? "" : " ", N, c);
  }
  need(o, worst_res < kResidual, "L2 residual");
  need(o, certs, "certificates");
  need(o, step_spread(C) <= kStability, "stability per doubling");
  note(o, fmt("C %s, per doubling %.2fx, end to end %.2fx, residual %.1e", per.c_str(), step_spread(C), spread(C),
              worst_res));
  return o;
}

// ---- 6 -------------------------------------------------------------------------

Outcome criterion6() {
  Outcome o;
  std::vector<double> C;
  double rescale = 0.0;
  bool certs = true;
  for (int N : {64, 128}) {
    const auto g = build_lattice(1, N);
    const MarkovOperator op(g);
    const auto p = ExponentFunction::log_family(g, 1.2, 0.6, 0);
    const double D = 1.0;
    const int M = static_cast<int>(std::ceil(2.0 * D / p.p_minus())) + 1;
    const auto r = verify_molecular_synthesis(op, p, 2.0, M, D / p.p_minus() + 0.5, D, 100, {601, 2, 0});
    C.push_back(r.fit.fitted_C);
    rescale = std::max(rescale, r.max_rescale);
    certs = certs && r.all_certified;
  }
  need(o, certs && rescale <= kAtomRescaleCap, "molecule certificates");
  need(o, std::isfinite(C[0]) && spread(C) <= kStability, "stability");
  note(o, fmt("ratio %.3f -> %.3f, rescale %.2f", C[0], C[1], rescale));
  return o;
}

// ---- 7 -------------------------------------------------------------------------

Outcome criterion7() {
  Outcome o;
  std::string d;
  for (int kind = 0; kind < 2; ++kind) {
    std::vector<double> C;
    for (int N : {64, 256}) {
      const auto g = build_lattice(1, N);
      const MarkovOperator op(g);
      const auto p = kind == 0 ? ExponentFunction::constant(g, 2.0) : ExponentFunction::log_family(g, 1.2, 0.6, 0);
      const auto r = verify_equal_lebesgue(op, p, {701, 50, 0});
      C.push_back(std::max({r.forward.fitted_C, 1.0 / r.forward.min_ratio, r.backward.fitted_C,
                            1.0 / r.backward.min_ratio}));
    }
    need(o, std::isfinite(C[0]) && std::isfinite(C[1]) && spread(C) <= kStability, kind ? "log family" : "p = 2");
    d += fmt("%s%s C %.3f -> %.3f", d.empty() ? "" : ", ", kind ? "log family" : "p=2", C[0], C[1]);
  }
  note(o, d);
  return o;
}

// ---- 8 -------------------------------------------------------------------------

Outcome criterion8() {
  Outcome o;
  const auto g1 = build_lattice(1, 64);
  const auto g2 = build_lattice(2, 12, 1.0, BoundaryMode::Reflecting);
  double riesz = 0.0, grad = 0.0, heat = 0.0, dyadic_excess = -kInf;
  int riesz_K = 0;
  Rng rng(801);
  for (const WeightedGraph* gp : {&g1, &g2}) {
    const auto& g = *gp;
    const MarkovOperator op(g);
    const SpectralDecomposition sd(op);
    for (int t = 0; t < 5; ++t) {
      const auto f = random_mean_zero_on_ball(g, rng, random_ball(g, rng, 2, 6));
      const int K = riesz_terms(sd.contraction(), 1e-8);
      riesz_K = std::max(riesz_K, K);
      const auto s = riesz_transform_series(op, f, K, sd.contraction());
      const auto e = riesz_transform_spectral(sd, f);
      VertexFunction diff(f.size());
      for (std::size_t x = 0; x < f.size(); ++x) diff[x] = s.value[x] - e[x];
      riesz = std::max(riesz, op.norm2(diff));
    }
    for (int t = 0; t < 50; ++t) {
      const auto f = random_dense(g, rng);
      grad = std::max(grad, std::abs(op.norm2(gradient(op, f)) - op.norm2(spectral_power(sd, 0.5, f))));
    }
    const auto f = random_dense(g, rng);
    for (int n = 0; n <= 8; ++n) {
      const auto a = spectral_multiplier(sd, MultiplierSpec::parse("heat:" + std::to_string(n)), f);
      const auto b = op.apply_P_power(n, f);
      for (std::size_t x = 0; x < f.size(); ++x) heat = std::max(heat, std::abs(a[x] - b[x]));
    }
    // Reassembly error against sup|F| times the projection onto [0, resolved_from).
    for (const char* m : {"imaginary-power:1.5", "heat:3", "step"}) {
      const auto spec = MultiplierSpec::parse(m);
      for (int L : {1, 3, 6}) {
        const auto pieces = dyadic_decomposition(spec, L);
        VertexFunction sum(f.size(), 0.0);
        for (const auto& piece : pieces) {
          const auto part = sd.apply(piece, f);
          for (std::size_t x = 0; x < f.size(); ++x) sum[x] += part[x];
        }
        const auto full = spectral_multiplier(sd, spec, f);
        VertexFunction diff(f.size());
        for (std::size_t x = 0; x < f.size(); ++x) diff[x] = sum[x] - full[x];
        const double bound = 1.0 * sd.projection_norm(f, -1.0, dyadic_resolved_from(L));
        dyadic_excess = std::max(dyadic_excess, op.norm2(diff) - bound);
      }
    }
  }
  need(o, riesz < kRiesz, "Riesz series vs spectral");
  need(o, grad <= kSpectral, "gradient identity");
  need(o, heat <= kSpectral, "heat multiplier");
  need(o, dyadic_excess <= 1e-12, "dyadic reassembly");
  note(o, fmt("Riesz %.1e (K up to %d), gradient %.1e, heat %.1e, dyadic excess %.1e", riesz, riesz_K, grad, heat,
              dyadic_excess));
  return o;
}

// ---- 9 -------------------------------------------------------------------------

Outcome criterion9() {
  Outcome o;
  const auto z1 = build_lattice(1, 128);
  const auto z2 = build_lattice(2, 32);
  const auto d1 = fit_doubling(z1, z1.diameter() / 2, 1.0);
  const auto d2 = fit_doubling(z2, z2.diameter() / 2, 2.0);
  need(o, std::isfinite(d1.C_doubling) && std::isfinite(d2.C_doubling), "doubling");
  const MarkovOperator o1(z1), o2(z2);
  const auto g1 = fit_gaussian_upper(o1, 256);
  const auto g2 = fit_gaussian_upper(o2, 256);
  need(o, std::isfinite(g1.C) && g1.max_violation <= 0.0 && std::isfinite(g2.C) && g2.max_violation <= 0.0,
       "Gaussian upper bound");
  const auto a1 = check_delta_alpha(z1), a2 = check_delta_alpha(z2);
  need(o, a1.ok && a2.ok && a1.alpha > 0.0 && a2.alpha > 0.0, "Delta(alpha)");
  const std::vector<int> radii{4, 8, 16};
  const auto pz = check_poincare(z2, radii, {0}, 2, 901);
  const auto pt = check_poincare(build_two_copies(32), radii, {0}, 2, 901);
  need(o, std::isfinite(pz.C) && pz.C > 0.0, "Poincare finite");
  need(o, pt.C >= kPoincareGapFactor * pz.C, "two-copies gap");
  note(o, fmt("doubling %.2f/%.2f, Gaussian (%.2f, %.2f)/(%.2f, %.2f), alpha %.3f, Poincare %.3f vs %.3f (%.1fx)",
              d1.C_doubling, d2.C_doubling, g1.C, g1.c, g2.C, g2.c, std::min(a1.alpha, a2.alpha), pz.C, pt.C,
              pt.C / pz.C));
  return o;
}

// ---- 10 ------------------------------------------------------------------------

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome criterion10(const std::string& cli) {
  Outcome o;
  if (cli.empty()) {
    need(o, false, "no --cli given");
    return o;
  }
  const fs::path base = fs::temp_directory_path() / "graphhardy_acceptance";
  fs::remove_all(base);
  const std::vector<std::string> all_but_sl = [] {
    std::vector<std::string> v;
    for (const char* c : {"theorem-a", "lemma-2.1", "lemma-2.2", "lemma-2.3", "lemma-2.4", "thm-1.1", "thm-1.2a",
                          "thm-1.2b", "thm-1.4", "prop-equal", "prop-m+", "prop-simple-atom", "prop-g",
                          "prop-multiplier", "prop-riesz", "hyp-ue", "hyp-compuesto", "hyp-poincare"})
      v.emplace_back(c);
    return v;
  }();
  std::string joined;
  for (const auto& c : all_but_sl) joined += (joined.empty() ? "" : ",") + c;
  const std::vector<std::pair<std::string, std::string>> runs{{"constant:1.5", "all"},
                                                              {"logfamily:1.2:0.6:0", joined}};
  int identical = 0, i = 0;
  for (const auto& [p, checks] : runs) {
    std::string bytes[2];
    for (int rep = 0; rep < 2; ++rep) {
      const fs::path out = base / (std::to_string(i) + "_" + std::to_string(rep));
      fs::create_directories(out);
      // The repeat changes the thread count as well.
      const std::string cmd = "GRAPHHARDY_THREADS=" + std::string(rep ? "3" : "1") + " \"" + cli +
                              "\" verify --graph lattice:1:32 --p " + p + " --check " + checks +
                              " --trials 4 --seed 17 --out \"" + out.string() + "\" > /dev/null 2>&1";
      const int rc = std::system(cmd.c_str());
      need(o, rc == 0, "cli run " + p);
      bytes[rep] = slurp(out / "report.json");
    }
    need(o, !bytes[0].empty() && bytes[0] == bytes[1], "byte-identical report for " + p);
    identical += !bytes[0].empty() && bytes[0] == bytes[1];
    ++i;
  }
  note(o, fmt("%d/%zu report pairs identical", identical, runs.size()));
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  configure_threads_from_env();
  CLI::App app{"Acceptance criteria 1-10"};
  std::string cli;
  std::vector<int> only;
  app.add_option("--cli", cli, "Path to the graphhardy executable (criterion 10)");
  app.add_option("--only", only, "Run a subset of criteria");
  CLI11_PARSE(app, argc, argv);

  // Runtime budgets in seconds.
  const std::vector<std::pair<double, std::function<Outcome()>>> criteria{
      {10, criterion1},  {30, criterion2},  {300, criterion3}, {120, criterion4}, {600, criterion5},
      {600, criterion6}, {300, criterion7}, {120, criterion8}, {300, criterion9}, {300, [&] { return criterion10(cli); }}};
  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > criteria[i].first) need(o, false, fmt("runtime %.0f s over %.0f s", secs, criteria[i].first));
    all = all && o.pass;
    std::printf("criterion %2d: %s  %s  [%.1f s]\n", id, o.pass ? "PASS" : "FAIL", o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}
