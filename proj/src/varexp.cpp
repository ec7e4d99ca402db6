#include "graphhardy/varexp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include <Eigen/Dense>

#include "graphhardy/sampling.hpp"
#include "graphhardy/tent.hpp"

namespace graphhardy {

namespace {

constexpr double kE = std::numbers::e;

}  // namespace

ExponentFunction::ExponentFunction(std::vector<double> values) : p_(std::move(values)) {
  if (p_.empty()) throw PreconditionError("exponent has no values");
  p_minus_ = kInf;
  p_plus_ = 0.0;
  for (double v : p_) {
    if (!(v > 0.0) || !std::isfinite(v)) throw PreconditionError("exponent values must be finite and > 0");
    p_minus_ = std::min(p_minus_, v);
    p_plus_ = std::max(p_plus_, v);
  }
}

ExponentFunction ExponentFunction::constant(const WeightedGraph& g, double q) {
  ExponentFunction p(std::vector<double>(g.size(), q));
  p.set_log_holder({0.0, 0.0, 1.0 / q, 0});
  p.set_description("constant:" + std::to_string(q));
  return p;
}

ExponentFunction ExponentFunction::log_family(const WeightedGraph& g, double a, double b, VertexId x0) {
  if (x0 >= g.size()) throw PreconditionError("log family base vertex out of range");
  std::vector<double> v(g.size());
  for (std::size_t x = 0; x < g.size(); ++x) {
    v[x] = a + b / std::log(kE + g.distance(x0, static_cast<VertexId>(x)));
  }
  ExponentFunction p(std::move(v));
  p.set_log_holder(check_log_holder(g, p.values(), x0));
  p.set_description("logfamily:" + std::to_string(a) + ":" + std::to_string(b) + ":" + std::to_string(x0));
  return p;
}

LogHolderConstants check_log_holder(const WeightedGraph& g, const std::vector<double>& p, VertexId x0) {
  LogHolderConstants c;
  c.x0 = x0;
  const std::size_t n = g.size();
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = x + 1; y < n; ++y) {
      const double d = g.distance(static_cast<VertexId>(x), static_cast<VertexId>(y));
      c.C_local = std::max(c.C_local, std::abs(1.0 / p[x] - 1.0 / p[y]) * std::log(kE + 1.0 / d));
    }
  }
  // Best limit value a: the weighted Chebyshev center, found by ternary search.
  std::vector<double> wgt(n);
  double lo = kInf, hi = -kInf;
  for (std::size_t x = 0; x < n; ++x) {
    wgt[x] = std::log(kE + g.distance(x0, static_cast<VertexId>(x)));
    lo = std::min(lo, 1.0 / p[x]);
    hi = std::max(hi, 1.0 / p[x]);
  }
  auto worst = [&](double a) {
    double m = 0.0;
    for (std::size_t x = 0; x < n; ++x) m = std::max(m, std::abs(1.0 / p[x] - a) * wgt[x]);
    return m;
  };
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double m1 = lo + (hi - lo) / 3.0;
    const double m2 = hi - (hi - lo) / 3.0;
    if (worst(m1) <= worst(m2)) {
      hi = m2;
    } else {
      lo = m1;
    }
  }
  c.a = 0.5 * (lo + hi);
  c.C_decay = worst(c.a);
  return c;
}

double modular(const WeightedGraph& g, const ExponentFunction& p, const VertexFunction& f) {
  double s = 0.0;
  for (std::size_t x = 0; x < f.size(); ++x) {
    if (f[x] != 0.0) s += std::pow(std::abs(f[x]), p(static_cast<VertexId>(x))) * g.mu(static_cast<VertexId>(x));
  }
  return s;
}

double luxemburg_norm(const WeightedGraph& g, const ExponentFunction& p, const VertexFunction& f) {
  double s = 0.0;
  for (double v : f) s = std::max(s, std::abs(v));
  if (s == 0.0) return 0.0;

  struct Term {
    double logv, p, mu;
  };
  std::vector<Term> terms;
  for (std::size_t x = 0; x < f.size(); ++x) {
    if (f[x] != 0.0) {
      const auto xx = static_cast<VertexId>(x);
      terms.push_back({std::log(std::abs(f[x]) / s), p(xx), g.mu(xx)});
    }
  }
  // rho(f / (s e^u)), strictly decreasing in u.
  auto rho = [&](double u) {
    double r = 0.0;
    for (const Term& t : terms) r += t.mu * std::exp(t.p * (t.logv - u));
    return r;
  };

  double lo = 0.0, hi = 0.0;
  if (rho(0.0) > 1.0) {
    double step = 1.0;
    hi = step;
    while (rho(hi) > 1.0) {
      lo = hi;
      step *= 2.0;
      hi = lo + step;
    }
  } else {
    double step = 1.0;
    lo = -step;
    while (rho(lo) <= 1.0) {
      hi = lo;
      step *= 2.0;
      lo = hi - step;
    }
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (rho(mid) > 1.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  // Nudge up by a few ulps so rho(f / norm) <= 1 survives the final rounding.
  return s * std::exp(hi) * (1.0 + 1e-15);
}

double ball_norm(const WeightedGraph& g, const ExponentFunction& p, const Ball& b) {
  if (p.is_constant()) {
    return std::pow(g.ball_measure(b.center, b.radius), 1.0 / p.p_minus());
  }
  VertexFunction chi(g.size(), 0.0);
  for (auto x : g.ball(b.center, b.radius)) chi[x] = 1.0;
  return luxemburg_norm(g, p, chi);
}

double lq_norm(const WeightedGraph& g, double q, const VertexFunction& f, const VertexFunction& w) {
  if (q == kInf) {
    double m = 0.0;
    for (double v : f) m = std::max(m, std::abs(v));
    return m;
  }
  double s = 0.0;
  for (std::size_t x = 0; x < f.size(); ++x) {
    if (f[x] == 0.0) continue;
    const double wx = w.empty() ? 1.0 : w[x];
    s += std::pow(std::abs(f[x]), q) * wx * g.mu(static_cast<VertexId>(x));
  }
  return std::pow(s, 1.0 / q);
}

VertexFunction hl_maximal(const WeightedGraph& g, const VertexFunction& f, int r_max) {
  const std::size_t n = g.size();
  VertexFunction out(n, 0.0);
#pragma omp parallel for schedule(dynamic, 16)
  for (std::size_t xi = 0; xi < n; ++xi) {
    const auto x = static_cast<VertexId>(xi);
    const auto order = g.by_distance(x);
    const int last = (r_max > 0) ? std::min(r_max, g.eccentricity(x) + 1) : g.eccentricity(x) + 1;
    double mass = 0.0;
    double sum = 0.0;
    double best = 0.0;
    std::size_t i = 0;
    for (int r = 1; r <= last; ++r) {
      const std::size_t end = g.shell_start(x, r);
      for (; i < end; ++i) {
        const auto y = order[i];
        mass += g.mu(y);
        sum += std::abs(f[y]) * g.mu(y);
      }
      best = std::max(best, sum / mass);
    }
    out[xi] = best;
  }
  return out;
}

RatioFit verify_theorem_A(const WeightedGraph& g, const ExponentFunction& p, const Sweep& sweep) {
  if (!(p.p_minus() > 1.0)) throw PreconditionError("maximal theorem needs p_- > 1");
  std::vector<double> ratio(static_cast<std::size_t>(sweep.trials));
  const Rng root(sweep.seed);
#pragma omp parallel for schedule(dynamic, 1)
  for (int t = 0; t < sweep.trials; ++t) {
    const int trial = sweep.first + t;
    Rng rng = root.split(static_cast<std::uint64_t>(trial));
    const VertexFunction f = random_test_function(g, rng, trial);
    const double den = luxemburg_norm(g, p, f);
    ratio[static_cast<std::size_t>(t)] = den > 0.0 ? luxemburg_norm(g, p, hl_maximal(g, f)) / den : 0.0;
  }
  RatioFit fit;
  fit.seed = sweep.seed;
  for (int t = 0; t < sweep.trials; ++t) fit.observe(ratio[static_cast<std::size_t>(t)], sweep.first + t);
  return fit;
}

double maximal_l2_bound(const WeightedGraph& g) {
  const auto n = static_cast<Eigen::Index>(g.size());
  double total = 0.0;
  for (int r = 1; r <= g.diameter() + 1; ++r) {
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index x = 0; x < n; ++x) {
      const auto xx = static_cast<VertexId>(x);
      const double vol = g.ball_measure(xx, r);
      for (auto y : g.ball(xx, r)) {
        // D^{1/2} A D^{-1/2}
        A(x, y) = std::sqrt(g.mu(xx) * g.mu(y)) / vol;
      }
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A);
    const double s = svd.singularValues()(0);
    total += s * s;
  }
  return std::sqrt(total);
}

double fefferman_stein_ratio(const WeightedGraph& g, const ExponentFunction& p, double q,
                             const std::vector<VertexFunction>& family) {
  VertexFunction num(g.size(), 0.0), den(g.size(), 0.0);
  for (const VertexFunction& f : family) {
    const VertexFunction mf = hl_maximal(g, f);
    for (std::size_t x = 0; x < g.size(); ++x) {
      num[x] += std::pow(mf[x], q);
      den[x] += std::pow(std::abs(f[x]), q);
    }
  }
  for (std::size_t x = 0; x < g.size(); ++x) {
    num[x] = std::pow(num[x], 1.0 / q);
    den[x] = std::pow(den[x], 1.0 / q);
  }
  const double d = luxemburg_norm(g, p, den);
  return d > 0.0 ? luxemburg_norm(g, p, num) / d : 0.0;
}

RatioFit verify_fefferman_stein(const WeightedGraph& g, const ExponentFunction& p, double q, int family_size,
                                const Sweep& sweep) {
  if (!(p.p_minus() > 1.0)) throw PreconditionError("vector-valued maximal inequality needs p_- > 1");
  if (!(q > 1.0) || !std::isfinite(q)) throw PreconditionError("vector-valued maximal inequality needs 1 < q < inf");
  std::vector<double> ratio(static_cast<std::size_t>(sweep.trials));
  const Rng root(sweep.seed);
#pragma omp parallel for schedule(dynamic, 1)
  for (int t = 0; t < sweep.trials; ++t) {
    const int trial = sweep.first + t;
    Rng rng = root.split(static_cast<std::uint64_t>(trial));
    std::vector<VertexFunction> family;
    for (int j = 0; j < family_size; ++j) family.push_back(random_test_function(g, rng, trial + j));
    ratio[static_cast<std::size_t>(t)] = fefferman_stein_ratio(g, p, q, family);
  }
  RatioFit fit;
  fit.seed = sweep.seed;
  for (int t = 0; t < sweep.trials; ++t) fit.observe(ratio[static_cast<std::size_t>(t)], sweep.first + t);
  return fit;
}

double lemma_sum_ratio(const WeightedGraph& g, const ExponentFunction& p, double q, const std::vector<Block>& family) {
  if (!(q >= 1.0) || !(q > p.p_plus())) throw PreconditionError("block sum lemma needs q >= 1 and q > p_+");
  const double fp = p.frak_p();
  VertexFunction h(g.size(), 0.0);
  std::vector<WeightedBall> terms;
  for (std::size_t j = 0; j < family.size(); ++j) {
    const Block& b = family[j];
    for (std::size_t x = 0; x < g.size(); ++x) {
      if (b.a[x] != 0.0 && g.distance(b.ball.center, static_cast<VertexId>(x)) >= b.ball.radius) {
        throw PreconditionError("block " + std::to_string(j) + " is not supported in its ball");
      }
    }
    const double allowed = (q == kInf ? 1.0 : std::pow(g.ball_measure(b.ball.center, b.ball.radius), 1.0 / q)) /
                           ball_norm(g, p, b.ball);
    if (lq_norm(g, q, b.a) > allowed * (1.0 + 1e-9)) {
      throw PreconditionError("block " + std::to_string(j) + " exceeds its size bound");
    }
    for (std::size_t x = 0; x < g.size(); ++x) h[x] += std::pow(std::abs(b.lambda * b.a[x]), fp);
    terms.push_back({b.lambda, b.ball});
  }
  for (double& v : h) v = std::pow(v, 1.0 / fp);
  const double den = aggregate_A(g, p, terms);
  return den > 0.0 ? luxemburg_norm(g, p, h) / den : 0.0;
}

RatioFit verify_lemma_sum(const WeightedGraph& g, const ExponentFunction& p, double q, int family_size,
                          const Sweep& sweep) {
  std::vector<double> ratio(static_cast<std::size_t>(sweep.trials));
  const Rng root(sweep.seed);
  const int r_max = std::max(1, g.diameter() / 4);
#pragma omp parallel for schedule(dynamic, 1)
  for (int t = 0; t < sweep.trials; ++t) {
    Rng rng = root.split(static_cast<std::uint64_t>(sweep.first + t));
    std::vector<Block> family;
    for (int j = 0; j < family_size; ++j) {
      Block b;
      b.ball = random_ball(g, rng, 1, r_max);
      b.lambda = rng.uniform(0.1, 2.0);
      b.a = random_on_ball(g, rng, b.ball);
      const double allowed = (q == kInf ? 1.0 : std::pow(g.ball_measure(b.ball.center, b.ball.radius), 1.0 / q)) /
                             ball_norm(g, p, b.ball);
      const double size = lq_norm(g, q, b.a);
      const double scale = size > 0.0 ? rng.uniform(0.5, 1.0) * allowed / size : 0.0;
      for (double& v : b.a) v *= scale;
      family.push_back(std::move(b));
    }
    ratio[static_cast<std::size_t>(t)] = lemma_sum_ratio(g, p, q, family);
  }
  RatioFit fit;
  fit.seed = sweep.seed;
  for (int t = 0; t < sweep.trials; ++t) fit.observe(ratio[static_cast<std::size_t>(t)], sweep.first + t);
  return fit;
}

BallRatioReport verify_ball_ratios(const WeightedGraph& g, const ExponentFunction& p, double w, double q, double D,
                                   int r_max, const std::vector<double>& betas, const Sweep& sweep) {
  if (!(w > 0.0 && w < p.p_minus())) throw PreconditionError("ball ratio lemma needs 0 < w < p_-");
  if (!(q >= 1.0 && q > p.p_plus() && std::isfinite(q))) throw PreconditionError("ball ratio lemma needs q > p_+");
  double beta_max = 1.0;
  for (double b : betas) {
    if (b < 1.0) throw PreconditionError("dilation factors must be >= 1");
    beta_max = std::max(beta_max, b);
  }
  const int R = std::min(g.diameter() + 1, ceil_radius(beta_max * r_max));
  const std::size_t n = g.size();

  // norms[x][r-1] = ||chi_{B(x,r)}||, r = 1..R
  std::vector<std::vector<double>> norms(n, std::vector<double>(static_cast<std::size_t>(R)));
#pragma omp parallel for schedule(dynamic, 4)
  for (std::size_t x = 0; x < n; ++x) {
    for (int r = 1; r <= R; ++r) {
      norms[x][static_cast<std::size_t>(r - 1)] = ball_norm(g, p, {static_cast<VertexId>(x), r});
    }
  }
  auto norm_at = [&](std::size_t x, int r) { return norms[x][static_cast<std::size_t>(std::min(r, R) - 1)]; };

  BallRatioReport rep;
  for (std::size_t x = 0; x < n; ++x) {
    const auto xx = static_cast<VertexId>(x);
    for (int r = 1; r <= r_max; ++r) {
      for (double beta : betas) {
        const int rb = ceil_radius(beta * r);
        const double grow = norm_at(x, rb) / norm_at(x, r) / std::pow(beta, D / w);
        const double shrink = norm_at(x, r) / norm_at(x, rb) /
                              std::pow(g.ball_measure(xx, r) / g.ball_measure(xx, rb), 1.0 / q);
        if (grow > rep.C_growth) {
          rep.C_growth = grow;
          rep.worst_x = xx;
          rep.worst_r = r;
          rep.worst_beta = beta;
        }
        rep.C_shrink = std::max(rep.C_shrink, shrink);
      }
    }
  }

  const Rng root(sweep.seed);
  std::vector<double> agg(static_cast<std::size_t>(sweep.trials), 0.0);
#pragma omp parallel for schedule(dynamic, 1)
  for (int t = 0; t < sweep.trials; ++t) {
    Rng rng = root.split(static_cast<std::uint64_t>(sweep.first + t));
    std::vector<WeightedBall> family;
    for (int j = 0; j < 8; ++j) family.push_back({rng.uniform(0.1, 2.0), random_ball(g, rng, 1, r_max)});
    const double base = aggregate_A(g, p, family);
    double worst = 0.0;
    for (double beta : betas) {
      std::vector<WeightedBall> dilated = family;
      for (auto& wb : dilated) wb.ball.radius = ceil_radius(beta * wb.ball.radius);
      worst = std::max(worst, aggregate_A(g, p, dilated) / (std::pow(beta, D / w) * base));
    }
    agg[static_cast<std::size_t>(t)] = worst;
  }
  for (double v : agg) rep.C_aggregate = std::max(rep.C_aggregate, v);
  return rep;
}

double check_muckenhoupt(const WeightedGraph& g, const VertexFunction& w, double r) {
  if (!(r >= 1.0)) throw PreconditionError("Muckenhoupt class needs r >= 1");
  for (double v : w) {
    if (!(v > 0.0)) throw PreconditionError("weights must be > 0");
  }
  const std::size_t n = g.size();
  std::vector<double> best(n, 0.0);
#pragma omp parallel for schedule(dynamic, 16)
  for (std::size_t xi = 0; xi < n; ++xi) {
    const auto x = static_cast<VertexId>(xi);
    const auto order = g.by_distance(x);
    double mass = 0.0, sw = 0.0, sdual = 0.0, wmin = kInf;
    std::size_t i = 0;
    for (int rad = 1; rad <= g.eccentricity(x) + 1; ++rad) {
      for (const std::size_t end = g.shell_start(x, rad); i < end; ++i) {
        const auto y = order[i];
        mass += g.mu(y);
        sw += w[y] * g.mu(y);
        if (r > 1.0) sdual += std::pow(w[y], -1.0 / (r - 1.0)) * g.mu(y);
        wmin = std::min(wmin, w[y]);
      }
      const double val = (r > 1.0) ? (sw / mass) * std::pow(sdual / mass, r - 1.0) : (sw / mass) / wmin;
      best[xi] = std::max(best[xi], val);
    }
  }
  return *std::max_element(best.begin(), best.end());
}

RatioFit fit_quasi_triangle(const WeightedGraph& g, const ExponentFunction& p, const Sweep& sweep) {
  const double fp = p.frak_p();
  const Rng root(sweep.seed);
  RatioFit fit;
  fit.seed = sweep.seed;
  for (int t = 0; t < sweep.trials; ++t) {
    const int trial = sweep.first + t;
    Rng rng = root.split(static_cast<std::uint64_t>(trial));
    const VertexFunction f = random_test_function(g, rng, trial);
    const VertexFunction h = random_test_function(g, rng, trial + 1);
    VertexFunction s(g.size());
    for (std::size_t x = 0; x < g.size(); ++x) s[x] = f[x] + h[x];
    const double den = std::pow(luxemburg_norm(g, p, f), fp) + std::pow(luxemburg_norm(g, p, h), fp);
    fit.observe(den > 0.0 ? std::pow(luxemburg_norm(g, p, s), fp) / den : 0.0, trial);
  }
  return fit;
}

}  // namespace graphhardy
