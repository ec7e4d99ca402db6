#include "graphhardy/markov.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "graphhardy/rng.hpp"

namespace graphhardy {

MarkovOperator::MarkovOperator(const WeightedGraph& g) : g_(&g) {
  const std::size_t n = g.size();
  row_.assign(n + 1, 0);
  for (std::size_t x = 0; x < n; ++x) {
    const auto xs = static_cast<VertexId>(x);
    row_[x + 1] = row_[x] + g.degree(xs);
    for (double w : g.conductances(xs)) p_.push_back(w / g.mu(xs));
  }
}

double MarkovOperator::transition(VertexId x, VertexId y) const { return g_->conductance(x, y) / g_->mu(x); }

void MarkovOperator::apply_P(std::span<const double> f, std::span<double> out) const {
  const std::size_t n = size();
  const auto& adj = *g_;
#pragma omp parallel for schedule(static) if (n >= 2048)
  for (std::size_t x = 0; x < n; ++x) {
    const auto cols = adj.neighbors(static_cast<VertexId>(x));
    const double* pv = p_.data() + row_[x];
    double s = 0.0;
    for (std::size_t i = 0; i < cols.size(); ++i) s += pv[i] * f[cols[i]];
    out[x] = s;
  }
}

void MarkovOperator::apply_L(std::span<const double> f, std::span<double> out) const {
  const std::size_t n = size();
  const auto& adj = *g_;
#pragma omp parallel for schedule(static) if (n >= 2048)
  for (std::size_t x = 0; x < n; ++x) {
    const auto cols = adj.neighbors(static_cast<VertexId>(x));
    const double* pv = p_.data() + row_[x];
    double s = 0.0;
    for (std::size_t i = 0; i < cols.size(); ++i) s += pv[i] * (f[x] - f[cols[i]]);
    out[x] = s;
  }
}

VertexFunction MarkovOperator::apply_P(const VertexFunction& f) const {
  VertexFunction out(size());
  apply_P(std::span<const double>(f), std::span<double>(out));
  return out;
}

VertexFunction MarkovOperator::apply_L(const VertexFunction& f) const {
  VertexFunction out(size());
  apply_L(std::span<const double>(f), std::span<double>(out));
  return out;
}

VertexFunction MarkovOperator::apply_P_power(int n, VertexFunction f) const {
  VertexFunction tmp(size());
  for (int i = 0; i < n; ++i) {
    apply_P(std::span<const double>(f), std::span<double>(tmp));
    f.swap(tmp);
  }
  return f;
}

VertexFunction MarkovOperator::apply_L_power(int k, VertexFunction f) const {
  if (k < 0) throw std::invalid_argument("L power must be >= 0");
  VertexFunction tmp(size());
  for (int i = 0; i < k; ++i) {
    apply_L(std::span<const double>(f), std::span<double>(tmp));
    f.swap(tmp);
  }
  return f;
}

double MarkovOperator::inner(const VertexFunction& f, const VertexFunction& g) const {
  double s = 0.0;
  for (std::size_t x = 0; x < size(); ++x) s += f[x] * g[x] * g_->mu(static_cast<VertexId>(x));
  return s;
}

double MarkovOperator::norm2(const VertexFunction& f) const { return std::sqrt(inner(f, f)); }

double MarkovOperator::mean(const VertexFunction& f) const {
  double s = 0.0;
  for (std::size_t x = 0; x < size(); ++x) s += f[x] * g_->mu(static_cast<VertexId>(x));
  return s / g_->total_measure();
}

Eigen::MatrixXd dense_transition(const MarkovOperator& op) {
  const auto n = static_cast<Eigen::Index>(op.size());
  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index x = 0; x < n; ++x) {
    const auto cols = op.row_columns(static_cast<VertexId>(x));
    const auto vals = op.row_values(static_cast<VertexId>(x));
    for (std::size_t i = 0; i < cols.size(); ++i) P(x, cols[i]) = vals[i];
  }
  return P;
}

double min_eigenvalue_P(const MarkovOperator& op) {
  const auto& g = op.graph();
  const auto n = static_cast<Eigen::Index>(op.size());
  Eigen::MatrixXd S = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index x = 0; x < n; ++x) {
    const auto cols = g.neighbors(static_cast<VertexId>(x));
    const auto w = g.conductances(static_cast<VertexId>(x));
    for (std::size_t i = 0; i < cols.size(); ++i) {
      S(x, cols[i]) = w[i] / std::sqrt(g.mu(static_cast<VertexId>(x)) * g.mu(cols[i]));
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

namespace {

// Row x of a self-adjoint operator T from T(delta_x): T(x,y) = T(delta_x)(y) mu(y) / mu(x).
void to_row(const WeightedGraph& g, VertexId x, VertexFunction& v) {
  for (std::size_t y = 0; y < v.size(); ++y) v[y] *= g.mu(static_cast<VertexId>(y)) / g.mu(x);
}

std::vector<VertexId> default_sources(const WeightedGraph& g, std::vector<VertexId> sources) {
  if (!sources.empty()) return sources;
  std::vector<VertexId> all(g.size());
  std::iota(all.begin(), all.end(), 0);
  if (g.size() <= 512) return all;
  Rng rng(0x5eed);
  for (std::size_t i = 0; i < 64; ++i) {
    std::swap(all[i], all[i + rng.index(all.size() - i)]);
    sources.push_back(all[i]);
  }
  std::sort(sources.begin(), sources.end());
  return sources;
}

int sqrt_radius(int n) { return std::max(1, static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n)) - 1e-12))); }

constexpr int kGrid = 7;
double grid_c(int j) { return std::ldexp(1.0, -j); }

}  // namespace

VertexFunction heat_kernel_row(const MarkovOperator& op, VertexId x, int n) {
  if (n < 1) throw std::invalid_argument("heat kernel step must be >= 1");
  return composite_kernel_row(op, x, n, 0);
}

HeatKernelTable heat_kernel_table(const MarkovOperator& op, VertexId x, int horizon) {
  HeatKernelTable t;
  t.x = x;
  t.horizon = horizon;
  VertexFunction v(op.size(), 0.0);
  v[x] = 1.0;
  VertexFunction tmp(op.size());
  for (int n = 1; n <= horizon; ++n) {
    op.apply_P(std::span<const double>(v), std::span<double>(tmp));
    v.swap(tmp);
    VertexFunction row = v;
    to_row(op.graph(), x, row);
    t.rows.push_back(std::move(row));
  }
  return t;
}

VertexFunction composite_kernel_row(const MarkovOperator& op, VertexId x, int n, int k) {
  if (n < 0 || k < 0) throw std::invalid_argument("kernel indices must be >= 0");
  VertexFunction v(op.size(), 0.0);
  v[x] = 1.0;
  v = op.apply_L_power(k, op.apply_P_power(n, std::move(v)));
  to_row(op.graph(), x, v);
  return v;
}

GaussianFit fit_gaussian(const MarkovOperator& op, int horizon, int k, std::vector<VertexId> sources) {
  if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");
  const auto& g = op.graph();
  sources = default_sources(g, std::move(sources));

  // Per source: max over (y, n) of |kernel| / profile for every grid c.
  std::vector<std::array<double, kGrid>> best(sources.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::size_t si = 0; si < sources.size(); ++si) {
    const VertexId x = sources[si];
    best[si].fill(0.0);
    VertexFunction v(g.size(), 0.0), w(g.size()), tmp(g.size());
    v[x] = 1.0;
    for (int n = 1; n <= horizon; ++n) {
      op.apply_P(std::span<const double>(v), std::span<double>(tmp));
      v.swap(tmp);
      w = op.apply_L_power(k, v);
      const double vol = g.ball_measure(x, sqrt_radius(n));
      const double nk = std::pow(static_cast<double>(n), k);
      for (std::size_t y = 0; y < g.size(); ++y) {
        if (w[y] == 0.0) continue;
        // |row(y)| / (mu(y) / (n^k vol)) with row(y) = w(y) mu(y) / mu(x)
        const double base = std::abs(w[y]) * nk * vol / g.mu(x);
        const double d = g.distance(x, static_cast<VertexId>(y));
        for (int j = 0; j < kGrid; ++j) {
          best[si][static_cast<std::size_t>(j)] =
              std::max(best[si][static_cast<std::size_t>(j)], base * std::exp(grid_c(j) * d * d / n));
        }
      }
    }
  }

  GaussianFit fit;
  fit.k = k;
  fit.horizon = horizon;
  double score = kInf;
  for (int j = 0; j < kGrid; ++j) {
    double C = 0.0;
    for (const auto& b : best) C = std::max(C, b[static_cast<std::size_t>(j)]);
    C *= 1.0 + 1e-12;
    const double s = C * std::exp(1.0 / grid_c(j));
    if (s < score) {
      score = s;
      fit.C = C;
      fit.c = grid_c(j);
    }
  }

  // Second pass under the chosen pair: the signed slack of the bound.
  fit.max_violation = -kInf;
  for (std::size_t si = 0; si < sources.size(); ++si) {
    const VertexId x = sources[si];
    VertexFunction v(g.size(), 0.0), tmp(g.size());
    v[x] = 1.0;
    for (int n = 1; n <= horizon; ++n) {
      op.apply_P(std::span<const double>(v), std::span<double>(tmp));
      v.swap(tmp);
      const VertexFunction w = op.apply_L_power(k, v);
      const double vol = g.ball_measure(x, sqrt_radius(n));
      const double nk = std::pow(static_cast<double>(n), k);
      for (std::size_t y = 0; y < g.size(); ++y) {
        const auto yy = static_cast<VertexId>(y);
        const double kernel = std::abs(w[y]) * g.mu(yy) / g.mu(x);
        const double d = g.distance(x, yy);
        const double bound = fit.C * g.mu(yy) / (nk * vol) * std::exp(-fit.c * d * d / n);
        if (kernel - bound > fit.max_violation) {
          fit.max_violation = kernel - bound;
          fit.worst_x = x;
          fit.worst_y = yy;
          fit.worst_n = n;
        }
      }
    }
  }
  return fit;
}

GaussianFit fit_gaussian_upper(const MarkovOperator& op, int horizon, std::vector<VertexId> sources) {
  return fit_gaussian(op, horizon, 0, std::move(sources));
}

HolderFit fit_holder_regularity(const MarkovOperator& op, int horizon, double C_cap, std::vector<VertexId> sources) {
  const auto& g = op.graph();
  sources = default_sources(g, std::move(sources));
  constexpr int kH = 10;
  auto h_of = [](int i) { return 1.0 - 0.1 * i; };

  struct Worst {
    double ratio = 0.0;
    VertexId x = 0, y0 = 0, y = 0;
    int n = 0;
  };
  // worst[si][ih][jc]
  std::vector<std::array<std::array<Worst, kGrid>, kH>> worst(sources.size());

#pragma omp parallel for schedule(dynamic, 1)
  for (std::size_t si = 0; si < sources.size(); ++si) {
    const VertexId x = sources[si];
    // Column x of P^n: p_n(y, x) = P^n(delta_x)(y).
    VertexFunction col(g.size(), 0.0), tmp(g.size());
    col[x] = 1.0;
    for (int n = 1; n <= horizon; ++n) {
      op.apply_P(std::span<const double>(col), std::span<double>(tmp));
      col.swap(tmp);
      const int rad = sqrt_radius(n);
      const double sq = std::sqrt(static_cast<double>(n));
      const double scale = g.mu(x) / g.ball_measure(x, rad);
      const int reach = static_cast<int>(std::floor(sq + 1e-12)) + 1;  // d(y0,y) <= sqrt n
      std::vector<std::array<double, kH>> inv_pow(static_cast<std::size_t>(reach));
      for (int dd = 1; dd < reach; ++dd) {
        for (int ih = 0; ih < kH; ++ih) {
          inv_pow[static_cast<std::size_t>(dd)][static_cast<std::size_t>(ih)] = 1.0 / (std::pow(dd / sq, h_of(ih)) * scale);
        }
      }
      for (std::size_t y0i = 0; y0i < g.size(); ++y0i) {
        const auto y0 = static_cast<VertexId>(y0i);
        const double dx = g.distance(x, y0);
        std::array<double, kGrid> growth{};
        for (int j = 0; j < kGrid; ++j) growth[static_cast<std::size_t>(j)] = std::exp(grid_c(j) * dx * dx / n);
        for (auto y : g.ball(y0, reach)) {
          if (y == y0) continue;
          const double diff = std::abs(col[y] - col[y0]);
          if (diff == 0.0) continue;
          const auto& ip = inv_pow[static_cast<std::size_t>(g.distance(y0, y))];
          for (int ih = 0; ih < kH; ++ih) {
            const double base = diff * ip[static_cast<std::size_t>(ih)];
            for (int j = 0; j < kGrid; ++j) {
              const double r = base * growth[static_cast<std::size_t>(j)];
              Worst& w = worst[si][static_cast<std::size_t>(ih)][static_cast<std::size_t>(j)];
              if (r > w.ratio) w = {r, x, y0, y, n};
            }
          }
        }
      }
    }
  }

  HolderFit fit;
  for (int ih = 0; ih < kH; ++ih) {
    double bestC = kInf;
    double bestScore = kInf;
    Worst bestW;
    int bestJ = 0;
    for (int j = 0; j < kGrid; ++j) {
      Worst w;
      for (const auto& s : worst) {
        const Worst& cand = s[static_cast<std::size_t>(ih)][static_cast<std::size_t>(j)];
        if (cand.ratio > w.ratio) w = cand;
      }
      const double score = w.ratio * std::exp(1.0 / grid_c(j));
      if (score < bestScore) {
        bestScore = score;
        bestC = w.ratio;
        bestW = w;
        bestJ = j;
      }
    }
    const bool last = ih == kH - 1;
    if (bestC <= C_cap || last) {
      fit.ok = bestC <= C_cap;
      fit.C3 = bestC * (1.0 + 1e-12);
      fit.c3 = grid_c(bestJ);
      fit.h = h_of(ih);
      fit.x = bestW.x;
      fit.y0 = bestW.y0;
      fit.y = bestW.y;
      fit.n = bestW.n;
      break;
    }
  }
  return fit;
}

void write_heat_csv(std::ostream& out, const MarkovOperator& op, const GaussianFit& fit,
                    const std::vector<VertexId>& sources, int horizon) {
  const auto& g = op.graph();
  out.precision(17);
  out << "n,x,y,p_n,bound,slack\n";
  for (VertexId x : sources) {
    const HeatKernelTable t = heat_kernel_table(op, x, horizon);
    for (int n = 1; n <= horizon; ++n) {
      const double vol = g.ball_measure(x, sqrt_radius(n));
      for (std::size_t y = 0; y < g.size(); ++y) {
        const auto yy = static_cast<VertexId>(y);
        const double p = t.rows[static_cast<std::size_t>(n - 1)][y];
        const double d = g.distance(x, yy);
        const double bound = fit.C * g.mu(yy) / vol * std::exp(-fit.c * d * d / n);
        out << n << ',' << x << ',' << y << ',' << p << ',' << bound << ',' << (p - bound) << '\n';
      }
    }
  }
}

}  // namespace graphhardy
