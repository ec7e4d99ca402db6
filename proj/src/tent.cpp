#include "graphhardy/tent.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace graphhardy {

bool TentFunction::level_is_zero(int k) const {
  for (double v : level(k)) {
    if (v != 0.0) return false;
  }
  return true;
}

bool TentFunction::is_zero() const {
  return std::all_of(v_.begin(), v_.end(), [](double v) { return v == 0.0; });
}

SparseTent to_sparse(const TentFunction& F) {
  SparseTent out;
  for (int k = 1; k <= F.levels(); ++k) {
    const auto lv = F.level(k);
    for (std::size_t y = 0; y < lv.size(); ++y) {
      if (lv[y] != 0.0) out.push_back({static_cast<VertexId>(y), k, lv[y]});
    }
  }
  return out;
}

TentFunction to_dense(const SparseTent& F, std::size_t n, int K) {
  TentFunction out(n, K);
  for (const TentEntry& e : F) {
    if (e.level > K) throw std::out_of_range("tent entry above the level cap");
    out.at(e.y, e.level) += e.value;
  }
  return out;
}

LevelSet cone(const WeightedGraph& g, VertexId x, double beta, int K) {
  if (K < 1) throw std::invalid_argument("cone needs K >= 1");
  LevelSet out;
  for (int k = 1; k <= K; ++k) {
    for (auto y : g.ball(x, ceil_radius(beta * k))) out.emplace_back(y, k);
  }
  return out;
}

LevelSet tent(const WeightedGraph& g, const Ball& b) {
  LevelSet out;
  for (int k = 1; k <= b.radius; ++k) {
    // d(x_B, x) <= r_B - k  <=>  x in B(x_B, r_B - k + 1)
    for (auto x : g.ball(b.center, b.radius - k + 1)) out.emplace_back(x, k);
  }
  return out;
}

bool in_tent(const WeightedGraph& g, const Ball& b, VertexId y, int k) {
  return k >= 1 && g.distance(b.center, y) <= b.radius - k;
}

VertexFunction area_functional(const WeightedGraph& g, const TentFunction& F, double beta, Normalization norm) {
  if (beta < 1.0) throw std::invalid_argument("cone aperture must be >= 1");
  const std::size_t n = g.size();
  const int K = F.levels();

  // Shared read-only per-level weights |F|^2 mu (/ mu(B(y,k))), and their totals.
  std::vector<int> live;
  for (int k = 1; k <= K; ++k) {
    if (!F.level_is_zero(k)) live.push_back(k);
  }
  std::vector<VertexFunction> weight(live.size(), VertexFunction(n));
  std::vector<double> total(live.size(), 0.0);
  for (std::size_t li = 0; li < live.size(); ++li) {
    const int k = live[li];
    const auto lv = F.level(k);
    double s = 0.0;
    for (std::size_t y = 0; y < n; ++y) {
      const auto yy = static_cast<VertexId>(y);
      double w = lv[y] * lv[y] * g.mu(yy);
      if (norm == Normalization::PointCentered) w /= g.ball_measure(yy, k);
      weight[li][y] = w;
      s += w;
    }
    total[li] = s;
  }

  VertexFunction out(n, 0.0);
#pragma omp parallel for schedule(dynamic, 8)
  for (std::size_t xi = 0; xi < n; ++xi) {
    const auto x = static_cast<VertexId>(xi);
    const int ecc = g.eccentricity(x);
    double acc = 0.0;
    for (std::size_t li = 0; li < live.size(); ++li) {
      const int k = live[li];
      const int R = ceil_radius(beta * k);
      double s = 0.0;
      if (R > ecc) {
        s = total[li];
      } else {
        for (auto y : g.ball(x, R)) s += weight[li][y];
      }
      if (norm == Normalization::VertexCentered) s /= g.ball_measure(x, k);
      acc += s / k;
    }
    out[xi] = std::sqrt(acc);
  }
  return out;
}

VertexFunction area_functional(const WeightedGraph& g, const SparseTent& F, double beta, Normalization norm) {
  if (beta < 1.0) throw std::invalid_argument("cone aperture must be >= 1");
  const std::size_t n = g.size();
  VertexFunction acc(n, 0.0);
  double uniform = 0.0;
  const int diam = g.diameter();
  for (const TentEntry& e : F) {
    if (e.value == 0.0) continue;
    const int k = e.level;
    double w = e.value * e.value * g.mu(e.y) / k;
    if (norm == Normalization::PointCentered) w /= g.ball_measure(e.y, k);
    const int R = ceil_radius(beta * k);
    const bool vertex = norm == Normalization::VertexCentered;
    if (R > g.eccentricity(e.y)) {
      if (!vertex || k > diam) {
        uniform += vertex ? w / g.total_measure() : w;
      } else {
        for (std::size_t x = 0; x < n; ++x) acc[x] += w / g.ball_measure(static_cast<VertexId>(x), k);
      }
    } else {
      for (auto x : g.ball(e.y, R)) acc[x] += vertex ? w / g.ball_measure(x, k) : w;
    }
  }
  for (double& v : acc) v = std::sqrt(v + uniform);
  return acc;
}

double tent_norm(const WeightedGraph& g, const ExponentFunction& p, const TentFunction& F) {
  return luxemburg_norm(g, p, area_functional(g, F));
}

TentFunction conical_tent(const MarkovOperator& op, const VertexFunction& f, int K, int M, LevelShift shift) {
  if (K < 1 || M < 0) throw std::invalid_argument("conical tent needs K >= 1 and M >= 0");
  const std::size_t n = op.size();
  TentFunction F(n, K);
  // h_m = L^M P^m f = P^m (L^M f)
  VertexFunction h = op.apply_L_power(M, f);
  VertexFunction tmp(n);
  int m = 0;
  for (int k = 1; k <= K; ++k) {
    const int want = (shift == LevelShift::Half) ? k / 2 : (k - 1) / 2;
    while (m < want) {
      op.apply_P(std::span<const double>(h), std::span<double>(tmp));
      h.swap(tmp);
      ++m;
    }
    const double c = std::pow(static_cast<double>(k), M);
    auto lv = F.level(k);
    for (std::size_t y = 0; y < n; ++y) lv[y] = c * h[y];
  }
  return F;
}

VertexFunction square_function_SL(const MarkovOperator& op, const VertexFunction& f, int K, Normalization norm,
                                  LevelShift shift) {
  return area_functional(op.graph(), conical_tent(op, f, K, 1, shift), 1.0, norm);
}

VertexFunction square_function_GN(const MarkovOperator& op, const VertexFunction& f, int N, int K) {
  if (N < 1) throw std::invalid_argument("G_{L,N} needs N >= 1");
  const std::size_t n = op.size();
  VertexFunction h = op.apply_L_power(N, f);
  VertexFunction tmp(n), acc(n, 0.0);
  for (int k = 1; k <= K; ++k) {
    op.apply_P(std::span<const double>(h), std::span<double>(tmp));
    h.swap(tmp);
    const double c = std::pow(static_cast<double>(k), N);
    for (std::size_t x = 0; x < n; ++x) acc[x] += c * h[x] * c * h[x] / k;
  }
  for (double& v : acc) v = std::sqrt(v);
  return acc;
}

VertexFunction radial_maximal(const MarkovOperator& op, const VertexFunction& f, int K) {
  const std::size_t n = op.size();
  VertexFunction h = f, tmp(n), out(n);
  for (std::size_t x = 0; x < n; ++x) out[x] = std::abs(f[x]);
  for (int k = 1; k <= K; ++k) {
    op.apply_P(std::span<const double>(h), std::span<double>(tmp));
    h.swap(tmp);
    for (std::size_t x = 0; x < n; ++x) out[x] = std::max(out[x], std::abs(h[x]));
  }
  return out;
}

double aggregate_A(const WeightedGraph& g, const ExponentFunction& p, const std::vector<WeightedBall>& terms) {
  const double fp = p.frak_p();
  std::map<std::pair<VertexId, int>, double> norms;
  VertexFunction h(g.size(), 0.0);
  bool any = false;
  for (const WeightedBall& t : terms) {
    if (t.lambda == 0.0) continue;
    any = true;
    const int r = std::min(t.ball.radius, g.eccentricity(t.ball.center) + 1);
    const auto key = std::make_pair(t.ball.center, r);
    auto it = norms.find(key);
    if (it == norms.end()) it = norms.emplace(key, ball_norm(g, p, {t.ball.center, r})).first;
    const double v = std::pow(std::abs(t.lambda) / it->second, fp);
    for (auto x : g.ball(t.ball.center, r)) h[x] += v;
  }
  if (!any) return 0.0;
  for (double& v : h) v = std::pow(v, 1.0 / fp);
  return luxemburg_norm(g, p, h);
}

double hardy_norm(const MarkovOperator& op, const ExponentFunction& p, const VertexFunction& f, int K) {
  return luxemburg_norm(op.graph(), p, square_function_SL(op, f, K));
}

int default_level_cap(const WeightedGraph& g) {
  const int guard = std::max(1, g.diameter() / 2);
  return guard * guard;
}

VertexFunction conical_local_maximal(const MarkovOperator& op, const VertexFunction& f, double r, int R_max) {
  const auto& g = op.graph();
  const std::size_t n = g.size();
  const TentFunction F = conical_tent(op, f, R_max);

  // T[R-1][z], cumulative in R.
  std::vector<VertexFunction> T(static_cast<std::size_t>(R_max), VertexFunction(n, 0.0));
  VertexFunction w(n);
  for (int k = 1; k <= R_max; ++k) {
    const auto lv = F.level(k);
    for (std::size_t y = 0; y < n; ++y) {
      const auto yy = static_cast<VertexId>(y);
      w[y] = lv[y] * lv[y] * g.mu(yy) / (k * g.ball_measure(yy, k));
    }
    VertexFunction& cur = T[static_cast<std::size_t>(k - 1)];
    if (k > 1) cur = T[static_cast<std::size_t>(k - 2)];
#pragma omp parallel for schedule(static)
    for (std::size_t z = 0; z < n; ++z) {
      double s = 0.0;
      for (auto y : g.ball(static_cast<VertexId>(z), k)) s += w[y];
      cur[z] += s;
    }
  }

  VertexFunction best(n, 0.0);
  for (std::size_t c = 0; c < n; ++c) {
    const auto cc = static_cast<VertexId>(c);
    for (int R = 1; R <= R_max; ++R) {
      const VertexFunction& TR = T[static_cast<std::size_t>(R - 1)];
      double mass = 0.0, s = 0.0;
      const auto members = g.ball(cc, R);
      for (auto z : members) {
        mass += g.mu(z);
        s += std::pow(TR[z], 0.5 * r) * g.mu(z);
      }
      const double avg = s / mass;
      for (auto z : members) best[z] = std::max(best[z], avg);
    }
  }
  for (double& v : best) v = std::pow(v, 1.0 / r);
  return best;
}

void write_tent_csv(std::ostream& out, const SparseTent& F) {
  out.precision(17);
  out << "x k value\n";
  for (const TentEntry& e : F) out << e.y << ' ' << e.level << ' ' << e.value << '\n';
}

}  // namespace graphhardy
