#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>

#include "graphhardy/atomic.hpp"

namespace graphhardy {

DensitySet global_density_set(const WeightedGraph& g, const std::vector<bool>& F, double gamma) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw PreconditionError("density parameter must lie in (0, 1)");
  const std::size_t n = g.size();
  constexpr double kTie = 1e-12;
  DensitySet out;
  out.members.assign(n, false);

  // Characterization by scanning every radius.
  for (std::size_t xi = 0; xi < n; ++xi) {
    const auto x = static_cast<VertexId>(xi);
    const auto order = g.by_distance(x);
    double mass = 0.0, inside = 0.0;
    bool dense = true;
    std::size_t i = 0;
    for (int r = 1; r <= g.eccentricity(x) + 1 && dense; ++r) {
      for (const std::size_t end = g.shell_start(x, r); i < end; ++i) {
        mass += g.mu(order[i]);
        if (F[order[i]]) inside += g.mu(order[i]);
      }
      if (inside / mass < gamma - kTie) dense = false;
    }
    out.members[xi] = dense;
  }

  // Characterization through the maximal function of the complement.
  VertexFunction chi(n, 0.0);
  for (std::size_t x = 0; x < n; ++x) chi[x] = F[x] ? 0.0 : 1.0;
  const VertexFunction m = hl_maximal(g, chi);
  for (std::size_t x = 0; x < n; ++x) {
    const bool outside = m[x] > 1.0 - gamma + kTie;
    if (outside == out.members[x]) out.characterizations_agree = false;
  }
  return out;
}

std::vector<int> distance_to_complement(const WeightedGraph& g, const std::vector<bool>& omega) {
  const std::size_t n = g.size();
  std::vector<int> d(n, kFar);
  std::queue<VertexId> q;
  for (std::size_t x = 0; x < n; ++x) {
    if (!omega[x]) {
      d[x] = 0;
      q.push(static_cast<VertexId>(x));
    }
  }
  while (!q.empty()) {
    const VertexId u = q.front();
    q.pop();
    for (VertexId v : g.neighbors(u)) {
      if (d[v] > d[u] + 1) {
        d[v] = d[u] + 1;
        q.push(v);
      }
    }
  }
  return d;
}

namespace {

double hat(double d, double r) { return std::clamp(2.0 - d / r, 0.0, 1.0); }

// Discrete B(x, s) for real s: members with d < s.
int strict_radius(double s) { return ceil_radius(s); }

}  // namespace

WhitneyCover whitney_cover(const WeightedGraph& g, const std::vector<bool>& omega) {
  const std::size_t n = g.size();
  std::size_t count = 0;
  for (bool b : omega) count += b ? 1 : 0;
  if (count == 0) throw PreconditionError("Whitney cover of an empty set");
  if (count == n) throw PreconditionError("Whitney cover needs a proper subset (radii are undefined for Omega = Gamma)");

  const std::vector<int> delta = distance_to_complement(g, omega);
  std::vector<VertexId> cand;
  for (std::size_t x = 0; x < n; ++x) {
    if (omega[x]) cand.push_back(static_cast<VertexId>(x));
  }
  std::stable_sort(cand.begin(), cand.end(), [&](VertexId a, VertexId b) { return delta[a] > delta[b]; });

  WhitneyCover cover;
  std::vector<bool> claimed(n, false);
  for (VertexId y : cand) {
    const double r = delta[y] / 10.0;
    const auto quarter = g.ball(y, strict_radius(r / 4.0));
    if (std::any_of(quarter.begin(), quarter.end(), [&](auto z) { return claimed[z]; })) continue;
    for (auto z : quarter) claimed[z] = true;
    cover.balls.push_back({y, r, {}});
  }

  VertexFunction total(n, 0.0);
  for (WhitneyBall& b : cover.balls) {
    for (auto y : g.ball(b.center, strict_radius(2.0 * b.radius))) {
      const double h = hat(g.distance(b.center, y), b.radius);
      if (h > 0.0) {
        b.phi.emplace_back(y, h);
        total[y] += h;
      }
    }
  }
  double max_total = 0.0;
  for (WhitneyBall& b : cover.balls) {
    for (auto& [y, v] : b.phi) v /= total[y];
  }
  for (double t : total) max_total = std::max(max_total, t);

  std::size_t max_meet = 0;
  for (std::size_t a = 0; a < cover.balls.size(); ++a) {
    const int ra = strict_radius(5.0 * cover.balls[a].radius);
    std::size_t meet = 0;
    for (std::size_t b = 0; b < cover.balls.size(); ++b) {
      if (a == b) continue;
      const int rb = strict_radius(5.0 * cover.balls[b].radius);
      if (g.distance(cover.balls[a].center, cover.balls[b].center) <= ra + rb - 2) ++meet;
    }
    max_meet = std::max(max_meet, meet);
  }
  cover.overlap = std::max(static_cast<double>(max_meet), max_total);
  return cover;
}

WhitneyCheck verify_whitney(const WeightedGraph& g, const std::vector<bool>& omega, const WhitneyCover& cover) {
  const std::size_t n = g.size();
  WhitneyCheck c;

  std::vector<bool> covered(n, false);
  for (const WhitneyBall& b : cover.balls) {
    for (auto y : g.ball(b.center, strict_radius(b.radius))) covered[y] = true;
  }
  c.covers = covered == omega;

  c.quarter_disjoint = true;
  std::vector<int> owner(n, -1);
  for (std::size_t i = 0; i < cover.balls.size(); ++i) {
    for (auto y : g.ball(cover.balls[i].center, strict_radius(cover.balls[i].radius / 4.0))) {
      if (owner[y] >= 0) c.quarter_disjoint = false;
      owner[y] = static_cast<int>(i);
    }
  }

  c.bounded_overlap = true;
  for (std::size_t a = 0; a < cover.balls.size(); ++a) {
    std::vector<bool> in5(n, false);
    for (auto y : g.ball(cover.balls[a].center, strict_radius(5.0 * cover.balls[a].radius))) in5[y] = true;
    std::size_t meet = 0;
    for (std::size_t b = 0; b < cover.balls.size(); ++b) {
      if (a == b) continue;
      const auto other = g.ball(cover.balls[b].center, strict_radius(5.0 * cover.balls[b].radius));
      if (std::any_of(other.begin(), other.end(), [&](auto y) { return in5[y]; })) ++meet;
    }
    if (static_cast<double>(meet) > cover.overlap) c.bounded_overlap = false;
  }

  c.support_and_lower_bound = true;
  VertexFunction sum(n, 0.0);
  for (const WhitneyBall& b : cover.balls) {
    VertexFunction phi(n, 0.0);
    for (const auto& [y, v] : b.phi) {
      phi[y] = v;
      sum[y] += v;
      if (v < 0.0 || g.distance(b.center, y) >= 2.0 * b.radius) c.support_and_lower_bound = false;
    }
    for (auto y : g.ball(b.center, strict_radius(b.radius))) {
      if (phi[y] < 1.0 / cover.overlap - 1e-12) c.support_and_lower_bound = false;
    }
  }
  for (std::size_t y = 0; y < n; ++y) {
    c.partition_error = std::max(c.partition_error, std::abs(sum[y] - (omega[y] ? 1.0 : 0.0)));
  }
  c.partition = c.partition_error <= 1e-12;
  return c;
}

}  // namespace graphhardy
