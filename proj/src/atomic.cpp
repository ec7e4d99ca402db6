#include "graphhardy/atomic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace graphhardy {

std::vector<Coefficient> coefficient_row(int N, int K) {
  if (N < 1 || K < 0) throw std::invalid_argument("coefficients need N >= 1 and k >= 0");
  std::vector<Coefficient> row(static_cast<std::size_t>(K) + 1, 1);
  for (int n = 1; n < N; ++n) {
    Coefficient s = 0;
    for (Coefficient& v : row) {
      const Coefficient next = s + v;
      if (next < s) throw std::overflow_error("c_{k,N} exceeds 128 bits");
      s = next;
      v = s;
    }
  }
  return row;
}

Coefficient coefficients_c(int k, int N) { return coefficient_row(N, k).back(); }

double to_double(Coefficient c) {
  const auto hi = static_cast<std::uint64_t>(c >> 64);
  const auto lo = static_cast<std::uint64_t>(c);
  return std::ldexp(static_cast<double>(hi), 64) + static_cast<double>(lo);
}

namespace {

// Largest k with 2^k < a, for a > 0.
int level_below(double a) {
  int k = static_cast<int>(std::floor(std::log2(a)));
  while (std::ldexp(1.0, k) >= a) --k;
  while (std::ldexp(1.0, k + 1) < a) ++k;
  return k;
}

VertexId min_eccentricity_vertex(const WeightedGraph& g) {
  VertexId best = 0;
  for (std::size_t x = 1; x < g.size(); ++x) {
    if (g.eccentricity(static_cast<VertexId>(x)) < g.eccentricity(best)) best = static_cast<VertexId>(x);
  }
  return best;
}

}  // namespace

TentDecompositionPlan::TentDecompositionPlan(const WeightedGraph& g, const ExponentFunction& p, const TentFunction& F)
    : g_(&g), F_(&F) {
  if (F.vertices() != g.size()) throw PreconditionError("tent function and graph sizes differ");
  const std::size_t n = g.size();
  area_ = area_functional(g, F);
  double amin = kInf, amax = 0.0;
  for (double a : area_) {
    if (a > 0.0) {
      amin = std::min(amin, a);
      amax = std::max(amax, a);
    }
  }
  if (amax == 0.0) return;
  k_min_ = level_below(amin);
  k_max_ = level_below(amax);

  const VertexId x0 = min_eccentricity_vertex(g);
  const Ball global_ball{x0, g.eccentricity(x0) + F.levels()};
  const double global_norm = ball_norm(g, p, {x0, g.eccentricity(x0) + 1});

  for (int k = k_min_; k <= k_max_ + 1; ++k) {
    const double level = std::ldexp(1.0, k);
    VertexFunction chi(n, 0.0);
    for (std::size_t x = 0; x < n; ++x) chi[x] = area_[x] > level ? 1.0 : 0.0;
    const VertexFunction m = hl_maximal(g, chi);
    std::vector<bool> omega(n);
    std::size_t count = 0;
    for (std::size_t x = 0; x < n; ++x) {
      omega[x] = m[x] > 0.5;
      count += omega[x] ? 1 : 0;
    }
    Level lv;
    lv.k = k;
    lv.delta = distance_to_complement(g, omega);
    if (count > 0 && count < n) {
      lv.cover = whitney_cover(g, omega);
      covers_ok_ = covers_ok_ && verify_whitney(g, omega, lv.cover).ok();
      max_overlap_ = std::max(max_overlap_, lv.cover.overlap);
    }
    if (k <= k_max_) {
      if (count == n) {
        atoms_.push_back({k, 0, global_ball, level * global_norm, true});
      } else {
        for (std::size_t j = 0; j < lv.cover.balls.size(); ++j) {
          const WhitneyBall& wb = lv.cover.balls[j];
          const Ball b = make_ball(wb.center, kCEta * wb.radius);
          atoms_.push_back({k, static_cast<int>(j), b, level * ball_norm(g, p, b), false});
        }
      }
    }
    levels_.push_back(std::move(lv));
  }

  const double fp = p.frak_p();
  const double factor = 1.0 / (1.0 - std::pow(2.0, -fp));
  stopping_excess_ = -kInf;
  for (std::size_t x = 0; x < n; ++x) {
    double lhs = 0.0;
    for (int k = k_min_; k <= k_max_; ++k) {
      if (area_[x] > std::ldexp(1.0, k)) lhs += std::pow(2.0, k * fp);
    }
    const double rhs = factor * std::pow(area_[x], fp);
    stopping_excess_ = std::max(stopping_excess_, lhs - rhs);
  }
}

SparseTent TentDecompositionPlan::payload(std::size_t i) const {
  const AtomMeta& a = atoms_.at(i);
  const Level& here = levels_[static_cast<std::size_t>(a.k - k_min_)];
  const Level& next = levels_[static_cast<std::size_t>(a.k - k_min_ + 1)];
  const int K = F_->levels();
  SparseTent out;
  auto emit = [&](VertexId y, double phi) {
    const int lo = std::min(2 * next.delta[y], K);
    const int hi = std::min(2 * here.delta[y], K);
    for (int t = lo + 1; t <= hi; ++t) {
      const double v = (*F_)(y, t);
      if (v != 0.0) out.push_back({y, t, v * phi / a.lambda});
    }
  };
  if (a.global) {
    for (std::size_t y = 0; y < g_->size(); ++y) emit(static_cast<VertexId>(y), 1.0);
  } else {
    for (const auto& [y, phi] : here.cover.balls[static_cast<std::size_t>(a.j)].phi) emit(y, phi);
  }
  std::sort(out.begin(), out.end(), [](const TentEntry& l, const TentEntry& r) {
    return l.level != r.level ? l.level < r.level : l.y < r.y;
  });
  return out;
}

double tent_lq_norm(const WeightedGraph& g, const SparseTent& a, double q) {
  const VertexFunction A = area_functional(g, a);
  return lq_norm(g, q, A);
}

TentDecomposition tent_atomic_decomposition(const WeightedGraph& g, const ExponentFunction& p, const TentFunction& F,
                                            double q, bool keep_payloads) {
  if (!(q > 1.0)) throw PreconditionError("tent atoms need q > 1");
  const TentDecompositionPlan plan(g, p, F);
  const auto& metas = plan.atoms();
  std::vector<TentAtom> all(metas.size());

#pragma omp parallel for schedule(dynamic, 1)
  for (std::size_t i = 0; i < metas.size(); ++i) {
    TentAtom& t = all[i];
    t.meta = metas[i];
    t.payload = plan.payload(i);
    if (t.payload.empty()) continue;
    t.size = tent_lq_norm(g, t.payload, q);
    t.allowed = std::pow(g.ball_measure(t.meta.ball.center, t.meta.ball.radius), 1.0 / q) /
                ball_norm(g, p, t.meta.ball);
    for (const TentEntry& e : t.payload) {
      if (!in_tent(g, t.meta.ball, e.y, e.level)) t.in_tent = false;
    }
  }

  TentDecomposition out;
  out.k_min = plan.k_min();
  out.k_max = plan.k_max();
  out.stopping_bound_excess = plan.stopping_bound_excess();
  out.overlap = plan.max_overlap();
  out.covers_ok = plan.covers_ok();
  out.tent_norm = tent_norm(g, p, F);

  TentFunction sum(g.size(), F.levels());
  std::vector<WeightedBall> terms;
  for (TentAtom& t : all) {
    if (t.payload.empty()) continue;
    for (const TentEntry& e : t.payload) sum.at(e.y, e.level) += t.meta.lambda * e.value;
    out.supports_ok = out.supports_ok && t.in_tent;
    out.atom_constant = std::max(out.atom_constant, t.size / t.allowed);
    terms.push_back({t.meta.lambda, t.meta.ball});
    if (!keep_payloads) SparseTent().swap(t.payload);
    out.atoms.push_back(std::move(t));
  }
  for (int k = 1; k <= F.levels(); ++k) {
    const auto a = F.level(k);
    const auto b = sum.level(k);
    for (std::size_t y = 0; y < a.size(); ++y) {
      out.reconstruction_error = std::max(out.reconstruction_error, std::abs(a[y] - b[y]));
    }
  }
  out.aggregate = aggregate_A(g, p, terms);
  return out;
}

TentAtom random_tent_atom(const WeightedGraph& g, const ExponentFunction& p, const Ball& b, double q, Rng& rng) {
  TentAtom t;
  t.meta.ball = b;
  t.meta.lambda = 1.0;
  for (int k = 1; k <= b.radius; ++k) {
    for (auto y : g.ball(b.center, b.radius - k + 1)) t.payload.push_back({y, k, rng.normal()});
  }
  std::sort(t.payload.begin(), t.payload.end(), [](const TentEntry& l, const TentEntry& r) {
    return l.level != r.level ? l.level < r.level : l.y < r.y;
  });
  t.allowed = std::pow(g.ball_measure(b.center, b.radius), 1.0 / q) / ball_norm(g, p, b);
  const double size = tent_lq_norm(g, t.payload, q);
  const double s = rng.uniform(0.5, 1.0) * t.allowed / size;
  for (TentEntry& e : t.payload) e.value *= s;
  t.size = tent_lq_norm(g, t.payload, q);
  return t;
}

PiResult pi_M_with_witness(const MarkovOperator& op, const SparseTent& F, int M, bool witness) {
  if (M < 1) throw std::invalid_argument("Pi_M needs M >= 1");
  const std::size_t n = op.size();
  PiResult out;
  const int powers = witness ? M + 1 : 1;
  std::vector<VertexFunction> acc(static_cast<std::size_t>(powers), VertexFunction(n, 0.0));
  int t_max = 0;
  for (const TentEntry& e : F) t_max = std::max(t_max, e.level);
  if (t_max == 0) {
    out.value.assign(n, 0.0);
    if (witness) out.witness_powers = std::move(acc);
    return out;
  }
  const std::vector<Coefficient> c = coefficient_row(M + 1, t_max - 1);

  // Entries grouped by level.
  std::vector<std::size_t> start(static_cast<std::size_t>(t_max) + 2, 0);
  for (const TentEntry& e : F) ++start[static_cast<std::size_t>(e.level) + 1];
  for (std::size_t t = 1; t < start.size(); ++t) start[t] += start[t - 1];
  std::vector<const TentEntry*> by_level(F.size());
  {
    std::vector<std::size_t> fill(start.begin(), start.end() - 1);
    for (const TentEntry& e : F) by_level[fill[static_cast<std::size_t>(e.level)]++] = &e;
  }

  VertexFunction u(n), tmp(n);
  bool live = false;
  // Horner in P over m = floor((t-1)/2): acc <- P acc + sum_{t in {2m+1, 2m+2}} coeff_t L^j F_t.
  for (int m = (t_max - 1) / 2; m >= 0; --m) {
    if (live) {
      for (auto& a : acc) {
        op.apply_P(std::span<const double>(a), std::span<double>(tmp));
        a.swap(tmp);
      }
    }
    for (int t = 2 * m + 1; t <= std::min(2 * m + 2, t_max); ++t) {
      const std::size_t b = start[static_cast<std::size_t>(t)], e = start[static_cast<std::size_t>(t) + 1];
      if (b == e) continue;
      live = true;
      std::fill(u.begin(), u.end(), 0.0);
      for (std::size_t i = b; i < e; ++i) u[by_level[i]->y] += by_level[i]->value;
      const double coeff = to_double(c[static_cast<std::size_t>(t - 1)]) / t;
      for (int j = 0; j <= M; ++j) {
        if (j > 0) {
          op.apply_L(std::span<const double>(u), std::span<double>(tmp));
          u.swap(tmp);
        }
        if (!witness && j < M) continue;
        VertexFunction& a = acc[static_cast<std::size_t>(witness ? j : 0)];
        for (std::size_t x = 0; x < n; ++x) a[x] += coeff * u[x];
      }
    }
  }
  if (witness) {
    out.value = acc[static_cast<std::size_t>(M)];
    out.witness_powers = std::move(acc);
  } else {
    out.value = std::move(acc[0]);
  }
  return out;
}

VertexFunction pi_M(const MarkovOperator& op, const SparseTent& F, int M) {
  return pi_M_with_witness(op, F, M, false).value;
}

VertexFunction pi_M(const MarkovOperator& op, const TentFunction& F, int M) { return pi_M(op, to_sparse(F), M); }

std::vector<double> verify_representation(const MarkovOperator& op, const VertexFunction& f, int M,
                                          const std::vector<int>& checkpoints) {
  if (M < 1) throw std::invalid_argument("representation needs M >= 1");
  if (checkpoints.empty()) return {};
  if (!std::is_sorted(checkpoints.begin(), checkpoints.end()) || checkpoints.front() < 0) {
    throw std::invalid_argument("checkpoints must be ascending and nonnegative");
  }
  const std::size_t n = op.size();
  const int K = checkpoints.back();
  const std::vector<Coefficient> c = coefficient_row(M, K);
  VertexFunction h = op.apply_L_power(M, f), tmp(n), sum(n, 0.0), diff(n);
  std::vector<double> out;
  std::size_t next = 0;
  for (int k = 0; k <= K; ++k) {
    if (k > 0) {
      op.apply_P(std::span<const double>(h), std::span<double>(tmp));
      h.swap(tmp);
    }
    const double ck = to_double(c[static_cast<std::size_t>(k)]);
    for (std::size_t x = 0; x < n; ++x) sum[x] += ck * h[x];
    while (next < checkpoints.size() && checkpoints[next] == k) {
      for (std::size_t x = 0; x < n; ++x) diff[x] = f[x] - sum[x];
      out.push_back(op.norm2(diff));
      ++next;
    }
  }
  return out;
}

}  // namespace graphhardy
