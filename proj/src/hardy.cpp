#include "graphhardy/hardy.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "graphhardy/sampling.hpp"
#include "graphhardy/sweep.hpp"

namespace graphhardy {

namespace {

constexpr double kRatioTol = 1e-9;

int level_cap(const WeightedGraph& g, int K) { return K > 0 ? K : default_level_cap(g); }

int radius_guard(const WeightedGraph& g) { return std::max(2, g.diameter() / 4); }

bool supported_in(const WeightedGraph& g, const VertexFunction& f, const Ball& b) {
  for (std::size_t x = 0; x < f.size(); ++x) {
    if (f[x] != 0.0 && g.distance(b.center, static_cast<VertexId>(x)) >= b.radius) return false;
  }
  return true;
}

double max_abs(const VertexFunction& f) {
  double m = 0.0;
  for (double v : f) m = std::max(m, std::abs(v));
  return m;
}

void require_atom_parameters(const ExponentFunction& p, double r, int M, double D) {
  if (!(r >= 2.0)) throw PreconditionError("atoms need r >= 2");
  if (!(r > p.p_plus())) {
    std::ostringstream s;
    s << "atoms need r > p_+ = " << p.p_plus();
    throw PreconditionError(s.str());
  }
  if (!(M > 2.0 * D / p.p_minus())) {
    std::ostringstream s;
    s << "atoms need M > 2D/p_- = " << 2.0 * D / p.p_minus();
    throw PreconditionError(s.str());
  }
}

}  // namespace

bool is_mean_zero(const WeightedGraph& g, const VertexFunction& f) {
  double s = 0.0, a = 0.0;
  for (std::size_t x = 0; x < f.size(); ++x) {
    s += f[x] * g.mu(static_cast<VertexId>(x));
    a += std::abs(f[x]) * g.mu(static_cast<VertexId>(x));
  }
  return std::abs(s) <= 1e-9 * a;
}

double atom_size_bound(const WeightedGraph& g, const ExponentFunction& p, const Ball& b, double r, int M, int k) {
  return std::pow(static_cast<double>(b.radius), M - k) * std::pow(g.ball_measure(b.center, b.radius), 1.0 / r) /
         ball_norm(g, p, b);
}

HardyAtomCertificate make_hardy_certificate(const MarkovOperator& op, VertexFunction b, const Ball& ball, double r,
                                            int M) {
  HardyAtomCertificate c;
  c.ball = ball;
  c.r = r;
  c.M = M;
  VertexFunction u = b;
  for (int k = 0; k <= M; ++k) {
    if (k > 0) u = op.apply_L(u);
    c.norms.push_back(lq_norm(op.graph(), r, u));
  }
  c.a = std::move(u);
  c.b = std::move(b);
  return c;
}

CertificateCheck verify_hardy_atom(const MarkovOperator& op, const ExponentFunction& p,
                                   const HardyAtomCertificate& cert, double C) {
  const auto& g = op.graph();
  CertificateCheck out;
  VertexFunction u = cert.b;
  const double b_scale = max_abs(cert.b);
  const double mu_ball = g.ball_measure(cert.ball.center, cert.ball.radius);
  for (int k = 0; k <= cert.M; ++k) {
    if (k > 0) u = op.apply_L(u);
    if (!supported_in(g, u, cert.ball)) {
      out.failure = "L^" + std::to_string(k) + " b leaves the ball";
      out.worst_k = k;
      return out;
    }
    const double bound = C * atom_size_bound(g, p, cert.ball, cert.r, cert.M, k);
    const double ratio = lq_norm(g, cert.r, u) / bound;
    if (ratio > out.worst_ratio || out.worst_k < 0) {
      out.worst_ratio = std::max(out.worst_ratio, ratio);
      out.worst_k = k;
    }
    // Rounding in the recomputed L^k b, on the same scale as the a = L^M b check below.
    const double slack = 1e-10 * std::ldexp(1.0, k) * b_scale * std::pow(mu_ball, 1.0 / cert.r) / bound;
    if (ratio > 1.0 + kRatioTol + slack && out.failure.empty()) {
      out.failure = "size bound fails at k = " + std::to_string(k);
    }
  }
  double err = 0.0;
  for (std::size_t x = 0; x < u.size(); ++x) err = std::max(err, std::abs(u[x] - cert.a[x]));
  if (err > 1e-10 * std::ldexp(1.0, cert.M) * std::max(b_scale, 1e-300)) {
    out.failure = "a differs from L^M b";
    return out;
  }
  if (!out.failure.empty()) return out;
  out.ok = true;
  return out;
}

HardyAtomCertificate random_hardy_atom(const MarkovOperator& op, const ExponentFunction& p, const Ball& ball, double r,
                                       int M, Rng& rng) {
  if (ball.radius <= M) throw PreconditionError("random Hardy atoms need r_B > M");
  const auto& g = op.graph();
  VertexFunction b(g.size(), 0.0);
  for (auto x : g.ball(ball.center, ball.radius - M)) b[x] = rng.normal();
  HardyAtomCertificate c = make_hardy_certificate(op, b, ball, r, M);
  double worst = 0.0;
  for (int k = 0; k <= M; ++k) worst = std::max(worst, c.norms[static_cast<std::size_t>(k)] / atom_size_bound(g, p, ball, r, M, k));
  const double s = rng.uniform(0.5, 1.0) / worst;
  for (double& v : c.a) v *= s;
  for (double& v : c.b) v *= s;
  for (double& v : c.norms) v *= s;
  return c;
}

MoleculeCheck verify_molecule(const MarkovOperator& op, const ExponentFunction& p, const MoleculeCertificate& cert,
                              double C) {
  const auto& g = op.graph();
  const VertexId x = cert.ball.center;
  const int rB = cert.ball.radius;
  const int ecc = g.eccentricity(x);
  MoleculeCheck out;

  // Annuli up to the first j with 2^j r_B > ecc; the last one then reaches past every vertex.
  int J = 0;
  while (std::ldexp(static_cast<double>(rB), J) <= ecc) ++J;
  std::vector<double> ann_bound(static_cast<std::size_t>(J) + 1);
  for (int j = 0; j <= J; ++j) {
    const int R = static_cast<int>(std::min<double>(std::ldexp(static_cast<double>(rB), j), ecc + 1));
    const Ball Bj{x, R};
    ann_bound[static_cast<std::size_t>(j)] =
        std::pow(2.0, -j * cert.eps) * std::pow(g.ball_measure(x, R), 1.0 / cert.q) /
        ball_norm(g, p, Bj);
  }
  VertexFunction u = cert.b;
  const double b_scale = max_abs(cert.b);
  const double base = std::pow(g.ball_measure(x, rB), 1.0 / cert.q) / ball_norm(g, p, cert.ball);
  out.ratio.assign(static_cast<std::size_t>(cert.M) + 1, std::vector<double>(static_cast<std::size_t>(J) + 1, 0.0));
  for (int k = 0; k <= cert.M; ++k) {
    if (k > 0) u = op.apply_L(u);
    const double scale = std::pow(static_cast<double>(rB), cert.M - k);
    // Every annulus S_j, j >= 1, is {2^{j-1} r_B <= d < 2^{j+1} r_B}.
    for (int j = 0; j <= J; ++j) {
      const double lo = j == 0 ? 0.0 : std::ldexp(static_cast<double>(rB), j - 1);
      const double hi = std::ldexp(static_cast<double>(rB), j + 1);
      double s = 0.0;
      for (std::size_t y = 0; y < u.size(); ++y) {
        if (u[y] == 0.0) continue;
        const double d = g.distance(x, static_cast<VertexId>(y));
        const bool in = j == 0 ? d < rB : (d >= lo && d < hi);
        if (in) s += std::pow(std::abs(u[y]), cert.q) * g.mu(static_cast<VertexId>(y));
      }
      const double norm = std::pow(s, 1.0 / cert.q);
      const double ratio = norm / (C * scale * ann_bound[static_cast<std::size_t>(j)]);
      out.ratio[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)] = ratio;
      if (out.worst_k < 0 || ratio > out.worst_ratio) {
        out.worst_ratio = ratio;
        out.worst_k = k;
        out.worst_j = j;
      }
    }
    out.summed_C = std::max(out.summed_C, lq_norm(g, cert.q, u) / (scale * base));
  }
  double err = 0.0;
  for (std::size_t y = 0; y < u.size(); ++y) err = std::max(err, std::abs(u[y] - cert.m[y]));
  if (err > 1e-10 * std::ldexp(1.0, cert.M) * std::max(b_scale, 1e-300)) {
    out.failure = "m differs from L^M b";
    return out;
  }
  if (out.worst_ratio > 1.0 + kRatioTol) {
    out.failure = "annulus bound fails at (k, j) = (" + std::to_string(out.worst_k) + ", " +
                  std::to_string(out.worst_j) + ")";
    return out;
  }
  out.ok = true;
  return out;
}

MoleculeCertificate molecule_from_tent_atom(const MarkovOperator& op, const TentAtom& atom, double q, int M,
                                            double eps) {
  PiResult pi = pi_M_with_witness(op, atom.payload, M, true);
  MoleculeCertificate c;
  c.m = std::move(pi.value);
  c.b = std::move(pi.witness_powers[0]);
  c.ball = atom.meta.ball;
  c.q = q;
  c.M = M;
  c.eps = eps;
  return c;
}

CertificateCheck verify_simple_atom(const WeightedGraph& g, const ExponentFunction& p, const SimpleAtomCertificate& c) {
  CertificateCheck out;
  if (!supported_in(g, c.a, c.ball)) {
    out.failure = "atom leaves the ball";
    return out;
  }
  if (!is_mean_zero(g, c.a)) {
    out.failure = "atom has nonzero mean";
    return out;
  }
  out.worst_k = 0;
  out.worst_ratio = lq_norm(g, 2.0, c.a) / (std::sqrt(g.ball_measure(c.ball.center, c.ball.radius)) / ball_norm(g, p, c.ball));
  if (out.worst_ratio > 1.0 + kRatioTol) {
    out.failure = "L^2 size bound fails";
    return out;
  }
  out.ok = true;
  return out;
}

SimpleAtomCertificate random_simple_atom(const WeightedGraph& g, const ExponentFunction& p, const Ball& ball,
                                         Rng& rng) {
  SimpleAtomCertificate c;
  c.ball = ball;
  c.a = random_mean_zero_on_ball(g, rng, ball);
  const double bound = std::sqrt(g.ball_measure(ball.center, ball.radius)) / ball_norm(g, p, ball);
  const double n = lq_norm(g, 2.0, c.a);
  const double s = n > 0.0 ? rng.uniform(0.5, 1.0) * bound / n : 0.0;
  for (double& v : c.a) v *= s;
  return c;
}

HardyDecomposition hardy_atomic_decomposition(const MarkovOperator& op, const ExponentFunction& p,
                                              const VertexFunction& f, double r, int M, double D, int K) {
  const auto& g = op.graph();
  require_atom_parameters(p, r, M, D);
  if (!is_mean_zero(g, f)) throw PreconditionError("Hardy decomposition needs mean-zero f on a finite graph");
  K = level_cap(g, K);
  const std::size_t n = g.size();

  HardyDecomposition out;
  const TentFunction F = conical_tent(op, f, K);
  const VertexFunction S = area_functional(g, F, 1.0, Normalization::PointCentered);
  out.hardy_norm = luxemburg_norm(g, p, S);
  if (max_abs(f) == 0.0) return out;

  const TentDecompositionPlan plan(g, p, F);
  const auto& metas = plan.atoms();
  std::vector<HardyAtomTerm> terms(metas.size());
  std::vector<double> ratio(metas.size(), 0.0);
  std::vector<char> live(metas.size(), 0), support_ok(metas.size(), 1);

#pragma omp parallel for schedule(dynamic, 1)
  for (std::size_t i = 0; i < metas.size(); ++i) {
    const SparseTent a = plan.payload(i);
    if (a.empty()) continue;
    live[i] = 1;
    PiResult pi = pi_M_with_witness(op, a, M, true);
    const Ball& B = metas[i].ball;
    HardyAtomCertificate& c = terms[i].cert;
    c.ball = Ball{B.center, (M + 2) * B.radius};
    c.r = r;
    c.M = M;
    for (int k = 0; k <= M; ++k) {
      const VertexFunction& u = pi.witness_powers[static_cast<std::size_t>(k)];
      if (!supported_in(g, u, c.ball)) support_ok[i] = 0;
      c.norms.push_back(lq_norm(g, r, u));
      ratio[i] = std::max(ratio[i], c.norms.back() / atom_size_bound(g, p, c.ball, r, M, k));
    }
    c.a = std::move(pi.value);
    c.b = std::move(pi.witness_powers[0]);
    terms[i].lambda = metas[i].lambda;
  }

  double C = 1.0;
  for (std::size_t i = 0; i < metas.size(); ++i) {
    if (live[i]) C = std::max(C, ratio[i]);
  }
  out.rescale = C;

  VertexFunction sum(n, 0.0);
  std::vector<WeightedBall> balls;
  for (std::size_t i = 0; i < metas.size(); ++i) {
    if (!live[i]) continue;
    ++out.tent_atoms;
    HardyAtomTerm& t = terms[i];
    for (std::size_t x = 0; x < n; ++x) sum[x] += t.lambda * t.cert.a[x];
    for (double& v : t.cert.a) v /= C;
    for (double& v : t.cert.b) v /= C;
    for (double& v : t.cert.norms) v /= C;
    t.lambda *= C;
    if (!support_ok[i] && out.certificates_ok) {
      out.certificates_ok = false;
      out.first_bad_certificate = static_cast<int>(out.atoms.size());
    }
    balls.push_back({t.lambda, t.cert.ball});
    out.atoms.push_back(std::move(t));
  }

  std::vector<char> ok(out.atoms.size(), 1);
#pragma omp parallel for schedule(dynamic, 4)
  for (std::size_t i = 0; i < out.atoms.size(); ++i) ok[i] = verify_hardy_atom(op, p, out.atoms[i].cert).ok ? 1 : 0;
  for (std::size_t i = 0; i < ok.size(); ++i) {
    if (!ok[i] && out.certificates_ok) {
      out.certificates_ok = false;
      out.first_bad_certificate = static_cast<int>(i);
    }
  }

  VertexFunction diff(n);
  for (std::size_t x = 0; x < n; ++x) diff[x] = f[x] - sum[x];
  out.residual = op.norm2(diff);
  out.relative_residual = out.residual / op.norm2(f);
  out.aggregate = aggregate_A(g, p, balls);
  return out;
}

double synthesis_ratio(const MarkovOperator& op, const ExponentFunction& p, const std::vector<WeightedBall>& terms,
                       const std::vector<VertexFunction>& pieces, int K) {
  const auto& g = op.graph();
  const double agg = aggregate_A(g, p, terms);
  if (agg == 0.0) return 0.0;
  VertexFunction sum(g.size(), 0.0);
  for (const VertexFunction& v : pieces) {
    for (std::size_t x = 0; x < sum.size(); ++x) sum[x] += v[x];
  }
  return hardy_norm(op, p, sum, level_cap(g, K)) / agg;
}

RatioFit verify_atom_synthesis(const MarkovOperator& op, const ExponentFunction& p, double r, int M, double D,
                               int family_size, const Sweep& sweep, int K) {
  require_atom_parameters(p, r, M, D);
  const auto& g = op.graph();
  const int r_hi = std::max(M + 2, radius_guard(g));
  return run_ratio_sweep(sweep, [&](Rng& rng, int trial) {
    std::vector<WeightedBall> terms;
    std::vector<VertexFunction> pieces;
    for (int j = 0; j < family_size; ++j) {
      const Ball b = random_ball(g, rng, M + 1, r_hi);
      HardyAtomCertificate c = random_hardy_atom(op, p, b, r, M, rng);
      const CertificateCheck chk = verify_hardy_atom(op, p, c);
      if (!chk.ok) {
        throw std::logic_error("trial " + std::to_string(trial) + ": atom " + std::to_string(j) +
                               " fails its certificate: " + chk.failure);
      }
      const double lambda = (rng.uniform() < 0.5 ? -1.0 : 1.0) * rng.uniform(0.5, 2.0);
      for (double& v : c.a) v *= lambda;
      terms.push_back({lambda, b});
      pieces.push_back(std::move(c.a));
    }
    return synthesis_ratio(op, p, terms, pieces, K);
  });
}

MolecularSynthesisReport verify_molecular_synthesis(const MarkovOperator& op, const ExponentFunction& p, double q,
                                                    int M, double eps, double D, int family_size, const Sweep& sweep,
                                                    int K) {
  if (!(q >= 2.0 && q > p.p_plus())) throw PreconditionError("molecules need q >= 2 and q > p_+");
  if (!(M > 2.0 * D / p.p_minus())) throw PreconditionError("molecules need M > 2D/p_-");
  if (!(eps > D / p.p_minus())) throw PreconditionError("molecules need eps > D/p_-");
  const auto& g = op.graph();
  const int r_hi = std::max(3, radius_guard(g));
  MolecularSynthesisReport rep;
  std::vector<double> rescale(static_cast<std::size_t>(std::max(0, sweep.trials)), 0.0);
  std::vector<double> summed(rescale.size(), 0.0);
  std::vector<char> certified(rescale.size(), 1);
  rep.fit = run_ratio_sweep(sweep, [&](Rng& rng, int trial) {
    std::vector<MoleculeCertificate> mols;
    std::vector<double> lambda;
    for (int j = 0; j < family_size; ++j) {
      const Ball b = random_ball(g, rng, 2, r_hi);
      const TentAtom atom = random_tent_atom(g, p, b, q, rng);
      mols.push_back(molecule_from_tent_atom(op, atom, q, M, eps));
      lambda.push_back((rng.uniform() < 0.5 ? -1.0 : 1.0) * rng.uniform(0.5, 2.0));
    }
    double C = 0.0, sc = 0.0;
    for (const auto& m : mols) {
      const MoleculeCheck chk = verify_molecule(op, p, m);
      C = std::max(C, chk.worst_ratio);
      sc = std::max(sc, chk.summed_C);
    }
    C = std::max(C, 1e-300);
    bool all = true;
    for (const auto& m : mols) all = all && verify_molecule(op, p, m, C).ok;
    const std::size_t slot = static_cast<std::size_t>(trial - sweep.first);
    rescale[slot] = C;
    summed[slot] = sc;
    certified[slot] = all ? 1 : 0;
    std::vector<WeightedBall> terms;
    std::vector<VertexFunction> pieces;
    for (std::size_t j = 0; j < mols.size(); ++j) {
      terms.push_back({lambda[j] * C, mols[j].ball});
      VertexFunction v = mols[j].m;
      for (double& e : v) e *= lambda[j];
      pieces.push_back(std::move(v));
    }
    return synthesis_ratio(op, p, terms, pieces, K);
  });
  for (std::size_t t = 0; t < rescale.size(); ++t) {
    rep.max_rescale = std::max(rep.max_rescale, rescale[t]);
    rep.max_summed_C = std::max(rep.max_summed_C, summed[t]);
    rep.all_certified = rep.all_certified && certified[t];
  }
  return rep;
}

RatioFit verify_mplus_bound(const MarkovOperator& op, const ExponentFunction& p, int M, const Sweep& sweep, int K) {
  const auto& g = op.graph();
  K = level_cap(g, K);
  const int r_hi = std::max(M + 2, radius_guard(g));
  return run_ratio_sweep(sweep, [&](Rng& rng, int trial) {
    VertexFunction f;
    const Ball b = random_ball(g, rng, M + 1, r_hi);
    if (trial % 2 == 0) {
      f = random_hardy_atom(op, p, b, 2.0, M, rng).a;
    } else {
      f = random_mean_zero_on_ball(g, rng, b);
    }
    const double s = hardy_norm(op, p, f, K);
    if (s == 0.0) return -1.0;
    return luxemburg_norm(g, p, radial_maximal(op, f, K)) / s;
  });
}

RatioFit verify_simple_atom_bound(const MarkovOperator& op, const ExponentFunction& p, const SimpleAtomHypotheses& hyp,
                                  int family_size, const Sweep& sweep, int K) {
  if (!(hyp.poincare_C > 0.0 && std::isfinite(hyp.poincare_C))) {
    throw PreconditionError("simple atoms need a finite Poincare constant");
  }
  if (!(p.p_plus() < 2.0)) throw PreconditionError("simple atoms need p_+ < 2");
  if (!(hyp.h > 0.0 && hyp.D / (hyp.D + hyp.h) < p.frak_p())) {
    std::ostringstream s;
    s << "simple atoms need D/(D+h) < frak_p; D/(D+h) = " << hyp.D / (hyp.D + hyp.h) << ", frak_p = " << p.frak_p();
    throw PreconditionError(s.str());
  }
  const auto& g = op.graph();
  K = level_cap(g, K);
  const int r_hi = radius_guard(g);
  return run_ratio_sweep(sweep, [&](Rng& rng, int trial) {
    std::vector<WeightedBall> terms;
    VertexFunction sum(g.size(), 0.0);
    for (int j = 0; j < family_size; ++j) {
      const Ball b = random_ball(g, rng, 2, r_hi);
      const SimpleAtomCertificate c = random_simple_atom(g, p, b, rng);
      const CertificateCheck chk = verify_simple_atom(g, p, c);
      if (!chk.ok) {
        throw std::logic_error("trial " + std::to_string(trial) + ": simple atom " + std::to_string(j) + " invalid: " +
                               chk.failure);
      }
      const double lambda = (rng.uniform() < 0.5 ? -1.0 : 1.0) * rng.uniform(0.5, 2.0);
      for (std::size_t x = 0; x < sum.size(); ++x) sum[x] += lambda * c.a[x];
      terms.push_back({lambda, b});
    }
    const double agg = aggregate_A(g, p, terms);
    if (agg == 0.0) return -1.0;
    return luxemburg_norm(g, p, radial_maximal(op, sum, K)) / agg;
  });
}

EqualReport verify_equal_lebesgue(const MarkovOperator& op, const ExponentFunction& p, const Sweep& sweep, int K) {
  if (!(p.p_minus() > 1.0)) throw PreconditionError("Lebesgue comparison needs p_- > 1");
  const auto& g = op.graph();
  K = level_cap(g, K);
  const int r_hi = radius_guard(g);
  std::vector<double> back(static_cast<std::size_t>(std::max(0, sweep.trials)), -1.0);
  EqualReport rep;
  rep.forward = run_ratio_sweep(sweep, [&](Rng& rng, int trial) {
    const Ball b = random_ball(g, rng, 2, r_hi);
    const VertexFunction f = random_mean_zero_on_ball(g, rng, b);
    const double nf = luxemburg_norm(g, p, f);
    const double ns = hardy_norm(op, p, f, K);
    if (nf == 0.0 || ns == 0.0) return -1.0;
    back[static_cast<std::size_t>(trial - sweep.first)] = nf / ns;
    return ns / nf;
  });
  rep.backward.seed = sweep.seed;
  for (int t = 0; t < sweep.trials; ++t) {
    if (back[static_cast<std::size_t>(t)] >= 0.0) rep.backward.observe(back[static_cast<std::size_t>(t)], sweep.first + t);
  }
  return rep;
}

}  // namespace graphhardy
