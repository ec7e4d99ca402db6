#include "graphhardy/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "graphhardy/sampling.hpp"
#include "graphhardy/sweep.hpp"

namespace graphhardy {

SpectralDecomposition::SpectralDecomposition(const MarkovOperator& op) : op_(&op) {
  const auto& g = op.graph();
  const std::size_t n = g.size();
  if (n > kMaxVertices) throw PreconditionError("dense spectral path is capped at 2048 vertices");
  const auto N = static_cast<Eigen::Index>(n);
  sqrt_mu_.resize(N);
  for (std::size_t x = 0; x < n; ++x) sqrt_mu_(static_cast<Eigen::Index>(x)) = std::sqrt(g.mu(static_cast<VertexId>(x)));
  Eigen::MatrixXd S = Eigen::MatrixXd::Zero(N, N);
  for (std::size_t x = 0; x < n; ++x) {
    const auto cols = g.neighbors(static_cast<VertexId>(x));
    const auto vals = g.conductances(static_cast<VertexId>(x));
    for (std::size_t i = 0; i < cols.size(); ++i) {
      const auto a = static_cast<Eigen::Index>(x), b = static_cast<Eigen::Index>(cols[i]);
      S(a, b) = -vals[i] / (sqrt_mu_(a) * sqrt_mu_(b));
    }
  }
  S.diagonal().array() += 1.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
  if (es.info() != Eigen::Success) throw std::runtime_error("eigensolver failed");
  lambda_ = es.eigenvalues();
  U_ = es.eigenvectors();
}

VertexFunction SpectralDecomposition::eigenvector(std::size_t i) const {
  VertexFunction v(size());
  for (std::size_t x = 0; x < v.size(); ++x) {
    const auto xi = static_cast<Eigen::Index>(x);
    v[x] = U_(xi, static_cast<Eigen::Index>(i)) / sqrt_mu_(xi);
  }
  return v;
}

Eigen::VectorXd SpectralDecomposition::coefficients(const VertexFunction& f) const {
  const Eigen::Map<const Eigen::VectorXd> fv(f.data(), static_cast<Eigen::Index>(f.size()));
  return U_.transpose() * fv.cwiseProduct(sqrt_mu_);
}

VertexFunction SpectralDecomposition::synthesize(const Eigen::VectorXd& c) const {
  const Eigen::VectorXd v = (U_ * c).cwiseQuotient(sqrt_mu_);
  return VertexFunction(v.data(), v.data() + v.size());
}

VertexFunction SpectralDecomposition::apply(const std::function<double(double)>& F, const VertexFunction& f) const {
  Eigen::VectorXd c = coefficients(f);
  for (Eigen::Index i = 0; i < c.size(); ++i) c(i) *= F(lambda_(i));
  return synthesize(c);
}

double SpectralDecomposition::projection_norm(const VertexFunction& f, double lo, double hi) const {
  const Eigen::VectorXd c = coefficients(f);
  double s = 0.0;
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    if (lambda_(i) >= lo && lambda_(i) < hi) s += c(i) * c(i);
  }
  return std::sqrt(s);
}

double SpectralDecomposition::gap() const {
  for (Eigen::Index i = 0; i < lambda_.size(); ++i) {
    if (lambda_(i) > kKernel) return lambda_(i);
  }
  return 0.0;
}

double SpectralDecomposition::contraction() const {
  double rho = 0.0;
  for (Eigen::Index i = 0; i < lambda_.size(); ++i) {
    if (lambda_(i) > kKernel) rho = std::max(rho, std::abs(1.0 - lambda_(i)));
  }
  return rho;
}

VertexFunction gradient(const MarkovOperator& op, const VertexFunction& f) {
  const std::size_t n = op.size();
  VertexFunction out(n);
  for (std::size_t x = 0; x < n; ++x) {
    const auto cols = op.row_columns(static_cast<VertexId>(x));
    const auto vals = op.row_values(static_cast<VertexId>(x));
    double s = 0.0;
    for (std::size_t i = 0; i < cols.size(); ++i) {
      const double d = f[x] - f[cols[i]];
      s += vals[i] * d * d;
    }
    out[x] = std::sqrt(0.5 * s);
  }
  return out;
}

std::vector<double> beta_coefficients(int K) {
  if (K < 0) throw std::invalid_argument("beta coefficients need K >= 0");
  std::vector<double> b(static_cast<std::size_t>(K) + 1, 1.0);
  for (int k = 1; k <= K; ++k) {
    b[static_cast<std::size_t>(k)] = b[static_cast<std::size_t>(k - 1)] * (2.0 * k - 1.0) / (2.0 * k);
  }
  return b;
}

int riesz_terms(double rho, double tol) {
  if (!(rho > 0.0 && rho < 1.0) || !(tol > 0.0 && tol < 1.0)) {
    throw std::invalid_argument("riesz_terms needs rho, tol in (0, 1)");
  }
  return static_cast<int>(std::ceil(std::log(tol) / std::log(rho)));
}

RieszSeries riesz_transform_series(const MarkovOperator& op, const VertexFunction& f, int K, double rho) {
  if (!is_mean_zero(op.graph(), f)) throw PreconditionError("Riesz transform needs mean-zero f on a finite graph");
  const std::size_t n = op.size();
  const std::vector<double> beta = beta_coefficients(K);
  RieszSeries out;
  out.terms = K;
  out.partial.assign(n, 0.0);
  VertexFunction h = f, tmp(n);
  for (int k = 0; k <= K; ++k) {
    if (k > 0) {
      op.apply_P(std::span<const double>(h), std::span<double>(tmp));
      h.swap(tmp);
    }
    const double b = beta[static_cast<std::size_t>(k)];
    for (std::size_t x = 0; x < n; ++x) out.partial[x] += b * h[x];
  }
  out.value = gradient(op, out.partial);
  if (rho > 0.0 && rho < 1.0) {
    double term = beta.back(), tail = 0.0;
    for (int k = K + 1;; ++k) {
      term *= rho * (2.0 * k - 1.0) / (2.0 * k);
      tail += term;
      if (term <= 1e-18 * tail || term == 0.0) break;
    }
    tail *= std::pow(rho, K);
    out.tail_bound = std::sqrt(2.0) * op.norm2(f) * tail;
  } else {
    out.tail_bound = std::nan("");
  }
  return out;
}

VertexFunction spectral_power(const SpectralDecomposition& sd, double s, const VertexFunction& f) {
  return sd.apply(
      [s](double l) {
        if (l <= SpectralDecomposition::kKernel) return 0.0;
        return std::pow(l, s);
      },
      f);
}

VertexFunction riesz_transform_spectral(const SpectralDecomposition& sd, const VertexFunction& f) {
  if (!is_mean_zero(sd.op().graph(), f)) throw PreconditionError("Riesz transform needs mean-zero f on a finite graph");
  return gradient(sd.op(), spectral_power(sd, -0.5, f));
}

MultiplierSpec MultiplierSpec::table(std::string name, std::vector<std::pair<double, double>> samples) {
  if (samples.empty()) throw std::invalid_argument("multiplier table is empty");
  std::sort(samples.begin(), samples.end());
  MultiplierSpec m;
  m.name = std::move(name);
  m.F = [s = std::move(samples)](double l) {
    if (l <= s.front().first) return s.front().second;
    if (l >= s.back().first) return s.back().second;
    const auto it = std::upper_bound(s.begin(), s.end(), std::make_pair(l, -kInf));
    const auto& [x1, y1] = *it;
    const auto& [x0, y0] = *(it - 1);
    if (x1 == x0) return y1;
    return y0 + (y1 - y0) * (l - x0) / (x1 - x0);
  };
  return m;
}

MultiplierSpec MultiplierSpec::parse(const std::string& text) {
  const auto colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : text.substr(colon + 1);
  MultiplierSpec m;
  m.name = text;
  if (kind == "identity") {
    m.F = [](double) { return 1.0; };
  } else if (kind == "heat") {
    const int n = std::stoi(arg);
    if (n < 0) throw std::invalid_argument("heat:n needs n >= 0");
    m.F = [n](double l) { return std::pow(1.0 - l, n); };
  } else if (kind == "imaginary-power") {
    const double tau = std::stod(arg);
    m.F = [tau](double l) { return l > 0.0 ? std::cos(tau * std::log(l)) : 0.0; };
  } else if (kind == "step") {
    m.F = [](double l) { return l <= 1.0 ? 1.0 : 0.0; };
  } else if (kind == "file") {
    std::ifstream in(arg);
    if (!in) throw std::runtime_error("cannot open multiplier table " + arg);
    std::vector<std::pair<double, double>> samples;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.resize(hash);
      std::istringstream ls(line);
      double l = 0.0, v = 0.0;
      if (!(ls >> l)) continue;
      std::string extra;
      if (!(ls >> v) || (ls >> extra)) {
        throw std::runtime_error(arg + ":" + std::to_string(lineno) + ": expected `lambda F(lambda)`");
      }
      samples.emplace_back(l, v);
    }
    return table(text, std::move(samples));
  } else {
    throw std::invalid_argument("unknown multiplier `" + text + "`");
  }
  return m;
}

VertexFunction spectral_multiplier(const SpectralDecomposition& sd, const MultiplierSpec& spec,
                                   const VertexFunction& f) {
  return sd.apply(spec.F, f);
}

namespace {

double smooth_step_h(double s) { return s > 0.0 ? std::exp(-1.0 / s) : 0.0; }

}  // namespace

double theta_cutoff(double t) {
  const double a = smooth_step_h(1.5 - t), b = smooth_step_h(t - 1.0);
  return a / (a + b);
}

double psi_piece(int ell, double t) {
  return theta_cutoff(std::ldexp(t, ell)) - theta_cutoff(std::ldexp(t, ell + 1));
}

double eta_bump(double lambda) {
  const double u = (lambda - 1.0) / 0.5;
  if (std::abs(u) >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - u * u));
}

std::vector<std::function<double(double)>> dyadic_decomposition(const MultiplierSpec& spec, int ell_max) {
  if (ell_max < 0) throw std::invalid_argument("dyadic decomposition needs ell_max >= 0");
  std::vector<std::function<double(double)>> out;
  out.emplace_back([F = spec.F](double l) { return (1.0 - theta_cutoff(2.0 * l)) * F(l); });
  for (int ell = 1; ell <= ell_max; ++ell) {
    out.emplace_back([F = spec.F, ell](double l) { return psi_piece(ell, l) * F(l); });
  }
  return out;
}

double dyadic_resolved_from(int ell_max) { return 3.0 * std::ldexp(1.0, -ell_max - 2); }

namespace {

// k-th derivative by central differences at step h.
double central(const std::function<double(double)>& f, double x, int k, double h) {
  if (k == 0) return f(x);
  return (central(f, x + h, k - 1, h) - central(f, x - h, k - 1, h)) / (2.0 * h);
}

double derivative(const std::function<double(double)>& f, double x, int k, double h) {
  if (k == 0) return f(x);
  return (4.0 * central(f, x, k, h / 2.0) - central(f, x, k, h)) / 3.0;
}

}  // namespace

RsEstimate estimate_Rs(const MultiplierSpec& spec, double s, const std::vector<double>& t_grid, int x_points) {
  if (!(s > 0.0)) throw std::invalid_argument("R_s needs s > 0");
  if (x_points < 2) throw std::invalid_argument("R_s needs at least two sample points");
  const int m = static_cast<int>(std::floor(s));
  const double frac = s - m;
  constexpr double kStep = 1e-4;
  // Sample window slightly wider than supp eta so that increments leaving the support are seen.
  const double lo = 0.5 - 0.05, hi = 1.5 + 0.05;
  RsEstimate best;
  for (double t : t_grid) {
    const std::function<double(double)> g = [&](double l) { return eta_bump(l) * spec.F(t * l); };
    std::vector<std::vector<double>> d(static_cast<std::size_t>(m) + 1, std::vector<double>(static_cast<std::size_t>(x_points)));
    double norm = 0.0;
    for (int k = 0; k <= m; ++k) {
      double sup = 0.0;
      for (int i = 0; i < x_points; ++i) {
        const double x = lo + (hi - lo) * i / (x_points - 1);
        const double v = derivative(g, x, k, kStep);
        d[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)] = v;
        sup = std::max(sup, std::abs(v));
      }
      norm += sup;
    }
    // Hoelder quotient of the top derivative over all sample pairs.
    const auto& top = d[static_cast<std::size_t>(m)];
    double Ms = 0.0;
    for (int i = 0; i < x_points; ++i) {
      for (int j = i + 1; j < x_points; ++j) {
        const double step = (hi - lo) * (j - i) / (x_points - 1);
        Ms = std::max(Ms, std::pow(step, -frac) * std::abs(top[static_cast<std::size_t>(j)] - top[static_cast<std::size_t>(i)]));
      }
    }
    norm += Ms;
    if (norm > best.value) {
      best.value = norm;
      best.worst_t = t;
    }
  }
  return best;
}

std::vector<double> default_t_grid() {
  std::vector<double> t;
  for (int i = -40; std::pow(2.0, i / 4.0) <= 4.0 / 3.0; ++i) t.push_back(std::pow(2.0, i / 4.0));
  return t;
}

namespace {

int level_cap(const WeightedGraph& g, int K) { return K > 0 ? K : default_level_cap(g); }
int radius_guard(const WeightedGraph& g) { return std::max(2, g.diameter() / 4); }

}  // namespace

MultiplierHardyReport verify_multiplier_hardy(const SpectralDecomposition& sd, const ExponentFunction& p,
                                              const MultiplierSpec& spec, double s, double D, double Rs, int M,
                                              const Sweep& sweep, int K) {
  if (!(p.p_plus() < 2.0)) throw PreconditionError("multiplier theorem needs p_+ < 2");
  if (!(s > 2.0 * D / p.p_minus())) throw PreconditionError("multiplier theorem needs s > 2D/p_-");
  if (!std::isfinite(Rs)) throw PreconditionError("multiplier theorem needs a finite R_s estimate");
  if (!(M > 2.0 * D / p.p_minus())) throw PreconditionError("multiplier theorem needs M > 2D/p_-");
  const MarkovOperator& op = sd.op();
  const auto& g = op.graph();
  K = level_cap(g, K);
  const int r_hi = std::max(2 * M + 2, radius_guard(g));
  MultiplierHardyReport rep;
  rep.fit = run_ratio_sweep(sweep, [&](Rng& rng, int trial) {
    VertexFunction f;
    const Ball b = random_ball(g, rng, 2 * M + 1, r_hi);
    if (trial % 2 == 0) {
      f = random_hardy_atom(op, p, b, 2.0, 2 * M, rng).a;
    } else {
      f = random_mean_zero_on_ball(g, rng, b);
    }
    const double den = hardy_norm(op, p, f, K);
    if (den == 0.0) return -1.0;
    return hardy_norm(op, p, spectral_multiplier(sd, spec, f), K) / den;
  });

  // F(L) a = L^M F(L) L^M b for a (2, p, 2M)-atom a = L^{2M} b.
  Rng rng = Rng(sweep.seed).split(0xa70a);
  const Ball b = random_ball(g, rng, 2 * M + 1, r_hi);
  const HardyAtomCertificate atom = random_hardy_atom(op, p, b, 2.0, 2 * M, rng);
  MoleculeCertificate mol;
  mol.b = spectral_multiplier(sd, spec, op.apply_L_power(M, atom.b));
  mol.m = op.apply_L_power(M, mol.b);
  mol.ball = b;
  mol.q = 2.0;
  mol.M = M;
  constexpr double kCap = 100.0;
  for (double extra : {0.25, 0.5, 1.0, 2.0, 4.0}) {
    mol.eps = D / p.p_minus() + extra;
    const MoleculeCheck chk = verify_molecule(op, p, mol);
    const double C = std::max(chk.worst_ratio, 1e-300);
    if (C <= kCap && verify_molecule(op, p, mol, C).ok) {
      rep.best_eps = mol.eps;
      rep.rescale = C;
      rep.molecule_certified = true;
    }
  }
  return rep;
}

RatioFit verify_riesz_hardy(const SpectralDecomposition& sd, const ExponentFunction& p, int M, double D,
                            const Sweep& sweep, int K) {
  if (!(p.p_plus() < 2.0)) throw PreconditionError("Riesz bound needs p_+ < 2");
  const MarkovOperator& op = sd.op();
  const auto& g = op.graph();
  K = level_cap(g, K);
  const int r_hi = std::max(M + 2, radius_guard(g));
  (void)D;
  return run_ratio_sweep(sweep, [&](Rng& rng, int trial) {
    VertexFunction f;
    const Ball b = random_ball(g, rng, M + 1, r_hi);
    if (trial % 2 == 0) {
      f = random_hardy_atom(op, p, b, 2.0, M, rng).a;
    } else {
      f = random_mean_zero_on_ball(g, rng, b);
    }
    const double den = hardy_norm(op, p, f, K);
    if (den == 0.0) return -1.0;
    return luxemburg_norm(g, p, riesz_transform_spectral(sd, f)) / den;
  });
}

RatioFit verify_GN_hardy(const MarkovOperator& op, const ExponentFunction& p, int N, int M, const Sweep& sweep, int K) {
  if (N < 1) throw PreconditionError("G_{L,N} needs N >= 1");
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
    const double den = hardy_norm(op, p, f, K);
    if (den == 0.0) return -1.0;
    return luxemburg_norm(g, p, square_function_GN(op, f, N, K)) / den;
  });
}

WeightedSLReport verify_weighted_SL(const MarkovOperator& op, const VertexFunction& w, double q, const Sweep& sweep,
                                    int K, double Aq_cap) {
  if (!(q > 1.0 && std::isfinite(q))) throw PreconditionError("weighted S_L needs 1 < q < inf");
  const auto& g = op.graph();
  WeightedSLReport rep;
  rep.Aq = check_muckenhoupt(g, w, q);
  if (!(rep.Aq <= Aq_cap)) {
    std::ostringstream s;
    s << "weight fails A_q: constant " << rep.Aq << " exceeds " << Aq_cap;
    throw PreconditionError(s.str());
  }
  K = level_cap(g, K);
  const int r_hi = radius_guard(g);
  std::vector<double> d15(static_cast<std::size_t>(std::max(0, sweep.trials)), -1.0), d2(d15.size(), -1.0);
  rep.fit = run_ratio_sweep(sweep, [&](Rng& rng, int trial) {
    VertexFunction f = random_test_function(g, rng, trial);
    const double mz = op.mean(f);
    for (double& v : f) v -= mz;
    const double den = lq_norm(g, q, f, w);
    if (den == 0.0) return -1.0;
    const std::size_t slot = static_cast<std::size_t>(trial - sweep.first);
    for (double r : {1.5, 2.0}) {
      const VertexFunction c = conical_local_maximal(op, f, r, r_hi);
      VertexFunction fr(f.size());
      for (std::size_t x = 0; x < f.size(); ++x) fr[x] = std::pow(std::abs(f[x]), r);
      const VertexFunction m = hl_maximal(g, fr);
      double worst = 0.0;
      for (std::size_t x = 0; x < f.size(); ++x) {
        const double rhs = std::pow(m[x], 1.0 / r);
        if (rhs > 0.0) worst = std::max(worst, c[x] / rhs);
      }
      (r == 2.0 ? d2 : d15)[slot] = worst;
    }
    return lq_norm(g, q, square_function_SL(op, f, K), w) / den;
  });
  rep.domination_15.seed = rep.domination_2.seed = sweep.seed;
  for (int t = 0; t < sweep.trials; ++t) {
    const auto i = static_cast<std::size_t>(t);
    if (d15[i] >= 0.0) rep.domination_15.observe(d15[i], sweep.first + t);
    if (d2[i] >= 0.0) rep.domination_2.observe(d2[i], sweep.first + t);
  }
  return rep;
}

}  // namespace graphhardy
