#include "graphhardy/harness.hpp"

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "graphhardy/atomic.hpp"
#include "graphhardy/hardy.hpp"
#include "graphhardy/io.hpp"
#include "graphhardy/markov.hpp"
#include "graphhardy/sampling.hpp"
#include "graphhardy/spectral.hpp"
#include "graphhardy/sweep.hpp"
#include "graphhardy/tent.hpp"

namespace graphhardy::harness {

using nlohmann::json;

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

double to_number(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw std::invalid_argument("bad number `" + s + "` in " + what);
  return v;
}

int to_int(const std::string& s, const std::string& what) {
  const double v = to_number(s, what);
  if (v != std::floor(v) || std::abs(v) > 1e9) throw std::invalid_argument("expected an integer in " + what);
  return static_cast<int>(v);
}

// JSON has no infinities; non-finite values become null.
json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

bool finite_positive(double v) { return std::isfinite(v) && v > 0.0; }

json fit_json(const RatioFit& f) {
  return {{"C", num(f.fitted_C)}, {"min_ratio", num(f.trials ? f.min_ratio : 0.0)}, {"trials", f.trials}};
}

json worst_json(const RatioFit& f) { return {{"seed", f.seed}, {"trial", f.worst_trial}}; }

int atom_order(double D, const ExponentFunction& p) { return static_cast<int>(std::ceil(2.0 * D / p.p_minus())) + 1; }

struct Context {
  Context(const RunConfig& c, const WeightedGraph& graph, const MarkovOperator& o, const ExponentFunction& e, double d,
          Sweep s)
      : cfg(c), g(graph), op(o), p(e), D(d), sweep(s) {}

  const RunConfig& cfg;
  const WeightedGraph& g;
  const MarkovOperator& op;
  const ExponentFunction& p;
  double D;
  Sweep sweep;

  int K() const { return cfg.levels > 0 ? cfg.levels : default_level_cap(g); }
  const SpectralDecomposition& spectral() const {
    if (!sd_) sd_ = std::make_unique<SpectralDecomposition>(op);
    return *sd_;
  }

 private:
  mutable std::unique_ptr<SpectralDecomposition> sd_;
};

struct Record {
  json hypotheses = json::object();
  json constants = json::object();
  json worst = json::object();
  std::string rule;
  bool pass = false;
};

// Level stability: the same inputs at cap K and 2K.
bool level_stable(double a, double b, double factor) {
  if (!std::isfinite(a) || !std::isfinite(b)) return false;
  if (a == 0.0 && b == 0.0) return true;
  if (a <= 0.0 || b <= 0.0) return false;
  return std::max(a / b, b / a) <= factor;
}

template <class Fit>
Record stability_record(const Context& c, Fit&& fit_at) {
  Record r;
  const int K = c.K();
  const RatioFit a = fit_at(K);
  const RatioFit b = fit_at(2 * K);
  r.constants = {{"C", num(a.fitted_C)}, {"C_2K", num(b.fitted_C)}, {"K", K}, {"trials", a.trials}};
  r.worst = worst_json(a);
  r.rule = "constants at K and 2K finite and within the stability factor";
  r.pass = a.trials > 0 && level_stable(a.fitted_C, b.fitted_C, c.cfg.tol.stability);
  return r;
}

// Normal noise on B x {1..K} for a random ball B.
void random_tent_support(const WeightedGraph& g, Rng& rng, TentFunction& F, int r_hi) {
  const Ball b = random_ball(g, rng, 2, r_hi);
  for (int k = 1; k <= F.levels(); ++k) {
    for (auto y : g.ball(b.center, b.radius)) F.at(y, k) = rng.normal();
  }
}

// ---- individual checks --------------------------------------------------------

Record check_theorem_a(const Context& c) {
  Record r;
  const RatioFit f = verify_theorem_A(c.g, c.p, c.sweep);
  r.hypotheses = {{"p_minus", c.p.p_minus()}};
  r.constants = fit_json(f);
  r.constants["l2_bound"] = num(maximal_l2_bound(c.g));
  r.worst = worst_json(f);
  r.rule = "fitted C finite and >= 1";
  r.pass = f.trials > 0 && std::isfinite(f.fitted_C) && f.fitted_C >= 1.0 - 1e-12;
  return r;
}

Record check_lemma_21(const Context& c) {
  Record r;
  const RatioFit f = verify_fefferman_stein(c.g, c.p, 2.0, 4, c.sweep);
  r.hypotheses = {{"q", 2.0}, {"family_size", 4}};
  r.constants = fit_json(f);
  r.worst = worst_json(f);
  r.rule = "fitted C finite and >= 1";
  r.pass = f.trials > 0 && std::isfinite(f.fitted_C) && f.fitted_C >= 1.0 - 1e-12;
  return r;
}

Record check_lemma_22(const Context& c) {
  Record r;
  const double q = 2.0 * c.p.p_plus();
  const RatioFit f = verify_lemma_sum(c.g, c.p, q, 8, c.sweep);
  r.hypotheses = {{"q", q}, {"family_size", 8}};
  r.constants = fit_json(f);
  r.worst = worst_json(f);
  r.rule = "fitted C finite";
  r.pass = f.trials > 0 && std::isfinite(f.fitted_C);
  return r;
}

BallRatioReport ball_ratios(const Context& c, double& w, double& q) {
  w = 0.5 * c.p.p_minus();
  q = 2.0 * c.p.p_plus();
  return verify_ball_ratios(c.g, c.p, w, q, c.D, std::max(2, c.g.diameter() / 4), {1.5, 2.0, 4.0}, c.sweep);
}

Record check_lemma_23(const Context& c) {
  Record r;
  double w = 0.0, q = 0.0;
  const BallRatioReport b = ball_ratios(c, w, q);
  r.hypotheses = {{"w", w}, {"q", q}, {"D", c.D}};
  r.constants = {{"C_growth", num(b.C_growth)}, {"C_shrink", num(b.C_shrink)}};
  r.worst = {{"x", b.worst_x}, {"r", b.worst_r}, {"beta", b.worst_beta}};
  r.rule = "growth and shrink constants finite";
  r.pass = finite_positive(b.C_growth) && finite_positive(b.C_shrink);
  return r;
}

Record check_lemma_24(const Context& c) {
  Record r;
  double w = 0.0, q = 0.0;
  const BallRatioReport b = ball_ratios(c, w, q);
  r.hypotheses = {{"w", w}, {"q", q}, {"D", c.D}};
  r.constants = {{"C_aggregate", num(b.C_aggregate)}};
  r.worst = {{"seed", c.sweep.seed}};
  r.rule = "dilated aggregate constant finite";
  r.pass = finite_positive(b.C_aggregate);
  return r;
}

Record check_thm_11(const Context& c) {
  Record r;
  const int levels = c.cfg.levels > 0 ? c.cfg.levels : 16;
  const int r_hi = std::max(2, c.g.diameter() / 4);
  const std::size_t T = static_cast<std::size_t>(std::max(0, c.sweep.trials));
  std::vector<double> recon(T, 0.0), atomC(T, 0.0);
  std::vector<char> ok(T, 1);
  const RatioFit f = run_ratio_sweep(c.sweep, [&](Rng& rng, int trial) {
    TentFunction F(c.g.size(), levels);
    random_tent_support(c.g, rng, F, r_hi);
    const TentDecomposition d = tent_atomic_decomposition(c.g, c.p, F, 2.0, false);
    const auto slot = static_cast<std::size_t>(trial - c.sweep.first);
    recon[slot] = d.reconstruction_error;
    atomC[slot] = d.atom_constant;
    ok[slot] = d.supports_ok && d.covers_ok;
    return d.tent_norm > 0.0 ? d.aggregate / d.tent_norm : -1.0;
  });
  const double max_recon = T ? *std::max_element(recon.begin(), recon.end()) : 0.0;
  const double max_atom = T ? *std::max_element(atomC.begin(), atomC.end()) : 0.0;
  const bool structure = std::all_of(ok.begin(), ok.end(), [](char v) { return v != 0; });
  r.hypotheses = {{"q", 2.0}, {"levels", levels}, {"eta", 0.5}, {"gamma", 0.5}};
  r.constants = fit_json(f);
  r.constants["reconstruction_error"] = num(max_recon);
  r.constants["atom_rescale"] = num(max_atom);
  r.constants["covers_and_supports_ok"] = structure;
  r.worst = worst_json(f);
  r.rule = "reconstruction within tolerance, atoms within the rescale cap, covers and supports verified";
  r.pass = f.trials > 0 && std::isfinite(f.fitted_C) && max_recon <= c.cfg.tol.reconstruction &&
           max_atom <= c.cfg.tol.rescale && structure;
  return r;
}

Record check_thm_12a(const Context& c) {
  const int M = atom_order(c.D, c.p);
  Record r = stability_record(c, [&](int K) { return verify_atom_synthesis(c.op, c.p, 2.0, M, c.D, 8, c.sweep, K); });
  r.hypotheses = {{"r", 2.0}, {"M", M}, {"D", c.D}, {"family_size", 8}};
  return r;
}

Record check_thm_12b(const Context& c) {
  Record r;
  const int M = atom_order(c.D, c.p);
  const int diam = c.g.diameter();
  const int K = c.cfg.levels > 0 ? c.cfg.levels : 4 * diam * diam;
  const std::size_t T = static_cast<std::size_t>(std::max(0, c.sweep.trials));
  std::vector<double> residual(T, 0.0), rescale(T, 0.0);
  std::vector<char> certified(T, 1);
  const int r_hi = std::min(8, std::max(2, diam / 4));
  const RatioFit f = run_ratio_sweep(c.sweep, [&](Rng& rng, int trial) {
    const Ball b = random_ball(c.g, rng, 2, r_hi);
    const VertexFunction fn = random_mean_zero_on_ball(c.g, rng, b);
    const HardyDecomposition d = hardy_atomic_decomposition(c.op, c.p, fn, 2.0, M, c.D, K);
    const auto slot = static_cast<std::size_t>(trial - c.sweep.first);
    residual[slot] = d.relative_residual;
    rescale[slot] = d.rescale;
    certified[slot] = d.certificates_ok;
    return d.hardy_norm > 0.0 ? d.aggregate / d.hardy_norm : -1.0;
  });
  const double worst_res = T ? *std::max_element(residual.begin(), residual.end()) : 0.0;
  const double worst_rescale = T ? *std::max_element(rescale.begin(), rescale.end()) : 0.0;
  const bool all_cert = std::all_of(certified.begin(), certified.end(), [](char v) { return v != 0; });
  r.hypotheses = {{"r", 2.0}, {"M", M}, {"D", c.D}, {"levels", K}};
  r.constants = fit_json(f);
  r.constants["relative_residual"] = num(worst_res);
  r.constants["rescale"] = num(worst_rescale);
  r.constants["certificates_ok"] = all_cert;
  r.worst = worst_json(f);
  r.rule = "L2 residual within tolerance, every certificate verified, fitted C finite";
  r.pass = f.trials > 0 && std::isfinite(f.fitted_C) && worst_res <= c.cfg.tol.residual && all_cert;
  return r;
}

Record check_thm_14(const Context& c) {
  const int M = atom_order(c.D, c.p);
  const double eps = c.D / c.p.p_minus() + 0.5;
  MolecularSynthesisReport last;
  Record r = stability_record(c, [&](int K) {
    last = verify_molecular_synthesis(c.op, c.p, 2.0, M, eps, c.D, 16, c.sweep, K);
    return last.fit;
  });
  r.hypotheses = {{"q", 2.0}, {"M", M}, {"eps", eps}, {"D", c.D}, {"family_size", 16}};
  r.constants["max_rescale"] = num(last.max_rescale);
  r.constants["molecules_certified"] = last.all_certified;
  r.pass = r.pass && last.all_certified;
  return r;
}

Record check_prop_equal(const Context& c) {
  EqualReport lastK, last2K;
  Record r;
  const int K = c.K();
  lastK = verify_equal_lebesgue(c.op, c.p, c.sweep, K);
  last2K = verify_equal_lebesgue(c.op, c.p, c.sweep, 2 * K);
  r.hypotheses = {{"p_minus", c.p.p_minus()}};
  r.constants = {{"forward", fit_json(lastK.forward)},
                 {"backward", fit_json(lastK.backward)},
                 {"forward_2K", num(last2K.forward.fitted_C)},
                 {"backward_2K", num(last2K.backward.fitted_C)},
                 {"K", K}};
  r.worst = {{"forward", worst_json(lastK.forward)}, {"backward", worst_json(lastK.backward)}};
  r.rule = "forward and backward constants at K and 2K finite and within the stability factor";
  const double s = c.cfg.tol.stability;
  r.pass = lastK.forward.trials > 0 && level_stable(lastK.forward.fitted_C, last2K.forward.fitted_C, s) &&
           level_stable(lastK.backward.fitted_C, last2K.backward.fitted_C, s);
  return r;
}

Record check_prop_sl(const Context& c) {
  if (!c.p.is_constant()) throw PreconditionError("prop-sl runs on a constant exponent q");
  const double q = c.p.p_minus();
  VertexFunction w(c.g.size(), 1.0);
  if (!c.cfg.weight.empty()) w = load_vertex_function(c.cfg.weight, c.g.size());
  WeightedSLReport last;
  Record r = stability_record(c, [&](int K) {
    last = verify_weighted_SL(c.op, w, q, c.sweep, K);
    return last.fit;
  });
  r.hypotheses = {{"q", q}, {"A_q", num(last.Aq)}, {"weight", c.cfg.weight.empty() ? "1" : c.cfg.weight}};
  r.constants["domination_r1.5"] = num(last.domination_15.fitted_C);
  r.constants["domination_r2"] = num(last.domination_2.fitted_C);
  return r;
}

Record check_prop_mplus(const Context& c) {
  const int M = atom_order(c.D, c.p);
  Record r = stability_record(c, [&](int K) { return verify_mplus_bound(c.op, c.p, M, c.sweep, K); });
  r.hypotheses = {{"M", M}, {"D", c.D}};
  return r;
}

Record check_prop_simple_atom(const Context& c) {
  const int diam = c.g.diameter();
  std::vector<int> radii;
  for (int s = 1; s <= std::max(1, diam / 2); s *= 2) radii.push_back(s);
  const PoincareReport pc = check_poincare(c.g, radii, {}, 4, c.sweep.seed);
  const HolderFit hf = fit_holder_regularity(c.op, std::min(64, std::max(4, diam * diam)));
  if (!hf.ok) throw PreconditionError("prop-simple-atom: no Holder exponent with a bounded constant");
  const SimpleAtomHypotheses hyp{pc.C, c.D, hf.h};
  Record r = stability_record(c, [&](int K) { return verify_simple_atom_bound(c.op, c.p, hyp, 8, c.sweep, K); });
  r.hypotheses = {{"poincare_C", num(pc.C)}, {"D", c.D}, {"h", hf.h}, {"family_size", 8}};
  return r;
}

Record check_prop_g(const Context& c) {
  const int M = atom_order(c.D, c.p);
  Record r = stability_record(c, [&](int K) { return verify_GN_hardy(c.op, c.p, 1, M, c.sweep, K); });
  r.hypotheses = {{"N", 1}, {"M", M}};
  return r;
}

Record check_prop_multiplier(const Context& c) {
  const MultiplierSpec spec = MultiplierSpec::parse(c.cfg.multiplier);
  const int M = atom_order(c.D, c.p);
  const double s = 2.0 * c.D / c.p.p_minus() + 0.5;
  const RsEstimate Rs = estimate_Rs(spec, s, default_t_grid(), 201);
  MultiplierHardyReport last;
  Record r = stability_record(c, [&](int K) {
    last = verify_multiplier_hardy(c.spectral(), c.p, spec, s, c.D, Rs.value, M, c.sweep, K);
    return last.fit;
  });
  r.hypotheses = {{"multiplier", spec.name}, {"s", s}, {"R_s", num(Rs.value)}, {"M", M}};
  r.constants["best_eps"] = num(last.best_eps);
  r.constants["molecule_rescale"] = num(last.rescale);
  r.constants["molecule_certified"] = last.molecule_certified;
  r.pass = r.pass && last.molecule_certified;
  return r;
}

Record check_prop_riesz(const Context& c) {
  const int M = atom_order(c.D, c.p);
  Record r =
      stability_record(c, [&](int K) { return verify_riesz_hardy(c.spectral(), c.p, M, c.D, c.sweep, K); });
  r.hypotheses = {{"M", M}, {"D", c.D}};
  return r;
}

int heat_horizon(const Context& c) {
  const int diam = c.g.diameter();
  return c.cfg.levels > 0 ? c.cfg.levels : std::min(256, std::max(4, diam * diam));
}

json gaussian_json(const GaussianFit& f) {
  return {{"C", num(f.C)}, {"c", num(f.c)}, {"k", f.k}, {"horizon", f.horizon}, {"max_violation", num(f.max_violation)}};
}

Record check_hyp_ue(const Context& c) {
  Record r;
  const GaussianFit f = fit_gaussian_upper(c.op, heat_horizon(c));
  const DeltaAlphaResult da = check_delta_alpha(c.g);
  r.hypotheses = {{"delta_alpha", da.ok}, {"alpha", da.alpha}};
  r.constants = gaussian_json(f);
  r.worst = {{"x", f.worst_x}, {"y", f.worst_y}, {"n", f.worst_n}};
  r.rule = "finite (C, c) with no violation";
  r.pass = finite_positive(f.C) && finite_positive(f.c) && f.max_violation <= 0.0;
  return r;
}

Record check_hyp_compuesto(const Context& c) {
  Record r;
  r.rule = "finite (C, c) with no violation for k = 1, 2";
  r.pass = true;
  json fits = json::array();
  for (int k = 1; k <= 2; ++k) {
    const GaussianFit f = fit_gaussian(c.op, heat_horizon(c), k);
    fits.push_back(gaussian_json(f));
    r.worst["k" + std::to_string(k)] = {{"x", f.worst_x}, {"y", f.worst_y}, {"n", f.worst_n}};
    r.pass = r.pass && finite_positive(f.C) && finite_positive(f.c) && f.max_violation <= 0.0;
  }
  r.constants = {{"fits", fits}};
  return r;
}

Record check_hyp_poincare(const Context& c) {
  Record r;
  std::vector<int> radii;
  for (int s = 1; s <= std::max(1, c.g.diameter() / 2); s *= 2) radii.push_back(s);
  const PoincareReport pc = check_poincare(c.g, radii, {}, 4, c.sweep.seed);
  r.hypotheses = {{"radii", radii}};
  r.constants = {{"C", num(pc.C)}, {"balls", pc.balls}};
  r.worst = {{"center", pc.worst_center}, {"radius", pc.worst_radius}};
  r.rule = "finite Poincare constant";
  r.pass = finite_positive(pc.C);
  return r;
}

using CheckFn = Record (*)(const Context&);

const std::vector<std::pair<std::string, CheckFn>>& registry() {
  static const std::vector<std::pair<std::string, CheckFn>> r = {
      {"theorem-a", check_theorem_a},
      {"lemma-2.1", check_lemma_21},
      {"lemma-2.2", check_lemma_22},
      {"lemma-2.3", check_lemma_23},
      {"lemma-2.4", check_lemma_24},
      {"thm-1.1", check_thm_11},
      {"thm-1.2a", check_thm_12a},
      {"thm-1.2b", check_thm_12b},
      {"thm-1.4", check_thm_14},
      {"prop-equal", check_prop_equal},
      {"prop-sl", check_prop_sl},
      {"prop-m+", check_prop_mplus},
      {"prop-simple-atom", check_prop_simple_atom},
      {"prop-g", check_prop_g},
      {"prop-multiplier", check_prop_multiplier},
      {"prop-riesz", check_prop_riesz},
      {"hyp-ue", check_hyp_ue},
      {"hyp-compuesto", check_hyp_compuesto},
      {"hyp-poincare", check_hyp_poincare},
  };
  return r;
}

std::vector<std::string> expand_checks(const std::vector<std::string>& raw) {
  std::vector<std::string> out;
  for (const auto& item : raw) {
    for (const auto& name : split(item, ',')) {
      if (name.empty()) continue;
      if (name == "all") {
        for (const auto& n : check_names()) out.push_back(n);
        continue;
      }
      const auto& names = check_names();
      if (std::find(names.begin(), names.end(), name) == names.end()) {
        throw std::invalid_argument("unknown check `" + name + "`");
      }
      out.push_back(name);
    }
  }
  if (out.empty()) throw std::invalid_argument("no checks selected");
  return out;
}

BoundaryMode boundary_from(const std::string& s) {
  if (s == "torus") return BoundaryMode::Torus;
  if (s == "reflect") return BoundaryMode::Reflecting;
  if (s == "open") return BoundaryMode::None;
  throw std::invalid_argument("unknown boundary `" + s + "`");
}

}  // namespace

// ---- graphs and exponents -------------------------------------------------------

BuiltGraph build_graph(const std::string& spec) {
  const auto parts = split(spec, ':');
  BuiltGraph out;
  out.description = spec;
  if (parts.empty()) throw std::invalid_argument("empty graph spec");
  const std::string& kind = parts[0];
  if (kind == "lattice") {
    if (parts.size() < 3 || parts.size() > 5) throw std::invalid_argument("lattice:dim:side[:laziness[:boundary]]");
    const int dim = to_int(parts[1], "lattice dimension");
    const int side = to_int(parts[2], "lattice side");
    const double lazy = parts.size() > 3 ? to_number(parts[3], "laziness") : 1.0;
    const BoundaryMode mode = parts.size() > 4 ? boundary_from(parts[4]) : BoundaryMode::Torus;
    out.graph = std::make_unique<WeightedGraph>(build_lattice(dim, side, lazy, mode));
    out.D = dim;
    return out;
  }
  if (kind == "twocopies") {
    if (parts.size() != 2) throw std::invalid_argument("twocopies:side");
    out.graph = std::make_unique<WeightedGraph>(build_two_copies(to_int(parts[1], "side")));
    out.D = 2.0;
    return out;
  }
  if (kind == "path") {
    if (parts.size() != 2) throw std::invalid_argument("path:n");
    out.graph = std::make_unique<WeightedGraph>(build_path(to_int(parts[1], "path length"), 1.0));
    out.D = 1.0;
    return out;
  }
  if (kind == "file") {
    if (parts.size() < 2) throw std::invalid_argument("file:path");
    const std::string path = spec.substr(5);
    out.graph = std::make_unique<WeightedGraph>(load_edge_list(path));
    const DoublingReport d = fit_doubling(*out.graph, std::max(1, out.graph->diameter() / 2));
    out.D = std::max(d.fitted_D, 1e-3);
    return out;
  }
  throw std::invalid_argument("unknown graph kind `" + kind + "`");
}

ExponentFunction build_exponent(const WeightedGraph& g, const std::string& spec) {
  const auto parts = split(spec, ':');
  if (parts.empty()) throw std::invalid_argument("empty exponent spec");
  const std::string& kind = parts[0];
  if (kind == "constant") {
    if (parts.size() != 2) throw std::invalid_argument("constant:q");
    const double q = to_number(parts[1], "exponent");
    if (!(q > 0.0 && std::isfinite(q))) throw PreconditionError("exponent must be positive and finite");
    return ExponentFunction::constant(g, q);
  }
  if (kind == "logfamily") {
    if (parts.size() != 4) throw std::invalid_argument("logfamily:a:b:x0");
    const double a = to_number(parts[1], "logfamily a");
    const double b = to_number(parts[2], "logfamily b");
    const int x0 = to_int(parts[3], "logfamily x0");
    if (x0 < 0 || static_cast<std::size_t>(x0) >= g.size()) throw PreconditionError("logfamily x0 out of range");
    if (!(a + std::min(0.0, b) > 0.0)) throw PreconditionError("logfamily exponent must stay positive");
    return ExponentFunction::log_family(g, a, b, static_cast<VertexId>(x0));
  }
  if (kind == "file") {
    if (parts.size() < 2) throw std::invalid_argument("file:path");
    return load_exponent(g, spec.substr(5));
  }
  throw std::invalid_argument("unknown exponent kind `" + kind + "`");
}

const std::vector<std::string>& check_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& [name, fn] : registry()) n.push_back(name);
    return n;
  }();
  return names;
}

Tolerances parse_tolerances(const std::vector<std::string>& items) {
  Tolerances t;
  for (const auto& item : items) {
    for (const auto& kv : split(item, ',')) {
      if (kv.empty()) continue;
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw std::invalid_argument("tolerance `" + kv + "` is not key=value");
      const std::string key = kv.substr(0, eq);
      const double v = to_number(kv.substr(eq + 1), "tolerance " + key);
      if (!(v > 0.0)) throw std::invalid_argument("tolerance " + key + " must be > 0");
      if (key == "stability") t.stability = v;
      else if (key == "residual") t.residual = v;
      else if (key == "reconstruction") t.reconstruction = v;
      else if (key == "rescale") t.rescale = v;
      else throw std::invalid_argument("unknown tolerance `" + key + "`");
    }
  }
  return t;
}

// ---- verify ---------------------------------------------------------------------

VerifyResult run_verify(const RunConfig& config) {
  const std::vector<std::string> checks = expand_checks(config.checks);
  if (config.trials < 1) throw std::invalid_argument("--trials must be >= 1");
  const BuiltGraph bg = build_graph(config.graph);
  const WeightedGraph& g = *bg.graph;
  const MarkovOperator op(g);
  const ExponentFunction p = build_exponent(g, config.p);
  const Context ctx(config, g, op, p, bg.D, Sweep{config.seed, config.trials, config.first});

  VerifyResult out;
  json& rep = out.report;
  rep["schema"] = kSchema;
  rep["config"] = {{"graph", config.graph},
                   {"p", config.p},
                   {"checks", checks},
                   {"trials", config.trials},
                   {"seed", config.seed},
                   {"first", config.first},
                   {"levels", config.levels},
                   {"multiplier", config.multiplier},
                   {"weight", config.weight},
                   {"tolerances",
                    {{"stability", config.tol.stability},
                     {"residual", config.tol.residual},
                     {"reconstruction", config.tol.reconstruction},
                     {"rescale", config.tol.rescale}}}};
  rep["graph"] = {{"vertices", g.size()}, {"diameter", g.diameter()}, {"D", bg.D}};
  rep["exponent"] = {{"description", p.description()}, {"p_minus", p.p_minus()}, {"p_plus", p.p_plus()}};
  rep["versions"] = {{"graphhardy", kVersion},
                     {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                   std::to_string(EIGEN_MINOR_VERSION)}};
  json records = json::array();
  out.all_pass = true;
  for (const auto& name : checks) {
    const auto it = std::find_if(registry().begin(), registry().end(), [&](const auto& e) { return e.first == name; });
    const Record r = it->second(ctx);
    records.push_back({{"name", name},
                       {"theorem", name},
                       {"fitted_C", r.constants.contains("C") ? r.constants["C"] : json(nullptr)},
                       {"trials", config.trials},
                       {"worst_input_seed", config.seed},
                       {"hypotheses", r.hypotheses},
                       {"constants", r.constants},
                       {"worst_case", r.worst},
                       {"rule", r.rule},
                       {"pass", r.pass}});
    out.all_pass = out.all_pass && r.pass;
  }
  rep["checks"] = records;
  rep["pass"] = out.all_pass;
  return out;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

void write_atomic(const std::filesystem::path& path, const std::string& bytes) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << bytes;
    if (!out.flush()) throw std::runtime_error("cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

// ---- decompose ------------------------------------------------------------------

DecomposeSummary run_decompose(const DecomposeConfig& config) {
  const BuiltGraph bg = build_graph(config.graph);
  const WeightedGraph& g = *bg.graph;
  const MarkovOperator op(g);
  const ExponentFunction p = build_exponent(g, config.p);
  if (config.input.empty()) throw std::invalid_argument("decompose needs --input");

  DecomposeSummary out;
  json& j = out.json;
  j["schema"] = kSchema;
  j["config"] = {{"graph", config.graph}, {"p", config.p}, {"input", config.input}, {"tent_input", config.tent_input},
                 {"levels", config.levels}};
  std::ostringstream atoms_csv, values_csv;
  atoms_csv.precision(17);
  values_csv.precision(17);
  json atoms = json::array();

  if (config.tent_input) {
    SparseTent sparse = load_tent(config.input, g.size());
    int K = config.levels;
    for (const auto& e : sparse) K = std::max(K, e.level);
    K = std::max(K, 1);
    const TentFunction F = to_dense(sparse, g.size(), K);
    const TentDecomposition d = tent_atomic_decomposition(g, p, F, 2.0, true);
    atoms_csv << "j,level,center,radius,lambda,global\n";
    values_csv << "j,x,k,value\n";
    for (std::size_t i = 0; i < d.atoms.size(); ++i) {
      const TentAtom& a = d.atoms[i];
      atoms_csv << i << ',' << a.meta.k << ',' << a.meta.ball.center << ',' << a.meta.ball.radius << ','
                << a.meta.lambda << ',' << (a.meta.global ? 1 : 0) << '\n';
      for (const auto& e : a.payload) values_csv << i << ',' << e.y << ',' << e.level << ',' << e.value << '\n';
      atoms.push_back({{"lambda", a.meta.lambda},
                       {"ball", {{"center", a.meta.ball.center}, {"radius", a.meta.ball.radius}}},
                       {"level", a.meta.k},
                       {"payload_ref", "atom_values.csv#" + std::to_string(i)}});
    }
    out.atoms = d.atoms.size();
    out.residual = d.reconstruction_error;
    out.aggregate = d.aggregate;
    j["kind"] = "tent";
    j["summary"] = {{"atoms", out.atoms},
                    {"reconstruction_error", num(out.residual)},
                    {"aggregate", num(out.aggregate)},
                    {"tent_norm", num(d.tent_norm)},
                    {"atom_rescale", num(d.atom_constant)}};
  } else {
    const VertexFunction f = load_vertex_function(config.input, g.size());
    const int M = atom_order(bg.D, p);
    const int diam = g.diameter();
    const int K = config.levels > 0 ? config.levels : 4 * diam * diam;
    const HardyDecomposition d = hardy_atomic_decomposition(op, p, f, 2.0, M, bg.D, K);
    atoms_csv << "j,center,radius,lambda\n";
    values_csv << "j,x,a,b\n";
    for (std::size_t i = 0; i < d.atoms.size(); ++i) {
      const HardyAtomTerm& t = d.atoms[i];
      atoms_csv << i << ',' << t.cert.ball.center << ',' << t.cert.ball.radius << ',' << t.lambda << '\n';
      for (std::size_t x = 0; x < g.size(); ++x) {
        if (t.cert.a[x] != 0.0 || t.cert.b[x] != 0.0) {
          values_csv << i << ',' << x << ',' << t.cert.a[x] << ',' << t.cert.b[x] << '\n';
        }
      }
      atoms.push_back({{"lambda", t.lambda},
                       {"ball", {{"center", t.cert.ball.center}, {"radius", t.cert.ball.radius}}},
                       {"payload_ref", "atom_values.csv#" + std::to_string(i)}});
    }
    out.atoms = d.atoms.size();
    out.residual = d.relative_residual;
    out.aggregate = d.aggregate;
    j["kind"] = "hardy";
    j["summary"] = {{"atoms", out.atoms},
                    {"relative_residual", num(d.atoms.empty() ? 0.0 : d.relative_residual)},
                    {"aggregate", num(out.aggregate)},
                    {"hardy_norm", num(d.hardy_norm)},
                    {"rescale", num(d.rescale)},
                    {"certificates_ok", d.certificates_ok},
                    {"r", 2.0},
                    {"M", M},
                    {"levels", K}};
    if (d.atoms.empty()) out.residual = 0.0;
  }
  j["atoms"] = atoms;
  write_atomic(config.out / "decomposition.json", dump(j));
  write_atomic(config.out / "atoms.csv", atoms_csv.str());
  write_atomic(config.out / "atom_values.csv", values_csv.str());
  return out;
}

// ---- heatmap --------------------------------------------------------------------

json run_heatmap(const HeatmapConfig& config) {
  const BuiltGraph bg = build_graph(config.graph);
  const WeightedGraph& g = *bg.graph;
  const MarkovOperator op(g);
  if (config.horizon < 1) throw std::invalid_argument("--horizon must be >= 1");
  for (VertexId s : config.sources) {
    if (s >= g.size()) throw PreconditionError("heatmap source out of range");
  }
  const GaussianFit fit = fit_gaussian_upper(op, config.horizon, config.sources);
  std::ostringstream csv;
  write_heat_csv(csv, op, fit, config.sources, config.horizon);
  write_atomic(config.out / "heat.csv", csv.str());
  json j = {{"schema", kSchema}, {"graph", config.graph}, {"sources", config.sources}, {"fit", gaussian_json(fit)}};
  write_atomic(config.out / "heat_fit.json", dump(j));
  return j;
}

}  // namespace graphhardy::harness
