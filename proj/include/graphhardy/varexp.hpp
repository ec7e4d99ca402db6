#pragma once

#include <optional>
#include <string>
#include <vector>

#include "graphhardy/graph.hpp"
#include "graphhardy/types.hpp"

namespace graphhardy {

/// Reciprocal log-Holder constants of an exponent on a finite graph:
///   |1/p(x) - 1/p(y)| <= C_local / log(e + 1/d(x,y))
///   |1/p(x) - a|      <= C_decay / log(e + d(x,x0))
struct LogHolderConstants {
  double C_local = 0.0;
  double C_decay = 0.0;
  double a = 0.0;
  VertexId x0 = 0;
};

LogHolderConstants check_log_holder(const WeightedGraph& g, const std::vector<double>& p, VertexId x0);

/// Variable exponent p : Gamma -> (0, inf).
class ExponentFunction {
 public:
  explicit ExponentFunction(std::vector<double> values);

  static ExponentFunction constant(const WeightedGraph& g, double q);
  /// p(x) = a + b / log(e + d(x, x0)); log-Holder constants are computed.
  static ExponentFunction log_family(const WeightedGraph& g, double a, double b, VertexId x0);

  double operator()(VertexId x) const { return p_[x]; }
  const std::vector<double>& values() const { return p_; }
  std::size_t size() const { return p_.size(); }
  double p_minus() const { return p_minus_; }
  double p_plus() const { return p_plus_; }
  /// min{1, p_-}
  double frak_p() const { return p_minus_ < 1.0 ? p_minus_ : 1.0; }
  bool is_constant() const { return p_minus_ == p_plus_; }
  const std::optional<LogHolderConstants>& log_holder() const { return log_holder_; }
  void set_log_holder(const LogHolderConstants& c) { log_holder_ = c; }
  /// Short textual description used in reports.
  const std::string& description() const { return description_; }
  void set_description(std::string d) { description_ = std::move(d); }

 private:
  std::vector<double> p_;
  double p_minus_ = 0.0;
  double p_plus_ = 0.0;
  std::optional<LogHolderConstants> log_holder_;
  std::string description_;
};

/// rho(f) = sum_x |f(x)|^{p(x)} mu(x)
double modular(const WeightedGraph& g, const ExponentFunction& p, const VertexFunction& f);

/// inf{lambda > 0 : rho(f / lambda) <= 1} by bisection in log(lambda).
/// The returned value always satisfies rho(f / norm) <= 1.
double luxemburg_norm(const WeightedGraph& g, const ExponentFunction& p, const VertexFunction& f);

/// ||chi_B||_{p(.)}
double ball_norm(const WeightedGraph& g, const ExponentFunction& p, const Ball& b);

/// Weighted constant-exponent norm (sum |f|^q w mu)^{1/q}; w may be empty for w = 1.
double lq_norm(const WeightedGraph& g, double q, const VertexFunction& f, const VertexFunction& w = {});

/// Centered maximal function sup_{1 <= r <= r_max} average of |f| over B(x, r).
/// r_max = 0 means every radius up to the eccentricity plus one.
VertexFunction hl_maximal(const WeightedGraph& g, const VertexFunction& f, int r_max = 0);

/// Empirical operator norm of M on L^{p(.)}.
RatioFit verify_theorem_A(const WeightedGraph& g, const ExponentFunction& p, const Sweep& sweep);

/// Upper bound sqrt(sum_r ||A_r||^2) for M on L^2(mu), A_r the ball-averaging operators.
double maximal_l2_bound(const WeightedGraph& g);

/// ||(sum_j (M f_j)^q)^{1/q}||_p / ||(sum_j |f_j|^q)^{1/q}||_p on families of `family_size` functions.
RatioFit verify_fefferman_stein(const WeightedGraph& g, const ExponentFunction& p, double q, int family_size,
                                const Sweep& sweep);
double fefferman_stein_ratio(const WeightedGraph& g, const ExponentFunction& p, double q,
                             const std::vector<VertexFunction>& family);

/// One block lambda_j a_j supported in B_j.
struct Block {
  double lambda = 0.0;
  VertexFunction a;
  Ball ball;
};

/// ||(sum |lambda_j a_j|^frak_p)^{1/frak_p}||_p / aggregate. q = kInf allowed.
/// Throws PreconditionError naming the first block that violates support or size.
double lemma_sum_ratio(const WeightedGraph& g, const ExponentFunction& p, double q, const std::vector<Block>& family);
RatioFit verify_lemma_sum(const WeightedGraph& g, const ExponentFunction& p, double q, int family_size,
                          const Sweep& sweep);

struct BallRatioReport {
  double C_growth = 0.0;     // ||chi_{B(x,br)}|| / ||chi_{B(x,r)}|| / b^{D/w}
  double C_shrink = 0.0;     // ||chi_{B(x,r)}|| / ||chi_{B(x,br)}|| / (mu ratio)^{1/q}
  double C_aggregate = 0.0;  // A({lambda},{B(x, b r)}) / (b^{D/w} A({lambda},{B}))
  VertexId worst_x = 0;
  int worst_r = 1;
  double worst_beta = 1.0;
};

/// Grid over every center, r in [1, r_max] and beta in `betas`, plus `sweep`
/// random families for the dilated aggregate bound.
BallRatioReport verify_ball_ratios(const WeightedGraph& g, const ExponentFunction& p, double w, double q, double D,
                                   int r_max, const std::vector<double>& betas, const Sweep& sweep);

/// A_r constant (r > 1) or A_1 constant (r = 1) over every ball of the graph.
double check_muckenhoupt(const WeightedGraph& g, const VertexFunction& w, double r);

/// Largest ||f+g||^frak_p / (||f||^frak_p + ||g||^frak_p) on random pairs.
RatioFit fit_quasi_triangle(const WeightedGraph& g, const ExponentFunction& p, const Sweep& sweep);

}  // namespace graphhardy
