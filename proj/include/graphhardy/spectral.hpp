#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "graphhardy/hardy.hpp"
#include "graphhardy/markov.hpp"
#include "graphhardy/types.hpp"
#include "graphhardy/varexp.hpp"

namespace graphhardy {

/// Dense eigendecomposition of L with eigenvectors orthonormal in L^2(mu).
class SpectralDecomposition {
 public:
  static constexpr std::size_t kMaxVertices = 2048;

  explicit SpectralDecomposition(const MarkovOperator& op);

  const MarkovOperator& op() const { return *op_; }
  std::size_t size() const { return static_cast<std::size_t>(lambda_.size()); }
  /// Ascending, in [0, 2].
  const Eigen::VectorXd& eigenvalues() const { return lambda_; }
  double eigenvalue(std::size_t i) const { return lambda_(static_cast<Eigen::Index>(i)); }
  VertexFunction eigenvector(std::size_t i) const;
  /// <f, v_i>_mu for every i.
  Eigen::VectorXd coefficients(const VertexFunction& f) const;
  /// sum_i c_i v_i
  VertexFunction synthesize(const Eigen::VectorXd& c) const;
  /// F(L) f = sum_i F(lambda_i) <f, v_i> v_i
  VertexFunction apply(const std::function<double(double)>& F, const VertexFunction& f) const;
  /// ||E_L([lo, hi)) f||_2
  double projection_norm(const VertexFunction& f, double lo, double hi) const;
  /// Smallest eigenvalue above the kernel threshold.
  double gap() const;
  /// max |1 - lambda| over the nonzero eigenvalues: the contraction rate of P off the constants.
  double contraction() const;

  static constexpr double kKernel = 1e-10;

 private:
  const MarkovOperator* op_;
  Eigen::VectorXd lambda_;
  Eigen::MatrixXd U_;  // orthonormal eigenvectors of D^{-1/2} N D^{-1/2}
  Eigen::VectorXd sqrt_mu_;
};

/// grad f(x) = (1/2 sum_y p(x,y) |f(x) - f(y)|^2)^{1/2}
VertexFunction gradient(const MarkovOperator& op, const VertexFunction& f);

/// Taylor coefficients of (1 - z)^{-1/2}: beta_0 = 1, beta_k = beta_{k-1} (2k-1)/(2k).
std::vector<double> beta_coefficients(int K);

/// K = ceil(log tol / log rho).
int riesz_terms(double rho, double tol);

struct RieszSeries {
  VertexFunction value;    // grad of the partial sum
  VertexFunction partial;  // sum_{k <= K} beta_k P^k f
  int terms = 0;
  /// sqrt(2) ||f||_2 sum_{k > K} beta_k rho^k bounds ||value - R_L f||_2; NaN if rho is unknown.
  double tail_bound = 0.0;
};

/// R_L f via the beta series. rho = contraction rate of P on mean-zero functions (<= 0: unknown).
RieszSeries riesz_transform_series(const MarkovOperator& op, const VertexFunction& f, int K, double rho = 0.0);
/// grad(L^{-1/2} f) through the eigendecomposition.
VertexFunction riesz_transform_spectral(const SpectralDecomposition& sd, const VertexFunction& f);
/// L^{s} f for s in {1/2, -1/2, ...} on mean-zero f (kernel mode dropped for s < 0).
VertexFunction spectral_power(const SpectralDecomposition& sd, double s, const VertexFunction& f);

/// Multiplier F on [0, 2].
struct MultiplierSpec {
  std::string name;
  std::function<double(double)> F;

  /// identity | heat:n | imaginary-power:tau | step | file:path
  static MultiplierSpec parse(const std::string& text);
  /// Piecewise-linear interpolation of (lambda, F(lambda)) samples, constant beyond the ends.
  static MultiplierSpec table(std::string name, std::vector<std::pair<double, double>> samples);
};

VertexFunction spectral_multiplier(const SpectralDecomposition& sd, const MultiplierSpec& spec,
                                   const VertexFunction& f);

/// Smooth cutoff: 1 on (-inf, 1], 0 on [3/2, inf).
double theta_cutoff(double t);
/// psi_l(t) = theta(2^l t) - theta(2^{l+1} t), supported in (2^{-l-1}, 3 2^{-l-1}).
double psi_piece(int ell, double t);
/// Fixed bump on [1/2, 3/2], peak value 1 at lambda = 1.
double eta_bump(double lambda);

/// F_0 = (1 - theta(2 .)) F and F_l = F psi_l, l = 1..ell_max.
std::vector<std::function<double(double)>> dyadic_decomposition(const MultiplierSpec& spec, int ell_max);
/// Pieces 0..ell_max reassemble F exactly on [3 2^{-ell_max-2}, 2].
double dyadic_resolved_from(int ell_max);

struct RsEstimate {
  double value = 0.0;
  double worst_t = 0.0;
};

/// Numerical estimate of sup_t ||eta(lambda) F(t lambda)||_{C^s} over `t_grid` with `x_points`
/// samples of [1/2, 3/2]; derivatives by Richardson-extrapolated central differences.
RsEstimate estimate_Rs(const MultiplierSpec& spec, double s, const std::vector<double>& t_grid, int x_points);
/// t = 2^{i/4} with t <= 4/3, down to 2^{-10}.
std::vector<double> default_t_grid();

struct MultiplierHardyReport {
  RatioFit fit;               // ||S_L F(L) f||_p / ||S_L f||_p
  double best_eps = 0.0;      // largest eps on the grid with rescale <= 100
  double rescale = 0.0;       // molecule rescale at best_eps
  bool molecule_certified = false;
};

MultiplierHardyReport verify_multiplier_hardy(const SpectralDecomposition& sd, const ExponentFunction& p,
                                              const MultiplierSpec& spec, double s, double D, double Rs, int M,
                                              const Sweep& sweep, int K = 0);

/// ||R_L f||_p / ||S_L f||_p over mean-zero functions and Hardy atoms.
RatioFit verify_riesz_hardy(const SpectralDecomposition& sd, const ExponentFunction& p, int M, double D,
                            const Sweep& sweep, int K = 0);

/// ||G_{L,N} f||_p / ||S_L f||_p
RatioFit verify_GN_hardy(const MarkovOperator& op, const ExponentFunction& p, int N, int M, const Sweep& sweep,
                         int K = 0);

struct WeightedSLReport {
  RatioFit fit;  // ||S_L f||_{L^q(w)} / ||f||_{L^q(w)}
  double Aq = 0.0;
  RatioFit domination_15;  // max_x c_r f / (M |f|^r)^{1/r}, r = 1.5
  RatioFit domination_2;   // r = 2
};

/// Rejects w whose A_q constant exceeds Aq_cap.
WeightedSLReport verify_weighted_SL(const MarkovOperator& op, const VertexFunction& w, double q, const Sweep& sweep,
                                    int K = 0, double Aq_cap = 1e6);

}  // namespace graphhardy
