#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "graphhardy/graph.hpp"
#include "graphhardy/markov.hpp"
#include "graphhardy/rng.hpp"
#include "graphhardy/tent.hpp"
#include "graphhardy/types.hpp"
#include "graphhardy/varexp.hpp"

namespace graphhardy {

// ---- coefficients of the representation formula ----------------------------

using Coefficient = unsigned __int128;

/// c_{k,N} from c_{k,1} = 1 and c_{k,N+1} = sum_{j <= k} c_{j,N}, exact.
/// Throws std::overflow_error if a value leaves 128 bits.
Coefficient coefficients_c(int k, int N);
/// Row c_{0,N}, ..., c_{K,N}.
std::vector<Coefficient> coefficient_row(int N, int K);
double to_double(Coefficient c);

// ---- stopping sets and Whitney covers ---------------------------------------

struct DensitySet {
  std::vector<bool> members;
  /// Ball-scan and maximal-function characterizations produced the same set.
  bool characterizations_agree = true;
};

/// F*_gamma = {x : mu(F cap B(x,r)) / mu(B(x,r)) >= gamma for every r}.
DensitySet global_density_set(const WeightedGraph& g, const std::vector<bool>& F, double gamma);

struct WhitneyBall {
  VertexId center = 0;
  double radius = 0.0;  // d(center, complement) / 10
  std::vector<std::pair<VertexId, double>> phi;
};

struct WhitneyCover {
  std::vector<WhitneyBall> balls;
  /// Smallest C with: every B(x_n, 5 r_n) meets <= C others and phi_n >= 1/C on B(x_n, r_n).
  double overlap = 0.0;
};

/// Greedy cover of Omega (nonempty, proper subset) by balls of radius
/// d(x, Omega^c)/10 with pairwise disjoint quarter balls, and a partition of
/// unity from normalized hat profiles supported in the doubled balls.
WhitneyCover whitney_cover(const WeightedGraph& g, const std::vector<bool>& omega);

struct WhitneyCheck {
  bool covers = false;
  bool quarter_disjoint = false;
  bool bounded_overlap = false;
  bool support_and_lower_bound = false;
  bool partition = false;
  double partition_error = 0.0;
  bool ok() const { return covers && quarter_disjoint && bounded_overlap && support_and_lower_bound && partition; }
};

/// Exhaustive recheck of the five cover properties.
WhitneyCheck verify_whitney(const WeightedGraph& g, const std::vector<bool>& omega, const WhitneyCover& cover);

/// Multi-source BFS distance to the complement of omega; `kFar` when omega = Gamma.
inline constexpr int kFar = 1 << 28;
std::vector<int> distance_to_complement(const WeightedGraph& g, const std::vector<bool>& omega);

// ---- tent-space atomic decomposition ----------------------------------------

/// Ball dilation C_eta = 2 + 12 / (1 - eta) at eta = 1/2.
inline constexpr double kCEta = 26.0;

struct AtomMeta {
  int k = 0;       // stopping level: 2^k
  int j = 0;       // index inside the Whitney cover of Omega_k
  Ball ball;       // B(x_j, C_eta r_j), or the global ball when Omega_k = Gamma
  double lambda = 0.0;
  bool global = false;
};

/// Stopping sets O_k = {A F > 2^k}, Omega_k = {M chi_{O_k} > 1/2}, their
/// Whitney covers and the atom list. Payloads are materialized on demand.
class TentDecompositionPlan {
 public:
  TentDecompositionPlan(const WeightedGraph& g, const ExponentFunction& p, const TentFunction& F);

  const std::vector<AtomMeta>& atoms() const { return atoms_; }
  /// a = F phi_j (chi_{T(Omega_k)} - chi_{T(Omega_{k+1})}) / lambda, sorted by (level, vertex).
  SparseTent payload(std::size_t i) const;

  int k_min() const { return k_min_; }
  int k_max() const { return k_max_; }
  const VertexFunction& area() const { return area_; }
  /// Largest excess of sum_k 2^{k frak_p} chi_{O_k} over (1 - 2^{-frak_p})^{-1} (A F)^frak_p (<= 0 when it holds).
  double stopping_bound_excess() const { return stopping_excess_; }
  double max_overlap() const { return max_overlap_; }
  bool covers_ok() const { return covers_ok_; }

 private:
  struct Level {
    int k = 0;
    std::vector<int> delta;  // distance to Omega_k^c
    WhitneyCover cover;
  };

  const WeightedGraph* g_;
  const TentFunction* F_;
  int k_min_ = 0;
  int k_max_ = -1;
  VertexFunction area_;
  std::vector<Level> levels_;  // k_min .. k_max + 1
  std::vector<AtomMeta> atoms_;
  double stopping_excess_ = 0.0;
  double max_overlap_ = 0.0;
  bool covers_ok_ = true;
};

struct TentAtom {
  AtomMeta meta;
  SparseTent payload;
  double size = 0.0;     // ||a||_{T_2^q}
  double allowed = 0.0;  // mu(B)^{1/q} / ||chi_B||_p
  bool in_tent = true;
};

struct TentDecomposition {
  std::vector<TentAtom> atoms;
  int k_min = 0;
  int k_max = -1;
  double reconstruction_error = 0.0;  // max |F - sum lambda a|
  double atom_constant = 0.0;         // max size / allowed
  double aggregate = 0.0;             // A({lambda}, {B})
  double tent_norm = 0.0;             // ||F||_{T_2^p}
  double stopping_bound_excess = 0.0;
  double overlap = 0.0;
  bool supports_ok = true;
  bool covers_ok = true;
};

/// Atoms with an identically zero payload are omitted.
TentDecomposition tent_atomic_decomposition(const WeightedGraph& g, const ExponentFunction& p, const TentFunction& F,
                                            double q, bool keep_payloads = true);

/// ||a||_{T_2^q} for constant exponent q.
double tent_lq_norm(const WeightedGraph& g, const SparseTent& a, double q);

/// Random (T_2^p, q)-atom on T(B) with size theta * mu(B)^{1/q} / ||chi_B||_p, theta in [1/2, 1].
TentAtom random_tent_atom(const WeightedGraph& g, const ExponentFunction& p, const Ball& b, double q, Rng& rng);

// ---- reconstruction operator --------------------------------------------------

/// Pi_M(F) = sum_{k>=0} c_{k,M+1}/(k+1) L^M P^{floor(k/2)} F(., k+1) together with
/// the witness powers L^j b, j = 0..M, for b = sum_k c_{k,M+1}/(k+1) P^{floor(k/2)} F(., k+1).
struct PiResult {
  VertexFunction value;
  std::vector<VertexFunction> witness_powers;  // empty unless requested
};

PiResult pi_M_with_witness(const MarkovOperator& op, const SparseTent& F, int M, bool witness);
VertexFunction pi_M(const MarkovOperator& op, const SparseTent& F, int M);
VertexFunction pi_M(const MarkovOperator& op, const TentFunction& F, int M);

/// ||f - sum_{k<=K} c_{k,M} L^M P^k f||_2 at each checkpoint K (ascending).
std::vector<double> verify_representation(const MarkovOperator& op, const VertexFunction& f, int M,
                                          const std::vector<int>& checkpoints);

}  // namespace graphhardy
