#pragma once

#include <cstddef>
#include <ostream>
#include <span>
#include <utility>
#include <vector>

#include "graphhardy/graph.hpp"
#include "graphhardy/markov.hpp"
#include "graphhardy/types.hpp"
#include "graphhardy/varexp.hpp"

namespace graphhardy {

/// F : Gamma x {1..K} -> R stored level-major.
class TentFunction {
 public:
  TentFunction() = default;
  TentFunction(std::size_t n, int K) : n_(n), K_(K), v_(n * static_cast<std::size_t>(K), 0.0) {}

  std::size_t vertices() const { return n_; }
  int levels() const { return K_; }

  double operator()(VertexId y, int k) const { return v_[index(y, k)]; }
  double& at(VertexId y, int k) { return v_[index(y, k)]; }
  std::span<const double> level(int k) const { return {v_.data() + index(0, k), n_}; }
  std::span<double> level(int k) { return {v_.data() + index(0, k), n_}; }
  bool level_is_zero(int k) const;
  bool is_zero() const;
  void scale(double s) {
    for (double& v : v_) v *= s;
  }

 private:
  std::size_t index(VertexId y, int k) const { return static_cast<std::size_t>(k - 1) * n_ + y; }

  std::size_t n_ = 0;
  int K_ = 0;
  std::vector<double> v_;
};

struct TentEntry {
  VertexId y = 0;
  int level = 1;
  double value = 0.0;
};
/// Sparse tent function; entries are kept sorted by (level, vertex).
using SparseTent = std::vector<TentEntry>;

SparseTent to_sparse(const TentFunction& F);
TentFunction to_dense(const SparseTent& F, std::size_t n, int K);

enum class Normalization {
  VertexCentered,  // mu(B(x,k)) around the cone vertex
  PointCentered,   // mu(B(y,k)) around the integration point
};

/// Which heat power enters level k of the conical square function.
enum class LevelShift {
  Half,          // P^{floor(k/2)}
  HalfMinusOne,  // P^{floor((k-1)/2)}
};

using LevelSet = std::vector<std::pair<VertexId, int>>;

/// {(y,k) : k <= K, d(y,x) < beta k}
LevelSet cone(const WeightedGraph& g, VertexId x, double beta, int K);
/// {(x,k) : k >= 1, d(x_B, x) <= r_B - k}
LevelSet tent(const WeightedGraph& g, const Ball& b);
bool in_tent(const WeightedGraph& g, const Ball& b, VertexId y, int k);

/// (A F)(x) = (sum_{(y,k) : d(y,x) < beta k} |F(y,k)|^2 mu(y) / (k mu(B(c,k))))^{1/2}
/// with c = x (vertex-centered) or c = y (point-centered).
VertexFunction area_functional(const WeightedGraph& g, const TentFunction& F, double beta = 1.0,
                               Normalization norm = Normalization::VertexCentered);
VertexFunction area_functional(const WeightedGraph& g, const SparseTent& F, double beta = 1.0,
                               Normalization norm = Normalization::VertexCentered);

/// ||A F||_{p(.)}
double tent_norm(const WeightedGraph& g, const ExponentFunction& p, const TentFunction& F);

/// F(y,k) = k^M (I-P)^M P^{s(k)} f(y), k = 1..K.
TentFunction conical_tent(const MarkovOperator& op, const VertexFunction& f, int K, int M = 1,
                          LevelShift shift = LevelShift::Half);

/// S_L f: the area functional of conical_tent(op, f, K) with point-centered normalization.
VertexFunction square_function_SL(const MarkovOperator& op, const VertexFunction& f, int K,
                                  Normalization norm = Normalization::PointCentered,
                                  LevelShift shift = LevelShift::Half);

/// G_{L,N} f(x) = (sum_{k=1}^K |k^N L^N P^k f(x)|^2 / k)^{1/2}
VertexFunction square_function_GN(const MarkovOperator& op, const VertexFunction& f, int N, int K);

/// M_+ f(x) = max_{0 <= k <= K} |P^k f(x)|
VertexFunction radial_maximal(const MarkovOperator& op, const VertexFunction& f, int K);

/// ||(sum_j (|lambda_j| chi_{B_j} / ||chi_{B_j}||_p)^frak_p)^{1/frak_p}||_p
double aggregate_A(const WeightedGraph& g, const ExponentFunction& p, const std::vector<WeightedBall>& terms);

/// ||S_L f||_{p(.)}
double hardy_norm(const MarkovOperator& op, const ExponentFunction& p, const VertexFunction& f, int K);

/// Default level cap: (diameter / 2)^2.
int default_level_cap(const WeightedGraph& g);

/// c_r(f)(x) = sup_{B containing x} (avg_{z in B} T_{r_B}(z)^{r/2})^{1/r}, where
/// T_R(z) = sum_{k <= R} sum_{d(y,z) < k} |k L P^{floor(k/2)} f(y)|^2 mu(y) / (k mu(B(y,k))).
VertexFunction conical_local_maximal(const MarkovOperator& op, const VertexFunction& f, double r, int R_max);

/// CSV `x k value` of the nonzero entries.
void write_tent_csv(std::ostream& out, const SparseTent& F);

}  // namespace graphhardy
