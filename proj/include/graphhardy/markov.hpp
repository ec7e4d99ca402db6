#pragma once

#include <cstddef>
#include <ostream>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "graphhardy/graph.hpp"
#include "graphhardy/types.hpp"

namespace graphhardy {

/// P f(x) = sum_y p(x,y) f(y) with p = nu / mu, and L = I - P.
/// Holds a reference to the graph, which must outlive the operator.
class MarkovOperator {
 public:
  explicit MarkovOperator(const WeightedGraph& g);

  const WeightedGraph& graph() const { return *g_; }
  std::size_t size() const { return g_->size(); }

  double transition(VertexId x, VertexId y) const;
  std::span<const VertexId> row_columns(VertexId x) const { return g_->neighbors(x); }
  std::span<const double> row_values(VertexId x) const {
    return {p_.data() + row_[x], p_.data() + row_[x + 1]};
  }

  void apply_P(std::span<const double> f, std::span<double> out) const;
  void apply_L(std::span<const double> f, std::span<double> out) const;

  VertexFunction apply_P(const VertexFunction& f) const;
  VertexFunction apply_L(const VertexFunction& f) const;
  VertexFunction apply_P_power(int n, VertexFunction f) const;
  /// (I - P)^k f; k = 0 is the identity.
  VertexFunction apply_L_power(int k, VertexFunction f) const;

  /// <f, g> in L^2(mu).
  double inner(const VertexFunction& f, const VertexFunction& g) const;
  double norm2(const VertexFunction& f) const;
  /// mu-weighted mean.
  double mean(const VertexFunction& f) const;

 private:
  const WeightedGraph* g_;
  std::vector<std::size_t> row_;
  std::vector<double> p_;
};

/// Dense transition matrix; used as an oracle on small graphs.
Eigen::MatrixXd dense_transition(const MarkovOperator& op);

/// Smallest eigenvalue of P (via the symmetric conjugate D^{1/2} P D^{-1/2}).
double min_eigenvalue_P(const MarkovOperator& op);

/// Rows p_n(x, .) for n = 1..horizon.
struct HeatKernelTable {
  VertexId x = 0;
  int horizon = 0;
  std::vector<VertexFunction> rows;  // rows[n-1] = p_n(x, .)
};

VertexFunction heat_kernel_row(const MarkovOperator& op, VertexId x, int n);
HeatKernelTable heat_kernel_table(const MarkovOperator& op, VertexId x, int horizon);

/// Row x of the kernel of (I-P)^k P^n.
VertexFunction composite_kernel_row(const MarkovOperator& op, VertexId x, int n, int k);

/// |p~_{n,k}(x,y)| <= C mu(y) / (n^k mu(B(x, ceil(sqrt n)))) exp(-c d^2 / n).
/// k = 0 is the plain heat kernel bound.
struct GaussianFit {
  double C = 0.0;
  double c = 0.0;
  int k = 0;
  int horizon = 0;
  double max_violation = 0.0;
  VertexId worst_x = 0;
  VertexId worst_y = 0;
  int worst_n = 0;
};

/// Grid search over c in {2^-j : j = 0..6}; for each c the least C with no
/// violation, then the pair minimizing C e^{1/c}. Empty `sources` means
/// every vertex when the graph has <= 512 vertices, else 64 seeded samples.
GaussianFit fit_gaussian(const MarkovOperator& op, int horizon, int k = 0, std::vector<VertexId> sources = {});
GaussianFit fit_gaussian_upper(const MarkovOperator& op, int horizon, std::vector<VertexId> sources = {});

struct HolderFit {
  bool ok = false;
  double C3 = 0.0;
  double c3 = 0.0;
  double h = 0.0;
  /// Worst tuple (x, y0, y, n) for the reported h, or for h = 0.1 on failure.
  VertexId x = 0, y0 = 0, y = 0;
  int n = 0;
};

/// |p_n(y,x) - p_n(y0,x)| <= C3 (d(y,y0)/sqrt n)^h mu(x)/mu(B(x,sqrt n)) e^{-c3 d(x,y0)^2/n}
/// over d(y0,y) <= sqrt n. Picks the largest h in {1.0, 0.9, ..., 0.1} whose
/// best C3 is <= C_cap.
HolderFit fit_holder_regularity(const MarkovOperator& op, int horizon, double C_cap = 100.0,
                                std::vector<VertexId> sources = {});

/// CSV `n,x,y,p_n,bound,slack` for rows 1..horizon of `sources` under `fit`.
void write_heat_csv(std::ostream& out, const MarkovOperator& op, const GaussianFit& fit,
                    const std::vector<VertexId>& sources, int horizon);

}  // namespace graphhardy
