#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace graphhardy {

using VertexId = std::uint32_t;
using VertexFunction = std::vector<double>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Raised when an input violates a hypothesis of the operation (bad exponent
/// range, missing loop, graph too large for the dense path, ...). The CLI maps
/// it to exit code 2.
class PreconditionError : public std::invalid_argument {
 public:
  explicit PreconditionError(const std::string& what) : std::invalid_argument(what) {}
};

/// Ball B(center, radius) = {y : d(center, y) < radius}; radius is an integer >= 1.
struct Ball {
  VertexId center = 0;
  int radius = 1;

  friend bool operator==(const Ball&, const Ball&) = default;
};

/// One term (lambda_j, B_j) of an atomic series.
struct WeightedBall {
  double lambda = 0.0;
  Ball ball;
};

/// Seeded sweep over trial indices [first, first + trials).
struct Sweep {
  std::uint64_t seed = 1;
  int trials = 10;
  int first = 0;
};

/// Outcome of a ratio sweep: the empirical constant is the largest observed ratio.
struct RatioFit {
  double fitted_C = 0.0;
  double min_ratio = kInf;
  int trials = 0;
  int worst_trial = -1;
  std::uint64_t seed = 0;

  void observe(double ratio, int trial) {
    if (trials == 0 || ratio > fitted_C) {
      fitted_C = ratio;
      worst_trial = trial;
    }
    if (ratio < min_ratio) min_ratio = ratio;
    ++trials;
  }
};

}  // namespace graphhardy
