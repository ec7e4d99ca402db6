#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "graphhardy/rng.hpp"
#include "graphhardy/types.hpp"

namespace graphhardy {

/// Runs `trial_ratio(rng, trial)` for every trial of the sweep on its own
/// stream and reduces serially in trial order. Negative ratios mark
/// degenerate trials and are skipped.
template <class Fn>
RatioFit run_ratio_sweep(const Sweep& sweep, Fn&& trial_ratio) {
  std::vector<double> ratio(static_cast<std::size_t>(std::max(0, sweep.trials)), -1.0);
  const Rng root(sweep.seed);
#pragma omp parallel for schedule(dynamic, 1)
  for (int t = 0; t < sweep.trials; ++t) {
    Rng rng = root.split(static_cast<std::uint64_t>(sweep.first + t));
    ratio[static_cast<std::size_t>(t)] = trial_ratio(rng, sweep.first + t);
  }
  RatioFit fit;
  fit.seed = sweep.seed;
  for (int t = 0; t < sweep.trials; ++t) {
    if (ratio[static_cast<std::size_t>(t)] >= 0.0) fit.observe(ratio[static_cast<std::size_t>(t)], sweep.first + t);
  }
  return fit;
}

}  // namespace graphhardy
