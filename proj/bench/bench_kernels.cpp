// Parallel kernels against the serial brute-force references on 2D tori.
// Thread count follows OMP_NUM_THREADS.
#include <benchmark/benchmark.h>

#include <map>
#include <memory>

#include "graphhardy/markov.hpp"
#include "graphhardy/parallel.hpp"
#include "graphhardy/reference.hpp"
#include "graphhardy/sampling.hpp"
#include "graphhardy/spectral.hpp"
#include "graphhardy/tent.hpp"
#include "graphhardy/varexp.hpp"

using namespace graphhardy;

namespace {

struct Setup {
  explicit Setup(int side) : g(build_lattice(2, side)), op(g) {
    Rng rng(7);
    f = random_dense(g, rng);
  }
  WeightedGraph g;
  MarkovOperator op;
  VertexFunction f;
};

const Setup& setup(int side) {
  static std::map<int, std::unique_ptr<Setup>> cache;
  auto& s = cache[side];
  if (!s) s = std::make_unique<Setup>(side);
  return *s;
}

void BM_ApplyP(benchmark::State& st) {
  const auto& s = setup(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(s.op.apply_P(s.f));
}
void BM_ApplyP_Reference(benchmark::State& st) {
  const auto& s = setup(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(reference::apply_P(s.g, s.f));
}

void BM_Maximal(benchmark::State& st) {
  const auto& s = setup(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(hl_maximal(s.g, s.f));
}
void BM_Maximal_Reference(benchmark::State& st) {
  const auto& s = setup(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(reference::hl_maximal(s.g, s.f));
}

void BM_SquareFunction(benchmark::State& st) {
  const auto& s = setup(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(square_function_SL(s.op, s.f, 16));
}
void BM_SquareFunction_Reference(benchmark::State& st) {
  const auto& s = setup(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(reference::square_function_SL(s.g, s.f, 16));
}

void BM_Gradient(benchmark::State& st) {
  const auto& s = setup(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(gradient(s.op, s.f));
}
void BM_Gradient_Reference(benchmark::State& st) {
  const auto& s = setup(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(reference::gradient(s.g, s.f));
}

}  // namespace

BENCHMARK(BM_ApplyP)->Arg(16)->Arg(32);
BENCHMARK(BM_ApplyP_Reference)->Arg(16)->Arg(32);
BENCHMARK(BM_Maximal)->Arg(16)->Arg(32);
BENCHMARK(BM_Maximal_Reference)->Arg(16)->Arg(32);
BENCHMARK(BM_SquareFunction)->Arg(16)->Arg(32);
BENCHMARK(BM_SquareFunction_Reference)->Arg(16)->Arg(32);
BENCHMARK(BM_Gradient)->Arg(16)->Arg(32);
BENCHMARK(BM_Gradient_Reference)->Arg(16)->Arg(32);

int main(int argc, char** argv) {
  configure_threads_from_env();
  benchmark::Initialize(&argc, argv);
  benchmark::RunSpecifiedBenchmarks();
  return 0;
}
