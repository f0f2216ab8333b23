// Serial reference vs OpenMP kernels. Arguments are problem sizes; the
// OpenMP variants use the default thread count (OMP_NUM_THREADS).

#include <benchmark/benchmark.h>

#include <numeric>

#include "ssebench/kernels.hpp"
#include "ssebench/rng.hpp"

using namespace ssebench;

namespace {

BitMatrix random_bits(std::size_t rows, std::size_t cols, double density, std::uint64_t seed) {
  Rng rng = make_rng(seed, 0);
  BitMatrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      if (uniform01(rng) < density) m.set(r, c);
    }
  }
  return m;
}

struct ScoringInputs {
  Matrix unknown, unpaired;
  std::vector<double> uv, uf, pv, pf;

  kernels::ScoringProblem problem() const { return {&unknown, &unpaired, uv, uf, pv, pf, 0.3, 0.9, 1e-10}; }
};

ScoringInputs random_scoring(std::size_t n, std::size_t cols) {
  Rng rng = make_rng(2, 0);
  ScoringInputs in;
  in.unknown = Matrix(n, cols);
  in.unpaired = Matrix(n, cols);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      in.unknown(i, j) = uniform01(rng);
      in.unpaired(i, j) = uniform01(rng);
    }
    in.uv.push_back(uniform01(rng));
    in.uf.push_back(uniform01(rng));
    in.pv.push_back(uniform01(rng));
    in.pf.push_back(uniform01(rng));
  }
  in.unknown = kernels::row_normalized(in.unknown);
  in.unpaired = kernels::row_normalized(in.unpaired);
  return in;
}

template <kernels::Backend B>
void BM_Cooccurrence(benchmark::State& state) {
  const auto keywords = static_cast<std::size_t>(state.range(0));
  const std::size_t docs = 20000;
  const BitMatrix index = random_bits(keywords, docs, 0.05, 1);
  std::vector<std::size_t> rows(keywords);
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  for (auto _ : state) benchmark::DoNotOptimize(kernels::cooccurrence(index, rows, docs, B));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * keywords * keywords));
}

template <kernels::Backend B>
void BM_ScoreCandidates(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const ScoringInputs in = random_scoring(n, 200);
  const auto problem = in.problem();
  for (auto _ : state) benchmark::DoNotOptimize(kernels::score_candidates(problem, 11, B));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * n * n));
}

}  // namespace

BENCHMARK(BM_Cooccurrence<kernels::Backend::serial>)->Arg(200)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Cooccurrence<kernels::Backend::openmp>)->Arg(200)->Arg(1000)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_ScoreCandidates<kernels::Backend::serial>)->Arg(200)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ScoreCandidates<kernels::Backend::openmp>)->Arg(200)->Arg(1000)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
