#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "hh2/kernels.hpp"
#include "hh2/random.hpp"
#include "hh2/state_space.hpp"

namespace {

using namespace hh2;

StateSpace stable_system(Index n, Index m) {
  Rng rng(11);
  Mat A = rng.normal_matrix(n, n);
  A -= (A.norm() + 1.0) * Mat::Identity(n, n);
  return StateSpace(A, rng.normal_matrix(n, m), rng.normal_matrix(m, n), Mat::Zero(m, m));
}

std::vector<double> grid(int k) {
  std::vector<double> w(k);
  for (int i = 0; i < k; ++i) w[i] = 1e-2 * std::pow(1e4, static_cast<double>(i) / (k - 1));
  return w;
}

// Stable block-diagonal matrix with alternating 1x1 and 2x2 blocks.
Mat block_diagonal(Index n) {
  Mat L = Mat::Zero(n, n);
  Index i = 0;
  while (i < n) {
    if (i + 1 < n && i % 3 == 0) {
      L(i, i) = L(i + 1, i + 1) = -1.0 - 0.01 * i;
      L(i, i + 1) = 0.5;
      L(i + 1, i) = -0.5;
      i += 2;
    } else {
      L(i, i) = -0.5 - 0.02 * i;
      ++i;
    }
  }
  return L;
}

template <bool Parallel>
void BM_FrequencyResponses(benchmark::State& state) {
  const StateSpace sys = stable_system(state.range(0), 4);
  const auto w = grid(64);
  for (auto _ : state) {
    auto r = Parallel ? kernels::frequency_responses(sys, w) : kernels::frequency_responses_serial(sys, w);
    benchmark::DoNotOptimize(r.data());
  }
}

template <bool Parallel>
void BM_AssignNearest(benchmark::State& state) {
  Rng rng(5);
  const Index n = state.range(0);
  const Mat points = rng.normal_matrix(n, 8);
  const Mat centers = rng.normal_matrix(16, 8);
  const Vec mass = Vec::Ones(n);
  std::vector<int> labels;
  for (auto _ : state) {
    double c = Parallel ? kernels::assign_nearest(points, mass, centers, labels)
                        : kernels::assign_nearest_serial(points, mass, centers, labels);
    benchmark::DoNotOptimize(c);
  }
}

template <bool Parallel>
void BM_CauchyBlocks(benchmark::State& state) {
  Rng rng(3);
  const Index n = state.range(0);
  const Mat L = block_diagonal(n);
  const Mat G = rng.normal_matrix(n, n);
  for (auto _ : state) {
    Mat C = Parallel ? kernels::cauchy_blocks(L, G) : kernels::cauchy_blocks_serial(L, G);
    benchmark::DoNotOptimize(C.data());
  }
}

}  // namespace

BENCHMARK(BM_FrequencyResponses<false>)->Arg(32)->Arg(128);
BENCHMARK(BM_FrequencyResponses<true>)->Arg(32)->Arg(128);
BENCHMARK(BM_AssignNearest<false>)->Arg(10000)->Arg(100000);
BENCHMARK(BM_AssignNearest<true>)->Arg(10000)->Arg(100000);
BENCHMARK(BM_CauchyBlocks<false>)->Arg(200)->Arg(800);
BENCHMARK(BM_CauchyBlocks<true>)->Arg(200)->Arg(800);

BENCHMARK_MAIN();
