// Microbenchmarks for the hot paths: Pfaffians, minor-sum coefficients,
// compilation, covariance-backend sampling, and correlation coefficients.

#include <vector>

#include <benchmark/benchmark.h>

#include <Eigen/Dense>

#include "mgbench/compiler.hpp"
#include "mgbench/correlation.hpp"
#include "mgbench/covariance_sim.hpp"
#include "mgbench/rng.hpp"
#include "mgbench/skew.hpp"

namespace {

using namespace mgbench;

Eigen::MatrixXd random_skew(int dim, Rng& rng) {
  Eigen::MatrixXd a(dim, dim);
  for (int i = 0; i < dim; ++i) {
    a(i, i) = 0.0;
    for (int j = i + 1; j < dim; ++j) {
      a(i, j) = rng.normal();
      a(j, i) = -a(i, j);
    }
  }
  return a;
}

void BM_pfaffian(benchmark::State& state) {
  Rng rng(11);
  const auto a = random_skew(static_cast<int>(state.range(0)), rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(pfaffian(a));
  }
}
BENCHMARK(BM_pfaffian)->Arg(4)->Arg(8)->Arg(12)->Arg(16);

void BM_minor_sums(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  Rng rng(12);
  const auto a = random_skew(dim, rng);
  const auto b = random_skew(dim, rng);
  const auto c = haar_sample(dim / 2, rng).matrix();
  for (auto _ : state) {
    benchmark::DoNotOptimize(minor_sum_coefficients(a, b, c));
  }
}
BENCHMARK(BM_minor_sums)->Arg(4)->Arg(8)->Arg(12);

void BM_haar_compile(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng(13);
  for (auto _ : state) {
    benchmark::DoNotOptimize(compile(haar_sample(n, rng)));
  }
}
BENCHMARK(BM_haar_compile)->Arg(2)->Arg(3)->Arg(4)->Arg(5);

void BM_covariance_sample(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng(14);
  CovarianceState start = covariance_from_bits(std::vector<int>(n, 0));
  apply_rotation(start, haar_sample(n, rng).matrix());
  for (auto _ : state) {
    benchmark::DoNotOptimize(sample_outcome(start, rng));
  }
}
BENCHMARK(BM_covariance_sample)->Arg(2)->Arg(3)->Arg(4)->Arg(6);

void BM_alpha_even(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng(15);
  const auto q = haar_sample(n, rng);
  std::vector<int> x(n, 0);
  for (int j = 0; j < n; ++j) {
    x[j] = rng.coin() ? 1 : 0;
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(alpha_even(x, q, 2));
  }
}
BENCHMARK(BM_alpha_even)->Arg(2)->Arg(3)->Arg(4)->Arg(5);

}  // namespace

BENCHMARK_MAIN();
