#include <random>

#include <benchmark/benchmark.h>

#include "gibo/gp/gaussian_process.hpp"
#include "gibo/gp/hyperparameters.hpp"

namespace {

using namespace gibo::gp;

TrainingSet random_set(int n, int m) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  TrainingSet t;
  t.points.resize(n, m);
  t.values.resize(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) t.points(i, j) = u(rng);
    t.values[i] = std::sin(6.0 * t.points.row(i).sum());
  }
  return t;
}

KernelSpec kernel(int m) {
  KernelSpec k;
  k.family = KernelFamily::Matern52;
  k.lengthscales = Eigen::VectorXd::Constant(m, 0.3);
  k.signal_variance = 1.0;
  k.noise_variance = 1e-6;
  return k;
}

void BM_Fit(benchmark::State& state) {
  const auto t = random_set(static_cast<int>(state.range(0)), 3);
  const auto k = kernel(3);
  for (auto _ : state) benchmark::DoNotOptimize(GaussianProcess::fit(k, t));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Fit)->RangeMultiplier(2)->Range(16, 256)->Complexity(benchmark::oNCubed);

void BM_PredictBatch(benchmark::State& state) {
  const auto t = random_set(static_cast<int>(state.range(0)), 3);
  const auto g = GaussianProcess::fit(kernel(3), t);
  const Eigen::MatrixXd queries = random_set(1000, 3).points;
  Eigen::VectorXd mean, stddev;
  for (auto _ : state) {
    g.predict_batch(queries, mean, stddev);
    benchmark::DoNotOptimize(mean.data());
  }
  state.SetItemsProcessed(state.iterations() * queries.rows());
}
BENCHMARK(BM_PredictBatch)->Arg(50)->Arg(200);

void BM_OptimizeHyperparameters(benchmark::State& state) {
  const auto t = random_set(static_cast<int>(state.range(0)), 3);
  for (auto _ : state) benchmark::DoNotOptimize(optimize_hyperparams(t, KernelFamily::Matern52, 5, 0));
}
BENCHMARK(BM_OptimizeHyperparameters)->Arg(30)->Arg(100)->Unit(benchmark::kMillisecond);

}  // namespace
