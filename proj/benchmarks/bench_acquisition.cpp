#include <random>

#include <benchmark/benchmark.h>

#include "gibo/acquisition/acquisition.hpp"

namespace {

using namespace gibo;

gp::GaussianProcess posterior(int n, int m) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  gp::TrainingSet t;
  t.points.resize(n, m);
  t.values.resize(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) t.points(i, j) = u(rng);
    t.values[i] = (t.points.row(i).array() - 0.4).square().sum();
  }
  gp::KernelSpec k;
  k.lengthscales = Eigen::VectorXd::Constant(m, 0.25);
  k.noise_variance = 1e-8;
  return gp::GaussianProcess::fit(k, t);
}

void BM_EiValue(benchmark::State& state) {
  double mean = -1.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(acq::ei_value(mean, 0.7, 0.0, 0.0));
    mean += 1e-9;
  }
}
BENCHMARK(BM_EiValue);

void BM_MaximizeAcquisition(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const auto g = posterior(40, m);
  const auto incumbent = acq::Incumbent::from_training(g.training());
  const auto bounds = DomainBounds::unit(m);
  acq::AcquisitionConfig config;
  for (auto _ : state) benchmark::DoNotOptimize(acq::maximize_acquisition(g, config, incumbent, bounds));
}
BENCHMARK(BM_MaximizeAcquisition)->Arg(3)->Arg(6)->Unit(benchmark::kMillisecond);

}  // namespace
