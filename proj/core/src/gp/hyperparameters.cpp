#include "gibo/gp/hyperparameters.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "gibo/common/domain.hpp"
#include "gibo/common/errors.hpp"
#include "gibo/optim/box_minimizer.hpp"

namespace gibo::gp {

namespace {

constexpr std::uint64_t kHyperStream = 0x4879706572ULL;

double sample_variance(const Eigen::VectorXd& v) {
  if (v.size() < 2) return 0.0;
  const double mean = v.mean();
  return (v.array() - mean).square().sum() / static_cast<double>(v.size());
}

Eigen::VectorXd resolve_extent(const TrainingSet& training, const Eigen::VectorXd& given) {
  if (given.size() == training.dim()) return given;
  Eigen::VectorXd extent = training.points.colwise().maxCoeff() - training.points.colwise().minCoeff();
  for (Eigen::Index i = 0; i < extent.size(); ++i) {
    if (!(extent[i] > 0.0)) extent[i] = 1.0;
  }
  return extent;
}

KernelSpec unpack(const Eigen::VectorXd& theta, KernelFamily family) {
  const Eigen::Index m = theta.size() - 2;
  KernelSpec k;
  k.family = family;
  k.lengthscales = theta.head(m).array().exp();
  k.signal_variance = std::exp(theta[m]);
  k.noise_variance = std::exp(theta[m + 1]);
  return k;
}

Eigen::VectorXd pack(const KernelSpec& k) {
  const Eigen::Index m = k.dim();
  Eigen::VectorXd theta(m + 2);
  theta.head(m) = k.lengthscales.array().log();
  theta[m] = std::log(k.signal_variance);
  theta[m + 1] = std::log(std::max(k.noise_variance, 1e-300));
  return theta;
}

}  // namespace

KernelSpec heuristic_kernel(const TrainingSet& training, KernelFamily family,
                            const Eigen::VectorXd& domain_extent) {
  training.validate();
  const Eigen::Index n = training.size();
  const Eigen::Index m = training.dim();
  const Eigen::VectorXd extent = resolve_extent(training, domain_extent);
  std::vector<double> dists;
  dists.reserve(static_cast<std::size_t>(n * (n - 1) / 2));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      dists.push_back(((training.points.row(i) - training.points.row(j)).transpose().array() /
                       extent.array())
                          .matrix()
                          .norm());
    }
  }
  double median = 0.5;
  if (!dists.empty()) {
    std::nth_element(dists.begin(), dists.begin() + static_cast<long>(dists.size() / 2), dists.end());
    median = dists[dists.size() / 2];
    if (!(median > 0.0)) median = 0.5;
  }
  KernelSpec k;
  k.family = family;
  k.lengthscales = extent * median;
  const double var = sample_variance(training.values);
  k.signal_variance = var > 0.0 ? var : 1.0;
  k.noise_variance = 1e-6 * k.signal_variance;
  (void)m;
  return k;
}

KernelSpec optimize_hyperparams(const TrainingSet& training, KernelFamily family, int restarts,
                                std::uint64_t seed, HyperparameterOptions options) {
  training.validate();
  if (training.size() < 2) throw std::invalid_argument("optimize_hyperparams: need at least 2 points");
  if (restarts < 1) throw std::invalid_argument("optimize_hyperparams: restarts must be >= 1");
  const Eigen::Index m = training.dim();
  const Eigen::VectorXd extent = resolve_extent(training, options.domain_extent);
  const double var = sample_variance(training.values);
  const double value_scale = var > 0.0 ? var : 1.0;

  Eigen::VectorXd lower(m + 2);
  Eigen::VectorXd upper(m + 2);
  lower.head(m) = (extent * options.min_lengthscale).array().log();
  upper.head(m) = (extent * options.max_lengthscale).array().log();
  lower[m] = std::log(value_scale * options.min_signal_variance);
  upper[m] = std::log(value_scale * options.max_signal_variance);
  lower[m + 1] = std::log(value_scale * options.min_noise_variance);
  upper[m + 1] = std::log(value_scale * options.max_noise_variance);
  const DomainBounds box(lower, upper);

  // Negative log marginal likelihood; a singular Gram matrix counts as infeasible.
  const optim::Objective objective = [&](const Eigen::VectorXd& theta, Eigen::VectorXd* grad) {
    try {
      const KernelSpec k = unpack(theta, family);
      const LikelihoodWithGradient lml = log_marginal_likelihood_with_gradient(k, training);
      if (grad) *grad = -lml.gradient;
      return -lml.value;
    } catch (const SingularModelError&) {
      if (grad) grad->setZero(theta.size());
      return std::numeric_limits<double>::infinity();
    }
  };

  std::vector<Eigen::VectorXd> starts;
  if (options.warm_start && options.warm_start->dim() == m) {
    starts.push_back(box.clamp(pack(*options.warm_start)));
  }
  starts.push_back(box.clamp(pack(heuristic_kernel(training, family, extent))));
  // Random starts are drawn from a central sub-box: lengthscales 0.05..2 of the extent,
  // signal variance 0.1..10 of the data variance, noise 1e-8..1e-2.
  auto rng = make_rng(seed, kHyperStream);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  while (static_cast<int>(starts.size()) < restarts) {
    Eigen::VectorXd theta(m + 2);
    for (Eigen::Index d = 0; d < m; ++d) {
      theta[d] = std::log(extent[d]) + std::log(0.05) + unit(rng) * std::log(2.0 / 0.05);
    }
    theta[m] = std::log(value_scale) + std::log(0.1) + unit(rng) * std::log(100.0);
    theta[m + 1] = std::log(value_scale) + std::log(1e-8) + unit(rng) * std::log(1e6);
    starts.push_back(box.clamp(theta));
  }
  starts.resize(static_cast<std::size_t>(std::max(restarts, 1)));

  optim::BoxMinimizerOptions minimizer;
  minimizer.max_iterations = options.max_iterations;
  minimizer.projected_gradient_tolerance = 1e-6;
  minimizer.relative_function_tolerance = 1e-9;

  double best_value = std::numeric_limits<double>::infinity();
  Eigen::VectorXd best_theta;
  for (const auto& start : starts) {
    const optim::BoxMinimizerResult r = optim::minimize_in_box(objective, start, box, minimizer);
    if (std::isfinite(r.value) && r.value < best_value) {
      best_value = r.value;
      best_theta = r.x;
    }
  }
  if (best_theta.size() == 0) return heuristic_kernel(training, family, extent);
  return unpack(best_theta, family);
}

}  // namespace gibo::gp
