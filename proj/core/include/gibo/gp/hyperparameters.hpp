#pragma once

#include <cstdint>
#include <optional>

#include "gibo/gp/gaussian_process.hpp"
#include "gibo/gp/kernel.hpp"

namespace gibo::gp {

struct HyperparameterOptions {
  int restarts = 5;
  int max_iterations = 60;
  // Box for lengthscales, relative to the per-dimension extent of the input domain.
  double min_lengthscale = 1e-3;
  double max_lengthscale = 1e3;
  // Boxes for the variances, relative to the sample variance of the values.
  double min_signal_variance = 1e-3;
  double max_signal_variance = 1e3;
  double min_noise_variance = 1e-10;
  double max_noise_variance = 1.0;
  /// Per-dimension extent of the input domain; the bounding box of the points when empty.
  Eigen::VectorXd domain_extent;
  /// Optional extra start point, typically the previous optimum.
  std::optional<KernelSpec> warm_start;
};

/// Lengthscales from the median pairwise distance of the inputs, variances from the data.
KernelSpec heuristic_kernel(const TrainingSet& training, KernelFamily family,
                            const Eigen::VectorXd& domain_extent = {});

/// Multi-start bounded maximization of the log marginal likelihood over log
/// lengthscales, log signal variance and log noise variance. Deterministic for a
/// given seed. Falls back to heuristic_kernel() when every restart fails.
KernelSpec optimize_hyperparams(const TrainingSet& training, KernelFamily family, int restarts,
                                std::uint64_t seed, HyperparameterOptions options = {});

}  // namespace gibo::gp
