#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include <Eigen/Core>

#include "gibo/common/discipline_model.hpp"
#include "gibo/common/domain.hpp"
#include "gibo/solver/target.hpp"
#include "gibo/solver/trace.hpp"

namespace gibo::baselines {

enum class BaselineKind { FiniteDifferenceGradient, RandomSearch, EvolutionStrategy };

std::string_view to_string(BaselineKind kind);
BaselineKind baseline_kind_from_string(std::string_view name);

struct BaselineConfig {
  BaselineKind kind = BaselineKind::FiniteDifferenceGradient;
  int max_evaluations = 300;
  std::uint64_t seed = 0;
  double norm_epsilon = 1e-3;  // stop early once reached

  // Finite-difference gradient descent; lengths are in normalized [0,1] coordinates.
  double fd_step = 1e-4;
  double armijo = 1e-4;
  double initial_step = 0.25;     // length of the first trial step
  double min_step = 1e-10;        // below this the run restarts from a fresh random point

  // (mu/mu, lambda) evolution strategy.
  int population = 8;  // lambda
  int parents = 4;     // mu
  double sigma0 = 0.2;

  /// Start point in model coordinates; a uniform draw from the seed when empty.
  std::optional<Eigen::VectorXd> start;

  void validate() const;
};

/// Runs one comparison optimizer on f(y) = ||g(y) - x||^2 over `bounds`. Every model
/// call, finite-difference probes and line-search trials included, is one trace record.
solver::OptimizationTrace run_baseline(const DisciplineModel& model, const solver::TargetSpec& target,
                                       const BaselineConfig& config, const DomainBounds& bounds);

}  // namespace gibo::baselines
