#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "gibo/acquisition/acquisition.hpp"
#include "gibo/common/discipline_model.hpp"
#include "gibo/common/domain.hpp"
#include "gibo/gp/kernel.hpp"
#include "gibo/solver/target.hpp"
#include "gibo/solver/trace.hpp"

namespace gibo::solver {

/// Two-tier stopping rule plus the evaluation budget.
struct TerminationPolicy {
  double norm_epsilon = 1e-3;         // stop once ||g(y+) - x||^2 < norm_epsilon
  double acquisition_epsilon = 1e-3;  // stop once the acquisition maximum <= this
  int max_evaluations = 300;
  int n_init = 10;
  // The acquisition tier is only checked with at least n_init + acquisition_warmup points.
  int acquisition_warmup = 5;

  void validate() const;
};

// Monotone map applied to f before standardization. Log compresses the dynamic range
// of a squared residual so that the acquisition threshold stays meaningful near zero.
enum class ObjectiveTransform { Identity, Log };

std::string_view to_string(ObjectiveTransform transform);
ObjectiveTransform objective_transform_from_string(std::string_view name);

struct SurrogateOptions {
  gp::KernelFamily family = gp::KernelFamily::Matern52;
  ObjectiveTransform transform = ObjectiveTransform::Log;
  double log_offset = 1e-12;  // log(f + offset) keeps exact zeros finite
  // Upper bound on the fitted noise variance, relative to the variance of the
  // standardized values. Discipline models are deterministic; a large fitted noise
  // would smooth away the incumbent and starve the acquisition.
  double max_noise_variance = 1e-6;
  // Lower bound on the fitted lengthscales in unit-box coordinates. With few points in
  // several dimensions the likelihood is nearly flat towards tiny lengthscales, and a
  // GP that collapses onto its prior between the data stops proposing anything.
  double min_lengthscale = 0.02;
  int hyper_restarts = 5;
  int hyper_max_iterations = 60;
  int refit_every = 1;  // re-select hyperparameters every k-th GP update
};

/// Latin hypercube initial design, deterministic for a given seed.
std::vector<Eigen::VectorXd> initial_design(const DomainBounds& bounds, int n_init, std::uint64_t seed);

/// Generalized inverse of `model` at `target` by Bayesian optimization of
/// f(y) = ||g(y) - x||^2.
///
/// Each iteration fits a GP to the successful evaluations (inputs mapped to the unit
/// box, values transformed and standardized), maximizes the acquisition, and stops with
/// AcquisitionConverged when the maximum is at most acquisition_epsilon (after the
/// warm-up). Otherwise the proposal is evaluated; TargetMet fires as soon as an
/// evaluation beats norm_epsilon. Failed evaluations are recorded but kept out of the
/// GP. Throws SolverAborted when more than 20% of the budget fails.
OptimizationTrace solve(const DisciplineModel& model, const TargetSpec& target,
                        const TerminationPolicy& policy, const acq::AcquisitionConfig& acquisition,
                        std::uint64_t seed, const SurrogateOptions& surrogate = {});

}  // namespace gibo::solver
