#include "gibo/solver/inverse_solver.hpp"

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

#include "gibo/common/errors.hpp"
#include "gibo/common/sampling.hpp"
#include "gibo/gp/gaussian_process.hpp"
#include "gibo/gp/hyperparameters.hpp"

namespace gibo::solver {

namespace {

constexpr std::uint64_t kDesignStream = 0x44657369676eULL;
constexpr std::uint64_t kFallbackStream = 0x46616c6cULL;
constexpr double kDuplicateDistance = 1e-9;

std::uint64_t iteration_seed(std::uint64_t seed, int iteration) {
  // splitmix64 step; keeps per-iteration streams decorrelated.
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(iteration + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double min_distance(const Eigen::MatrixXd& points, const Eigen::VectorXd& q) {
  if (points.rows() == 0) return std::numeric_limits<double>::infinity();
  return std::sqrt((points.rowwise() - q.transpose()).rowwise().squaredNorm().minCoeff());
}

}  // namespace

std::string_view to_string(ObjectiveTransform transform) {
  return transform == ObjectiveTransform::Log ? "log" : "identity";
}

ObjectiveTransform objective_transform_from_string(std::string_view name) {
  if (name == "log") return ObjectiveTransform::Log;
  if (name == "identity" || name == "none") return ObjectiveTransform::Identity;
  throw std::invalid_argument("unknown objective transform '" + std::string(name) + "' (expected log or identity)");
}

void TerminationPolicy::validate() const {
  if (!(norm_epsilon > 0.0)) throw std::invalid_argument("TerminationPolicy: norm_epsilon must be > 0");
  if (!(acquisition_epsilon > 0.0)) {
    throw std::invalid_argument("TerminationPolicy: acquisition_epsilon must be > 0");
  }
  if (n_init < 2) throw std::invalid_argument("TerminationPolicy: n_init must be >= 2");
  if (max_evaluations < n_init) {
    throw std::invalid_argument("TerminationPolicy: max_evaluations must be >= n_init");
  }
  if (acquisition_warmup < 0) throw std::invalid_argument("TerminationPolicy: acquisition_warmup must be >= 0");
}

std::vector<Eigen::VectorXd> initial_design(const DomainBounds& bounds, int n_init, std::uint64_t seed) {
  if (n_init < 2) throw std::invalid_argument("initial_design: n_init must be >= 2");
  auto rng = make_rng(seed, kDesignStream);
  return latin_hypercube(bounds, n_init, rng);
}

OptimizationTrace solve(const DisciplineModel& model, const TargetSpec& target,
                        const TerminationPolicy& policy, const acq::AcquisitionConfig& acquisition,
                        std::uint64_t seed, const SurrogateOptions& surrogate) {
  policy.validate();
  acquisition.validate();
  target.validate_against(model.output_names());
  if (surrogate.hyper_restarts < 1 || surrogate.refit_every < 1) {
    throw std::invalid_argument("SurrogateOptions: hyper_restarts and refit_every must be >= 1");
  }
  if (!(surrogate.log_offset > 0.0)) throw std::invalid_argument("SurrogateOptions: log_offset must be > 0");
  if (!(surrogate.min_lengthscale > 0.0) || surrogate.min_lengthscale >= 1e3) {
    throw std::invalid_argument("SurrogateOptions: min_lengthscale must be in (0, 1000)");
  }
  if (!(surrogate.max_noise_variance > 1e-10)) {
    throw std::invalid_argument("SurrogateOptions: max_noise_variance must be > 1e-10");
  }

  const DomainBounds& bounds = model.bounds();
  const Eigen::Index m = bounds.dim();
  const DomainBounds unit_box = DomainBounds::unit(m);
  TraceRecorder recorder(model, target, "bo_" + std::string(acq::to_string(acquisition.kind)),
                         policy.max_evaluations, policy.norm_epsilon);

  gp::TrainingSet data;  // unit-box inputs, transformed objective values
  data.points.resize(0, m);
  const auto transform = [&](double f) {
    return surrogate.transform == ObjectiveTransform::Log ? std::log(f + surrogate.log_offset) : f;
  };
  const auto record = [&](const Eigen::VectorXd& y, double acq_max) {
    const std::optional<double> f = recorder.evaluate(y, acq_max);
    if (f) data.add(bounds.to_unit(y), transform(*f));
  };

  for (const Eigen::VectorXd& y : initial_design(bounds, policy.n_init, seed)) {
    record(y, std::numeric_limits<double>::quiet_NaN());
    if (recorder.target_met()) return recorder.finish(TerminationReason::TargetMet);
  }

  auto fallback_rng = make_rng(seed, kFallbackStream);
  std::optional<gp::KernelSpec> kernel;
  int gp_updates = 0;

  while (recorder.budget_left()) {
    const int iteration = recorder.evaluations();
    if (data.size() < 2) {
      // Not enough successful evaluations to fit anything; sample uniformly.
      record(uniform_point(bounds, fallback_rng), std::numeric_limits<double>::quiet_NaN());
      if (recorder.target_met()) return recorder.finish(TerminationReason::TargetMet);
      continue;
    }

    // Standardize the objective.
    const double mean = data.values.mean();
    double scale = std::sqrt((data.values.array() - mean).square().mean());
    if (!(scale > 0.0)) scale = 1.0;
    gp::TrainingSet standardized{data.points, (data.values.array() - mean) / scale};

    const std::uint64_t iter_seed = iteration_seed(seed, iteration);
    if (!kernel || gp_updates % surrogate.refit_every == 0) {
      gp::HyperparameterOptions options;
      options.domain_extent = Eigen::VectorXd::Ones(m);
      options.max_iterations = surrogate.hyper_max_iterations;
      options.max_noise_variance = surrogate.max_noise_variance;
      options.min_lengthscale = surrogate.min_lengthscale;
      options.warm_start = kernel;
      kernel = gp::optimize_hyperparams(standardized, surrogate.family, surrogate.hyper_restarts,
                                        iter_seed, options);
    }
    ++gp_updates;

    std::optional<gp::GaussianProcess> posterior;
    try {
      posterior = gp::GaussianProcess::fit(*kernel, standardized);
    } catch (const SingularModelError&) {
      gp::KernelSpec noisy = *kernel;
      noisy.noise_variance = std::max(noisy.noise_variance, 1e-6) * 100.0;
      try {
        posterior = gp::GaussianProcess::fit(noisy, standardized);
      } catch (const SingularModelError&) {
        record(uniform_point(bounds, fallback_rng), std::numeric_limits<double>::quiet_NaN());
        if (recorder.target_met()) return recorder.finish(TerminationReason::TargetMet);
        continue;
      }
    }

    acq::AcquisitionConfig config = acquisition;
    config.seed = iter_seed;
    const acq::AcquisitionMaximum best = acq::maximize_acquisition(
        *posterior, config, acq::Incumbent::from_training(standardized), unit_box);
    recorder.note_acquisition(best.value);

    if (data.size() >= policy.n_init + policy.acquisition_warmup && best.value <= policy.acquisition_epsilon) {
      return recorder.finish(TerminationReason::AcquisitionConverged);
    }

    Eigen::VectorXd proposal = best.point;
    if (min_distance(data.points, proposal) < kDuplicateDistance) {
      for (const auto& c : best.candidates) {
        if (min_distance(data.points, c.point) >= kDuplicateDistance) {
          proposal = c.point;
          break;
        }
      }
    }
    record(bounds.from_unit(proposal), best.value);
    if (recorder.target_met()) return recorder.finish(TerminationReason::TargetMet);
  }
  return recorder.finish(TerminationReason::BudgetExhausted);
}

}  // namespace gibo::solver
