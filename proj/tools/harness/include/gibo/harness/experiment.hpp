#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <ostream>
#include <string>

#include <Eigen/Core>
#include <json.hpp>

#include "gibo/common/discipline_model.hpp"
#include "gibo/harness/config.hpp"
#include "gibo/solver/trace.hpp"

namespace gibo::harness {

inline constexpr int kArtifactSchemaVersion = 1;

/// Image range of each target statistic on the verification grid of a beyond-image target.
struct ImageCheck {
  long long grid_evaluations = 0;
  NamedValues minimum;
  NamedValues maximum;
  double min_norm_sq = 0.0;  // smallest residual anywhere on the grid
};

/// A config turned into live objects: the model and the concrete target values.
struct ResolvedExperiment {
  std::unique_ptr<DisciplineModel> model;
  solver::TargetSpec target;
  std::optional<Eigen::VectorXd> planted;  // y* of a self-inverse target
  std::optional<ImageCheck> image;         // beyond-image verification
};

/// Builds the model and computes target values. Self-inverse and beyond-image targets
/// depend on config.seed and on model evaluations. Throws std::invalid_argument or
/// EvaluationError.
ResolvedExperiment resolve_experiment(const ExperimentConfig& config);

/// Runs the configured optimizer. Throws SolverAborted with the partial trace.
solver::OptimizationTrace run_optimizer(const ExperimentConfig& config, const ResolvedExperiment& resolved);

struct ExperimentResult {
  solver::OptimizationTrace trace;
  std::optional<std::string> abort_message;  // set when the solver gave up
  double wall_seconds = 0.0;
};

/// Resolves, runs and writes trace.csv, scatter.csv and summary.json to
/// config.output_dir (also on abort, with the partial trace).
ExperimentResult run_experiment(const ExperimentConfig& config);

// Artifact writers. Numbers use the shortest round-trip representation; missing
// values (failed evaluations, no acquisition) are empty fields.
std::string format_number(double value);
void write_trace_csv(std::ostream& out, const solver::OptimizationTrace& trace);
void write_scatter_csv(std::ostream& out, const solver::OptimizationTrace& trace, const DomainBounds& bounds);
nlohmann::json summary_json(const ExperimentConfig& config, const ResolvedExperiment& resolved,
                            const ExperimentResult& result);
/// Column documentation embedded in summary.json.
nlohmann::json artifact_schema(const solver::OptimizationTrace& trace);

void write_artifacts(const std::filesystem::path& dir, const ExperimentConfig& config,
                     const ResolvedExperiment& resolved, const ExperimentResult& result);

}  // namespace gibo::harness
