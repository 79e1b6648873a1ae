#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "gibo/harness/config.hpp"
#include "gibo/harness/experiment.hpp"

namespace gibo::harness {

struct CompareOptions {
  std::vector<std::uint64_t> seeds;  // empty: every config runs once with its own seed
  std::filesystem::path output_dir = "compare";
  bool parallel = false;  // run members concurrently; ignored for external models
};

struct CompareRun {
  std::string label;
  std::uint64_t seed = 0;
  std::filesystem::path output_dir;
  ExperimentResult result;
};

struct MethodSummary {
  std::string label;
  std::string method;
  std::vector<std::optional<int>> evaluations_to_threshold;  // one per seed, nullopt = never reached
  std::optional<double> median_evaluations_to_threshold;     // nullopt when the median run never reached it
};

struct ComparisonResult {
  double threshold = 0.0;
  std::vector<CompareRun> runs;
  std::vector<MethodSummary> methods;
};

/// Throws ConfigError unless there are at least two configs sharing model, free
/// coordinates, target and budget.
void validate_comparable(const std::vector<ExperimentConfig>& configs);

/// Median where a missing value counts as larger than any observed one.
std::optional<double> censored_median(std::vector<std::optional<int>> values);

/// Runs every config for every seed. Member artifacts go to
/// <output_dir>/<label>/seed_<seed>/; the aligned best-so-far series go to
/// comparison.csv and the per-method statistics to compare_summary.json.
ComparisonResult compare(const std::vector<ExperimentConfig>& configs, const CompareOptions& options);

}  // namespace gibo::harness
