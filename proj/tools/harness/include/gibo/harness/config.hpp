#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "gibo/acquisition/acquisition.hpp"
#include "gibo/baselines/baselines.hpp"
#include "gibo/kinematics/external_adapter.hpp"
#include "gibo/kinematics/hardpoints.hpp"
#include "gibo/solver/inverse_solver.hpp"
#include "gibo/solver/target.hpp"

namespace gibo::harness {

inline constexpr int kConfigSchemaVersion = 1;

struct ModelConfig {
  std::filesystem::path fixture;  // absolute
  // When set, evaluations go through the external-process protocol instead of the
  // built-in kinematics. The fixture still supplies the fixed hardpoints.
  std::optional<kin::ExternalProcessSpec> external;
};

enum class TargetMode {
  Values,       // explicit target values
  SelfInverse,  // x = g(y*) for y* drawn from the seed inside the central part of the box
  BeyondImage,  // x = per-statistic grid maximum + offset * scale (unreachable)
};

std::string_view to_string(TargetMode mode);

struct TargetConfig {
  TargetMode mode = TargetMode::Values;
  // Names, weights and scales; values are only meaningful for TargetMode::Values.
  std::vector<solver::TargetEntry> entries;
  double interior_fraction = 0.8;  // SelfInverse: y* lies in the central fraction of each interval
  double offset = 10.0;            // BeyondImage: distance beyond the image, in scaled units
  int grid_points = 100;           // BeyondImage: grid points per free coordinate
};

struct OptimizerConfig {
  std::string method = "bo";  // "bo" or a baseline name
  acq::AcquisitionConfig acquisition;
  solver::SurrogateOptions surrogate;
  baselines::BaselineConfig baseline;

  bool is_bo() const { return method == "bo"; }
  /// "bo_ei", "fd_gradient", ...
  std::string label() const;
};

/// One experiment: model, free coordinates, target, optimizer, stopping rule and seed.
///
/// JSON schema (version 1); relative paths resolve against the config file's directory:
///   {
///     "schema_version": 1,
///     "name": "one_hardpoint",
///     "model": { "fixture": "../data/nominal_macpherson.json",
///                "external": { "command": ["prog", "arg"], "workdir": "dir",
///                              "timeout_seconds": 600 } },            // optional
///     "design_variables": [
///       { "coordinate": "outer_tie_rod.x", "lower": -0.165, "upper": -0.115 },
///       { "coordinate": "outer_tie_rod.z", "range": 0.025 }         // nominal +- range
///     ],
///     "target": { "mode": "values" | "self_inverse" | "beyond_image",
///                 "statistics": { "bump_steer": { "value": 10, "weight": 1, "scale": 1 },
///                                 "roll_steer": 0.14 },           // or ["bump_steer", ...]
///                 "interior_fraction": 0.8, "offset": 10, "grid_points": 100 },
///     "optimizer": { "method": "bo", "acquisition": "ei", "xi": 0, "restarts": 10,
///                    "prescreen": 1000, "kernel": "matern52", "hyper_restarts": 5,
///                    "refit_every": 1 }
///                | { "method": "fd_gradient", "fd_step": 1e-4, "armijo": 1e-4, "initial_step": 0.25 }
///                | { "method": "random_search" }
///                | { "method": "evolution_strategy", "population": 8, "parents": 4, "sigma0": 0.2 },
///     "termination": { "norm_epsilon": 1e-3, "acquisition_epsilon": 1e-3,
///                      "max_evaluations": 300, "n_init": 10 },
///     "seed": 0,
///     "output_dir": "runs/one_hardpoint"                            // relative to the cwd
///   }
struct ExperimentConfig {
  std::string name;
  std::filesystem::path source;
  ModelConfig model;
  std::vector<kin::FreeCoordinate> design;
  TargetConfig target;
  OptimizerConfig optimizer;
  solver::TerminationPolicy termination;
  std::uint64_t seed = 0;
  std::filesystem::path output_dir;
};

/// Throws ConfigError naming the file, line and JSON pointer of the first problem.
ExperimentConfig parse_experiment_config(std::string text, const std::string& origin,
                                         const std::filesystem::path& base_dir);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

}  // namespace gibo::harness
