#pragma once

#include <chrono>
#include <filesystem>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "gibo/common/discipline_model.hpp"
#include "gibo/kinematics/fixture.hpp"
#include "gibo/kinematics/hardpoints.hpp"

namespace gibo::kin {

// File protocol between the optimizer and an external simulator. For each query the
// adapter writes `input.json` into the work directory, runs the command there, and
// reads `output.json`.
//
//   input.json  { "schema_version": 1,
//                 "hardpoints": { "<hardpoint>": [x, y, z], ... },   // meters
//                 "sweep": { "amplitude": 0.08, "samples": 33 },
//                 "track_width": 1.6, "roll_travel": 0.02 }
//   output.json { "<statistic>": value, ... }
//
// Exit code 0 means success.
inline constexpr std::string_view kInputFile = "input.json";
inline constexpr std::string_view kOutputFile = "output.json";
inline constexpr std::string_view kStderrFile = "stderr.log";

struct ExternalQuery {
  HardpointSet hardpoints;
  SweepSpec sweep;
  double track_width = kDefaultTrackWidth;
  double roll_travel = kRollTravel;
};

std::string query_to_json(const ExternalQuery& query);
/// Throws std::invalid_argument on schema violations.
ExternalQuery parse_query_json(std::string_view text);

std::string outputs_to_json(const NamedValues& values);
/// Throws EvaluationError when the text is malformed or a required name is missing.
NamedValues parse_outputs_json(std::string_view text, const std::vector<std::string>& required);

struct ExternalProcessSpec {
  std::vector<std::string> command;  // argv, resolved through PATH
  std::filesystem::path workdir;
  std::chrono::duration<double> timeout{600.0};
};

struct ProcessResult {
  int exit_code = -1;
  bool timed_out = false;
  std::string stderr_text;
};

/// Runs `spec.command` inside `spec.workdir`, stderr captured to stderr.log. Kills the
/// process when it exceeds the timeout.
ProcessResult run_process(const ExternalProcessSpec& spec);

/// Wraps an external simulator as a discipline model. Calls sharing a work directory
/// are serialized; distinct work directories may run concurrently.
class ExternalModel final : public DisciplineModel {
 public:
  ExternalModel(ExternalProcessSpec process, SuspensionFixture nominal, DesignVariables variables,
                std::vector<std::string> outputs);

  const std::vector<std::string>& output_names() const override { return outputs_; }
  const DomainBounds& bounds() const override { return bounds_; }
  std::vector<std::string> input_names() const override { return variables_.names(); }
  NamedValues evaluate(const Eigen::VectorXd& design) const override;

 private:
  ExternalProcessSpec process_;
  SuspensionFixture nominal_;
  DesignVariables variables_;
  std::vector<std::string> outputs_;
  DomainBounds bounds_;
};

std::unique_ptr<DisciplineModel> external_adapter(ExternalProcessSpec process, SuspensionFixture nominal,
                                                  DesignVariables variables,
                                                  std::vector<std::string> outputs);

}  // namespace gibo::kin
