#pragma once

#include <chrono>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "gibo/common/discipline_model.hpp"
#include "gibo/solver/target.hpp"

namespace gibo::solver {

enum class TerminationReason { TargetMet, AcquisitionConverged, BudgetExhausted };

std::string_view to_string(TerminationReason reason);

/// One discipline-model call.
struct EvaluationRecord {
  int iteration = 0;  // 0-based evaluation index
  Eigen::VectorXd point;
  NamedValues outputs;  // empty when the call failed
  double norm_sq = std::numeric_limits<double>::quiet_NaN();
  double incumbent = std::numeric_limits<double>::quiet_NaN();  // best norm_sq so far
  double acquisition_max = std::numeric_limits<double>::quiet_NaN();  // NaN unless proposed by BO
  double seconds = 0.0;  // wall-clock since the run started
  bool failed = false;
  std::string error;
};

struct OptimizationTrace {
  std::string method;
  std::vector<std::string> input_names;
  std::vector<std::string> output_names;
  std::vector<EvaluationRecord> records;
  std::vector<double> acquisition_maxima;  // one per acquisition maximization
  TerminationReason reason = TerminationReason::BudgetExhausted;
  std::optional<std::size_t> incumbent_index;
  double total_seconds = 0.0;

  double incumbent_value() const;
  const EvaluationRecord* incumbent() const;
  int failures() const;
  /// 1-based count of evaluations until norm_sq first drops below `threshold`.
  std::optional<int> evaluations_to_threshold(double threshold) const;
};

/// Raised when too many discipline evaluations fail; carries the partial trace.
class SolverAborted : public std::runtime_error {
 public:
  SolverAborted(const std::string& what, OptimizationTrace partial);
  const OptimizationTrace& partial() const { return partial_; }

 private:
  OptimizationTrace partial_;
};

/// Evaluates designs, maintains the incumbent and appends records. Shared by every
/// optimizer so that all traces count evaluations the same way.
class TraceRecorder {
 public:
  // More than this fraction of the budget failing aborts the run.
  static constexpr double kMaxFailureFraction = 0.2;

  TraceRecorder(const DisciplineModel& model, const TargetSpec& target, std::string method,
                int max_evaluations, double norm_epsilon);

  /// Returns norm_sq, or nullopt when the model failed. Throws SolverAborted past the
  /// failure limit.
  std::optional<double> evaluate(const Eigen::VectorXd& y,
                                 double acquisition_max = std::numeric_limits<double>::quiet_NaN());

  void note_acquisition(double value) { trace_.acquisition_maxima.push_back(value); }
  int evaluations() const { return static_cast<int>(trace_.records.size()); }
  bool budget_left() const { return evaluations() < max_evaluations_; }
  bool target_met() const;
  const OptimizationTrace& trace() const { return trace_; }

  OptimizationTrace finish(TerminationReason reason);

 private:
  const DisciplineModel& model_;
  const TargetSpec& target_;
  int max_evaluations_;
  double norm_epsilon_;
  std::chrono::steady_clock::time_point start_;
  OptimizationTrace trace_;
};

}  // namespace gibo::solver
