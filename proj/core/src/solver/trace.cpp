#include "gibo/solver/trace.hpp"

#include <cmath>

#include "gibo/common/errors.hpp"

namespace gibo::solver {

std::string_view to_string(TerminationReason reason) {
  switch (reason) {
    case TerminationReason::TargetMet:
      return "TargetMet";
    case TerminationReason::AcquisitionConverged:
      return "AcquisitionConverged";
    case TerminationReason::BudgetExhausted:
      return "BudgetExhausted";
  }
  return "Unknown";
}

double OptimizationTrace::incumbent_value() const {
  return incumbent_index ? records[*incumbent_index].norm_sq : std::numeric_limits<double>::infinity();
}

const EvaluationRecord* OptimizationTrace::incumbent() const {
  return incumbent_index ? &records[*incumbent_index] : nullptr;
}

int OptimizationTrace::failures() const {
  int n = 0;
  for (const auto& r : records) n += r.failed ? 1 : 0;
  return n;
}

std::optional<int> OptimizationTrace::evaluations_to_threshold(double threshold) const {
  for (const auto& r : records) {
    if (!r.failed && r.norm_sq < threshold) return r.iteration + 1;
  }
  return std::nullopt;
}

SolverAborted::SolverAborted(const std::string& what, OptimizationTrace partial)
    : std::runtime_error(what), partial_(std::move(partial)) {}

TraceRecorder::TraceRecorder(const DisciplineModel& model, const TargetSpec& target, std::string method,
                             int max_evaluations, double norm_epsilon)
    : model_(model),
      target_(target),
      max_evaluations_(max_evaluations),
      norm_epsilon_(norm_epsilon),
      start_(std::chrono::steady_clock::now()) {
  trace_.method = std::move(method);
  trace_.input_names = model.input_names();
  trace_.output_names = model.output_names();
}

std::optional<double> TraceRecorder::evaluate(const Eigen::VectorXd& y, double acquisition_max) {
  EvaluationRecord rec;
  rec.iteration = evaluations();
  rec.point = y;
  rec.acquisition_max = acquisition_max;
  std::optional<double> result;
  try {
    ResidualResult r = residual_objective(model_, target_, y);
    rec.outputs = std::move(r.output);
    rec.norm_sq = r.norm_sq;
    result = r.norm_sq;
  } catch (const EvaluationError& e) {
    rec.failed = true;
    rec.error = e.what();
  }
  const double best = trace_.incumbent_value();
  if (result && *result < best) trace_.incumbent_index = trace_.records.size();
  rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  trace_.records.push_back(std::move(rec));
  if (trace_.incumbent_index) trace_.records.back().incumbent = trace_.incumbent_value();

  if (trace_.failures() > kMaxFailureFraction * max_evaluations_) {
    trace_.total_seconds = trace_.records.back().seconds;
    throw SolverAborted("aborting: " + std::to_string(trace_.failures()) +
                            " discipline evaluations failed (more than 20% of the budget); last error: " +
                            trace_.records.back().error,
                        trace_);
  }
  return result;
}

bool TraceRecorder::target_met() const { return trace_.incumbent_value() < norm_epsilon_; }

OptimizationTrace TraceRecorder::finish(TerminationReason reason) {
  trace_.reason = reason;
  trace_.total_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  return trace_;
}

}  // namespace gibo::solver
