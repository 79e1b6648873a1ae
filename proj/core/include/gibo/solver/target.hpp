#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "gibo/common/discipline_model.hpp"

namespace gibo::solver {

/// One requested characteristic. The residual is measured in units of `scale`.
struct TargetEntry {
  std::string name;
  double value = 0.0;
  double weight = 1.0;  // > 0
  double scale = 1.0;   // > 0, characteristic magnitude in the statistic's own unit
};

/// Desired characteristics x and the weighted norm used to compare g(y) against them.
class TargetSpec {
 public:
  TargetSpec() = default;
  explicit TargetSpec(std::vector<TargetEntry> entries);

  const std::vector<TargetEntry>& entries() const { return entries_; }
  std::vector<std::string> names() const;

  /// Throws std::invalid_argument for duplicate names or non-positive weights/scales.
  void validate() const;
  /// Every target name must be one of the model's declared outputs, spelled exactly.
  void validate_against(const std::vector<std::string>& model_outputs) const;

  /// sum_j w_j ((g_j - x_j) / s_j)^2
  double weighted_norm_sq(const NamedValues& outputs) const;

 private:
  std::vector<TargetEntry> entries_;
};

struct ResidualResult {
  double norm_sq = 0.0;
  NamedValues output;  // raw model outputs
};

/// f(y) = ||g(y) - x||^2 in the target's weighted, scaled norm.
/// Throws std::invalid_argument when y is outside the model's bounds and propagates
/// EvaluationError from the model.
ResidualResult residual_objective(const DisciplineModel& model, const TargetSpec& target,
                                  const Eigen::VectorXd& y);

}  // namespace gibo::solver
