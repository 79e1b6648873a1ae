#include "gibo/solver/target.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "gibo/common/errors.hpp"

namespace gibo::solver {

TargetSpec::TargetSpec(std::vector<TargetEntry> entries) : entries_(std::move(entries)) { validate(); }

std::vector<std::string> TargetSpec::names() const {
  std::vector<std::string> out;
  for (const auto& e : entries_) out.push_back(e.name);
  return out;
}

void TargetSpec::validate() const {
  if (entries_.empty()) throw std::invalid_argument("TargetSpec: no targets");
  std::set<std::string> seen;
  for (const auto& e : entries_) {
    if (!seen.insert(e.name).second) throw std::invalid_argument("TargetSpec: target '" + e.name + "' listed twice");
    if (!std::isfinite(e.value)) throw std::invalid_argument("TargetSpec: target '" + e.name + "' is not finite");
    if (!(e.weight > 0.0)) throw std::invalid_argument("TargetSpec: weight of '" + e.name + "' must be > 0");
    if (!(e.scale > 0.0)) throw std::invalid_argument("TargetSpec: scale of '" + e.name + "' must be > 0");
  }
}

void TargetSpec::validate_against(const std::vector<std::string>& model_outputs) const {
  validate();
  for (const auto& e : entries_) {
    if (std::find(model_outputs.begin(), model_outputs.end(), e.name) == model_outputs.end()) {
      throw std::invalid_argument("TargetSpec: model has no output named '" + e.name + "'");
    }
  }
}

double TargetSpec::weighted_norm_sq(const NamedValues& outputs) const {
  double sum = 0.0;
  for (const auto& e : entries_) {
    const auto it = outputs.find(e.name);
    if (it == outputs.end()) throw EvaluationError("model output lacks '" + e.name + "'");
    if (!std::isfinite(it->second)) throw EvaluationError("model output '" + e.name + "' is not finite");
    const double r = (it->second - e.value) / e.scale;
    sum += e.weight * r * r;
  }
  return sum;
}

ResidualResult residual_objective(const DisciplineModel& model, const TargetSpec& target,
                                  const Eigen::VectorXd& y) {
  if (!model.bounds().contains(y)) throw std::invalid_argument("residual_objective: y is outside the model bounds");
  ResidualResult r;
  r.output = model.evaluate(y);
  r.norm_sq = target.weighted_norm_sq(r.output);
  return r;
}

}  // namespace gibo::solver
