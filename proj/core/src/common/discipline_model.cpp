#include "gibo/common/discipline_model.hpp"

#include <stdexcept>

#include "gibo/common/errors.hpp"

namespace gibo {

std::vector<std::string> DisciplineModel::input_names() const {
  std::vector<std::string> names;
  for (Eigen::Index i = 0; i < bounds().dim(); ++i) names.push_back("y" + std::to_string(i));
  return names;
}

FunctionModel::FunctionModel(DomainBounds bounds, std::vector<std::string> outputs, Function function)
    : bounds_(std::move(bounds)), outputs_(std::move(outputs)), function_(std::move(function)) {
  if (outputs_.empty()) throw std::invalid_argument("FunctionModel: no outputs");
}

NamedValues FunctionModel::evaluate(const Eigen::VectorXd& design) const {
  const Eigen::VectorXd values = function_(design);
  if (values.size() != static_cast<Eigen::Index>(outputs_.size())) {
    throw EvaluationError("FunctionModel: function returned " + std::to_string(values.size()) +
                          " values for " + std::to_string(outputs_.size()) + " outputs");
  }
  NamedValues out;
  for (std::size_t i = 0; i < outputs_.size(); ++i) out[outputs_[i]] = values[static_cast<Eigen::Index>(i)];
  return out;
}

}  // namespace gibo
