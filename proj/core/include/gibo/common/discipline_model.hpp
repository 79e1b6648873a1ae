#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "gibo/common/domain.hpp"

namespace gibo {

using NamedValues = std::map<std::string, double>;

/// The black box g: design vector -> named characteristic values.
class DisciplineModel {
 public:
  virtual ~DisciplineModel() = default;

  virtual const std::vector<std::string>& output_names() const = 0;
  virtual const DomainBounds& bounds() const = 0;
  /// Names of the design coordinates, in vector order.
  virtual std::vector<std::string> input_names() const;
  /// Throws EvaluationError when the model cannot produce outputs.
  virtual NamedValues evaluate(const Eigen::VectorXd& design) const = 0;
  /// True when evaluate() has no side effects and may run concurrently.
  virtual bool is_pure() const { return false; }
};

/// Adapts a callable into a DisciplineModel; used for synthetic problems.
class FunctionModel final : public DisciplineModel {
 public:
  using Function = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

  FunctionModel(DomainBounds bounds, std::vector<std::string> outputs, Function function);

  const std::vector<std::string>& output_names() const override { return outputs_; }
  const DomainBounds& bounds() const override { return bounds_; }
  NamedValues evaluate(const Eigen::VectorXd& design) const override;
  bool is_pure() const override { return true; }

 private:
  DomainBounds bounds_;
  std::vector<std::string> outputs_;
  Function function_;
};

}  // namespace gibo
