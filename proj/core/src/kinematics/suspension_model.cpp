#include "gibo/kinematics/suspension_model.hpp"

#include <stdexcept>

#include "gibo/common/errors.hpp"

namespace gibo::kin {

CurveStatistics evaluate_statistics(const HardpointSet& hardpoints, const SweepSpec& sweep,
                                    double track_width, double roll_travel) {
  const std::vector<double> travel = sweep.travel();
  const KinematicCurve curve = evaluate_kinematics(hardpoints, travel);
  return curve_statistics(curve, track_width, roll_travel);
}

SuspensionModel::SuspensionModel(SuspensionFixture fixture, DesignVariables variables)
    : fixture_(std::move(fixture)), variables_(std::move(variables)), bounds_(variables_.bounds()) {
  fixture_.hardpoints.validate();
  fixture_.sweep.validate();
}

NamedValues SuspensionModel::evaluate(const Eigen::VectorXd& design) const {
  if (design.size() != bounds_.dim()) {
    throw std::invalid_argument("SuspensionModel: design has " + std::to_string(design.size()) +
                                " coordinates, expected " + std::to_string(bounds_.dim()));
  }
  try {
    const HardpointSet hp = variables_.apply(fixture_.hardpoints, design);
    return evaluate_statistics(hp, fixture_.sweep, fixture_.track_width, fixture_.roll_travel).as_named();
  } catch (const KinematicLockError& e) {
    throw EvaluationError(std::string("kinematic lock: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw EvaluationError(std::string("invalid geometry: ") + e.what());
  }
}

}  // namespace gibo::kin
