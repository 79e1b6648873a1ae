#pragma once

#include "gibo/common/discipline_model.hpp"
#include "gibo/kinematics/curve_statistics.hpp"
#include "gibo/kinematics/fixture.hpp"
#include "gibo/kinematics/hardpoints.hpp"

namespace gibo::kin {

/// Sweeps the geometry and reduces the toe/camber curves to statistics.
/// Throws KinematicLockError or std::invalid_argument for unusable geometry.
CurveStatistics evaluate_statistics(const HardpointSet& hardpoints, const SweepSpec& sweep,
                                    double track_width, double roll_travel);

/// Built-in analytic discipline model: free hardpoint coordinates -> curve statistics.
class SuspensionModel final : public DisciplineModel {
 public:
  SuspensionModel(SuspensionFixture fixture, DesignVariables variables);

  const std::vector<std::string>& output_names() const override { return curve_statistic_names(); }
  const DomainBounds& bounds() const override { return bounds_; }
  std::vector<std::string> input_names() const override { return variables_.names(); }
  NamedValues evaluate(const Eigen::VectorXd& design) const override;
  bool is_pure() const override { return true; }

  const SuspensionFixture& fixture() const { return fixture_; }
  const DesignVariables& variables() const { return variables_; }

 private:
  SuspensionFixture fixture_;
  DesignVariables variables_;
  DomainBounds bounds_;
};

}  // namespace gibo::kin
