#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>

#include "gibo/kinematics/hardpoints.hpp"

namespace gibo::kin {

/// Rigid motion of the knuckle from its design position: p' = rotation * p + translation.
struct KnucklePose {
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
  Eigen::Vector3d translation = Eigen::Vector3d::Zero();

  Eigen::Vector3d apply(const Eigen::Vector3d& p) const { return rotation * p + translation; }
};

struct PoseSolution {
  KnucklePose pose;
  double lca_angle = 0.0;    // rad, rotation of the LCA about its pivot axis
  double steer_angle = 0.0;  // rad, rotation about the instantaneous kingpin axis
};

/// Constraint violations in meters.
struct ConstraintResiduals {
  double lca = 0.0;      // ball joint off the rigid LCA
  double strut = 0.0;    // strut axis missing the top mount
  double tie_rod = 0.0;  // tie rod length change

  double max() const;
};

/// Symmetric travel grid: `samples` values from -amplitude to +amplitude with an exact zero.
struct SweepSpec {
  double amplitude = 0.08;
  int samples = 33;

  void validate() const;
  std::vector<double> travel() const;
};

/// Wheel attitude over vertical wheel travel. Toe in degrees, positive toe-in; camber in
/// degrees, negative when the top of the wheel leans inboard.
struct KinematicCurve {
  std::vector<double> travel;
  std::vector<double> toe;
  std::vector<double> camber;

  /// Equal lengths, strictly increasing travel that contains 0.
  void validate() const;
};

inline constexpr double kMaxLcaAngle = 0.5;          // rad
inline constexpr double kMaxSteerAngle = 0.5235987755982988;  // 30 deg
inline constexpr double kRootTolerance = 1e-12;      // rad

/// Rigid-link position analysis of one MacPherson corner.
///
/// The lower control arm turns about the front/rear pivot axis. The knuckle carries the
/// lower ball joint, the strut tube (fixed direction in the knuckle, sliding through the
/// top mount), the outer tie rod ball, and the wheel. For a given arm angle the strut
/// direction is fixed by the line from the ball joint to the top mount; the one remaining
/// freedom, rotation about that line, is set by the tie rod length.
class MacphersonKinematics {
 public:
  /// Validates the geometry and caches design lengths.
  explicit MacphersonKinematics(HardpointSet design);

  const HardpointSet& design() const { return design_; }

  /// Pose at a given arm angle. The steer root is bracketed outward from `steer_seed`.
  /// Throws KinematicLockError when no tie-rod solution exists within +-30 deg.
  PoseSolution solve_position(double lca_angle, double steer_seed = 0.0) const;

  /// Pose at a given wheel-center travel, bracketing outward from `seed`.
  PoseSolution solve_travel(double travel, const PoseSolution& seed) const;

  ConstraintResiduals residuals(const PoseSolution& solution) const;

  double toe_deg(const KnucklePose& pose) const;
  double camber_deg(const KnucklePose& pose) const;
  double wheel_center_travel(const KnucklePose& pose) const;

  /// Curve in the order of `travel`. Solutions are continued outward from the design
  /// position on each side of zero, so the result does not depend on input order.
  KinematicCurve sweep(std::span<const double> travel) const;

 private:
  Eigen::Vector3d ball_joint_at(double lca_angle) const;
  KnucklePose pose_for(const Eigen::Vector3d& ball_joint, double steer_angle) const;
  double tie_rod_error(const KnucklePose& pose) const;

  HardpointSet design_;
  Eigen::Vector3d pivot_axis_;     // unit, front -> rear pivot
  Eigen::Vector3d strut_axis_;     // unit, ball joint -> top mount at design
  double tie_rod_length_ = 0.0;
  double lca_front_arm_ = 0.0;
  double lca_rear_arm_ = 0.0;
  double side_ = 1.0;              // +1 for a left corner, -1 for a right corner
};

/// Knuckle pose at a given LCA angle for the design geometry.
KnucklePose solve_suspension_position(const HardpointSet& hardpoints, double lca_angle);

/// Toe and camber over the travel grid.
KinematicCurve evaluate_kinematics(const HardpointSet& hardpoints, std::span<const double> travel);

}  // namespace gibo::kin
