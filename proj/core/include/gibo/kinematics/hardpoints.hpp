#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "gibo/common/domain.hpp"

namespace gibo::kin {

// Attachment points of one MacPherson corner, vehicle frame (x forward, y left, z up), meters.
enum class Hardpoint : int {
  StrutTopMount = 0,
  LcaFrontPivot,
  LcaRearPivot,
  LowerBallJoint,
  InnerTieRod,
  OuterTieRod,
  WheelCenter,
  SpindleOuter,
};

inline constexpr std::size_t kHardpointCount = 8;

const std::array<Hardpoint, kHardpointCount>& all_hardpoints();
std::string_view hardpoint_name(Hardpoint point);
/// Throws std::invalid_argument for an unknown name.
Hardpoint hardpoint_from_name(std::string_view name);

// Minimum separations that keep the kingpin axis and the tie rod well defined.
inline constexpr double kMinKingpinLength = 0.05;
inline constexpr double kMinTieRodLength = 0.05;

class HardpointSet {
 public:
  Eigen::Vector3d& operator[](Hardpoint p) { return points_[static_cast<std::size_t>(p)]; }
  const Eigen::Vector3d& operator[](Hardpoint p) const { return points_[static_cast<std::size_t>(p)]; }

  /// Throws std::invalid_argument when the geometry is degenerate.
  void validate() const;

 private:
  std::array<Eigen::Vector3d, kHardpointCount> points_{};
};

/// One free coordinate of one hardpoint with its search interval.
struct FreeCoordinate {
  Hardpoint hardpoint = Hardpoint::OuterTieRod;
  int axis = 0;  // 0 = x, 1 = y, 2 = z
  double lower = 0.0;
  double upper = 0.0;

  /// "outer_tie_rod.x" style name.
  std::string name() const;
};

/// Parses "outer_tie_rod.z" into (hardpoint, axis); bounds are left at zero.
FreeCoordinate parse_free_coordinate(std::string_view name);

/// Which hardpoint coordinates are design variables; everything else stays nominal.
class DesignVariables {
 public:
  explicit DesignVariables(std::vector<FreeCoordinate> coordinates);

  Eigen::Index dim() const { return static_cast<Eigen::Index>(coordinates_.size()); }
  const std::vector<FreeCoordinate>& coordinates() const { return coordinates_; }
  std::vector<std::string> names() const;
  DomainBounds bounds() const;

  HardpointSet apply(const HardpointSet& nominal, const Eigen::VectorXd& design) const;
  Eigen::VectorXd extract(const HardpointSet& hardpoints) const;

 private:
  std::vector<FreeCoordinate> coordinates_;
};

}  // namespace gibo::kin
