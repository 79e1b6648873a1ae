#include "gibo/kinematics/hardpoints.hpp"

#include <set>
#include <stdexcept>

#include <Eigen/Geometry>

namespace gibo::kin {

namespace {

constexpr std::array<std::string_view, kHardpointCount> kNames = {
    "strut_top_mount", "lca_front_pivot", "lca_rear_pivot",  "lower_ball_joint",
    "inner_tie_rod",   "outer_tie_rod",   "wheel_center",    "spindle_outer",
};

}  // namespace

const std::array<Hardpoint, kHardpointCount>& all_hardpoints() {
  static const std::array<Hardpoint, kHardpointCount> points = {
      Hardpoint::StrutTopMount, Hardpoint::LcaFrontPivot, Hardpoint::LcaRearPivot,
      Hardpoint::LowerBallJoint, Hardpoint::InnerTieRod,  Hardpoint::OuterTieRod,
      Hardpoint::WheelCenter,    Hardpoint::SpindleOuter,
  };
  return points;
}

std::string_view hardpoint_name(Hardpoint point) { return kNames[static_cast<std::size_t>(point)]; }

Hardpoint hardpoint_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kNames.size(); ++i) {
    if (kNames[i] == name) return static_cast<Hardpoint>(i);
  }
  throw std::invalid_argument("unknown hardpoint '" + std::string(name) + "'");
}

void HardpointSet::validate() const {
  for (Hardpoint p : all_hardpoints()) {
    if (!(*this)[p].allFinite()) {
      throw std::invalid_argument("hardpoint " + std::string(hardpoint_name(p)) + " is not finite");
    }
  }
  const auto& self = *this;
  if ((self[Hardpoint::StrutTopMount] - self[Hardpoint::LowerBallJoint]).norm() < kMinKingpinLength) {
    throw std::invalid_argument("lower_ball_joint and strut_top_mount are closer than 0.05 m");
  }
  const Eigen::Vector3d pivot_axis = self[Hardpoint::LcaRearPivot] - self[Hardpoint::LcaFrontPivot];
  if (pivot_axis.norm() < 1e-6) {
    throw std::invalid_argument("lca_front_pivot and lca_rear_pivot coincide");
  }
  if ((self[Hardpoint::OuterTieRod] - self[Hardpoint::InnerTieRod]).norm() < kMinTieRodLength) {
    throw std::invalid_argument("tie rod is shorter than 0.05 m");
  }
  // The ball joint must swing on a proper circle around the pivot axis.
  const Eigen::Vector3d arm = self[Hardpoint::LowerBallJoint] - self[Hardpoint::LcaFrontPivot];
  if (arm.cross(pivot_axis.normalized()).norm() < 1e-3) {
    throw std::invalid_argument("lower_ball_joint lies on the LCA pivot axis");
  }
  if ((self[Hardpoint::SpindleOuter] - self[Hardpoint::WheelCenter]).norm() < 1e-3) {
    throw std::invalid_argument("spindle_outer coincides with wheel_center");
  }
}

std::string FreeCoordinate::name() const {
  static constexpr std::array<char, 3> kAxes = {'x', 'y', 'z'};
  return std::string(hardpoint_name(hardpoint)) + "." + kAxes.at(static_cast<std::size_t>(axis));
}

FreeCoordinate parse_free_coordinate(std::string_view name) {
  const auto dot = name.rfind('.');
  if (dot == std::string_view::npos || dot + 2 != name.size()) {
    throw std::invalid_argument("coordinate '" + std::string(name) + "' must look like <hardpoint>.<x|y|z>");
  }
  FreeCoordinate c;
  c.hardpoint = hardpoint_from_name(name.substr(0, dot));
  switch (name.back()) {
    case 'x': c.axis = 0; break;
    case 'y': c.axis = 1; break;
    case 'z': c.axis = 2; break;
    default:
      throw std::invalid_argument("coordinate '" + std::string(name) + "' has an axis other than x, y, z");
  }
  return c;
}

DesignVariables::DesignVariables(std::vector<FreeCoordinate> coordinates)
    : coordinates_(std::move(coordinates)) {
  if (coordinates_.empty() || coordinates_.size() > 3 * kHardpointCount) {
    throw std::invalid_argument("DesignVariables: need between 1 and 24 free coordinates");
  }
  std::set<std::string> seen;
  for (const auto& c : coordinates_) {
    if (c.axis < 0 || c.axis > 2) throw std::invalid_argument("DesignVariables: axis out of range");
    if (!seen.insert(c.name()).second) {
      throw std::invalid_argument("DesignVariables: coordinate " + c.name() + " listed twice");
    }
    if (!(c.lower < c.upper)) {
      throw std::invalid_argument("DesignVariables: coordinate " + c.name() + " has lower bound " +
                                  std::to_string(c.lower) + " not below upper bound " +
                                  std::to_string(c.upper));
    }
  }
}

std::vector<std::string> DesignVariables::names() const {
  std::vector<std::string> out;
  for (const auto& c : coordinates_) out.push_back(c.name());
  return out;
}

DomainBounds DesignVariables::bounds() const {
  Eigen::VectorXd lo(dim());
  Eigen::VectorXd hi(dim());
  for (Eigen::Index i = 0; i < dim(); ++i) {
    lo[i] = coordinates_[static_cast<std::size_t>(i)].lower;
    hi[i] = coordinates_[static_cast<std::size_t>(i)].upper;
  }
  return DomainBounds(lo, hi);
}

HardpointSet DesignVariables::apply(const HardpointSet& nominal, const Eigen::VectorXd& design) const {
  if (design.size() != dim()) throw std::invalid_argument("DesignVariables::apply: dimension mismatch");
  HardpointSet out = nominal;
  for (Eigen::Index i = 0; i < dim(); ++i) {
    const auto& c = coordinates_[static_cast<std::size_t>(i)];
    out[c.hardpoint][c.axis] = design[i];
  }
  return out;
}

Eigen::VectorXd DesignVariables::extract(const HardpointSet& hardpoints) const {
  Eigen::VectorXd y(dim());
  for (Eigen::Index i = 0; i < dim(); ++i) {
    const auto& c = coordinates_[static_cast<std::size_t>(i)];
    y[i] = hardpoints[c.hardpoint][c.axis];
  }
  return y;
}

}  // namespace gibo::kin
