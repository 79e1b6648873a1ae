#include "gibo/kinematics/macpherson.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>

#include <Eigen/Geometry>
#include <boost/math/tools/toms748_solve.hpp>

#include "gibo/common/errors.hpp"

namespace gibo::kin {

namespace {

constexpr double kRadToDeg = 180.0 / std::numbers::pi;
constexpr double kSteerSearchStep = 0.25 / kRadToDeg;
constexpr double kLcaSearchStep = 0.01;

Eigen::Matrix3d rotation_between(const Eigen::Vector3d& from, const Eigen::Vector3d& to) {
  if (from == to) return Eigen::Matrix3d::Identity();
  const Eigen::Vector3d cross = from.cross(to);
  const double s = cross.norm();
  if (s == 0.0) {
    // Antiparallel strut directions cannot occur within the LCA angle range.
    throw KinematicLockError("strut axis flipped", std::numeric_limits<double>::quiet_NaN());
  }
  return Eigen::AngleAxisd(std::atan2(s, from.dot(to)), cross / s).toRotationMatrix();
}

// Brackets a root of f by stepping outward from `seed` alternately on both sides, then
// refines it with TOMS 748 (bisection safeguarded inverse interpolation). Returns the
// bracket end with the smaller |f|, or nullopt when no sign change is found in [lo, hi].
// f may throw KinematicLockError, which closes that side of the search.
template <class F>
std::optional<double> root_near(F&& f, double seed, double f_seed, double step, double lo, double hi) {
  if (f_seed == 0.0) return seed;
  double prev_up = seed;
  double prev_dn = seed;
  double f_prev_up = f_seed;
  double f_prev_dn = f_seed;
  bool up_open = true;
  bool dn_open = true;
  std::optional<std::pair<double, double>> bracket;
  double fa = 0.0;
  double fb = 0.0;
  for (int k = 1; (up_open || dn_open) && !bracket; ++k) {
    if (up_open) {
      const double x = std::min(seed + k * step, hi);
      try {
        const double fx = f(x);
        if (fx == 0.0) return x;
        if ((fx > 0.0) != (f_prev_up > 0.0)) {
          bracket = {prev_up, x};
          fa = f_prev_up;
          fb = fx;
          break;
        }
        prev_up = x;
        f_prev_up = fx;
      } catch (const KinematicLockError&) {
        up_open = false;
      }
      if (x >= hi) up_open = false;
    }
    if (dn_open) {
      const double x = std::max(seed - k * step, lo);
      try {
        const double fx = f(x);
        if (fx == 0.0) return x;
        if ((fx > 0.0) != (f_prev_dn > 0.0)) {
          bracket = {x, prev_dn};
          fa = fx;
          fb = f_prev_dn;
          break;
        }
        prev_dn = x;
        f_prev_dn = fx;
      } catch (const KinematicLockError&) {
        dn_open = false;
      }
      if (x <= lo) dn_open = false;
    }
  }
  if (!bracket) return std::nullopt;

  std::uintmax_t max_iter = 200;
  const auto tol = [](double a, double b) { return std::abs(b - a) <= kRootTolerance; };
  const auto [a, b] = boost::math::tools::toms748_solve(f, bracket->first, bracket->second, fa, fb, tol, max_iter);
  if (a == b) return a;
  return std::abs(f(a)) <= std::abs(f(b)) ? a : b;
}

}  // namespace

double ConstraintResiduals::max() const { return std::max({lca, strut, tie_rod}); }

void SweepSpec::validate() const {
  if (!(amplitude > 0.0) || !std::isfinite(amplitude)) {
    throw std::invalid_argument("SweepSpec: amplitude must be positive");
  }
  if (samples < 5 || samples % 2 == 0) {
    throw std::invalid_argument("SweepSpec: samples must be odd and at least 5");
  }
}

std::vector<double> SweepSpec::travel() const {
  validate();
  const int half = samples / 2;
  const double step = amplitude / half;
  std::vector<double> out(static_cast<std::size_t>(samples));
  for (int i = 0; i < samples; ++i) out[static_cast<std::size_t>(i)] = (i - half) * step;
  out[static_cast<std::size_t>(half)] = 0.0;
  out.front() = -amplitude;
  out.back() = amplitude;
  return out;
}

void KinematicCurve::validate() const {
  if (toe.size() != travel.size() || camber.size() != travel.size()) {
    throw std::invalid_argument("KinematicCurve: travel, toe and camber lengths differ");
  }
  if (travel.empty()) throw std::invalid_argument("KinematicCurve: empty");
  for (std::size_t i = 1; i < travel.size(); ++i) {
    if (!(travel[i] > travel[i - 1])) {
      throw std::invalid_argument("KinematicCurve: travel must be strictly increasing");
    }
  }
  if (std::find(travel.begin(), travel.end(), 0.0) == travel.end()) {
    throw std::invalid_argument("KinematicCurve: travel must contain 0");
  }
}

MacphersonKinematics::MacphersonKinematics(HardpointSet design) : design_(std::move(design)) {
  design_.validate();
  const auto& d = design_;
  pivot_axis_ = (d[Hardpoint::LcaRearPivot] - d[Hardpoint::LcaFrontPivot]).normalized();
  strut_axis_ = (d[Hardpoint::StrutTopMount] - d[Hardpoint::LowerBallJoint]).normalized();
  tie_rod_length_ = (d[Hardpoint::OuterTieRod] - d[Hardpoint::InnerTieRod]).norm();
  lca_front_arm_ = (d[Hardpoint::LowerBallJoint] - d[Hardpoint::LcaFrontPivot]).norm();
  lca_rear_arm_ = (d[Hardpoint::LowerBallJoint] - d[Hardpoint::LcaRearPivot]).norm();
  side_ = (d[Hardpoint::SpindleOuter] - d[Hardpoint::WheelCenter]).y() >= 0.0 ? 1.0 : -1.0;
}

Eigen::Vector3d MacphersonKinematics::ball_joint_at(double lca_angle) const {
  const Eigen::Vector3d& ball = design_[Hardpoint::LowerBallJoint];
  if (lca_angle == 0.0) return ball;
  const Eigen::Vector3d& pivot = design_[Hardpoint::LcaFrontPivot];
  return pivot + Eigen::AngleAxisd(lca_angle, pivot_axis_) * (ball - pivot);
}

KnucklePose MacphersonKinematics::pose_for(const Eigen::Vector3d& ball_joint, double steer_angle) const {
  const Eigen::Vector3d kingpin = (design_[Hardpoint::StrutTopMount] - ball_joint).normalized();
  Eigen::Matrix3d rotation = rotation_between(strut_axis_, kingpin);
  if (steer_angle != 0.0) rotation = Eigen::AngleAxisd(steer_angle, kingpin).toRotationMatrix() * rotation;
  KnucklePose pose;
  pose.rotation = rotation;
  pose.translation = ball_joint - rotation * design_[Hardpoint::LowerBallJoint];
  return pose;
}

double MacphersonKinematics::tie_rod_error(const KnucklePose& pose) const {
  return (pose.apply(design_[Hardpoint::OuterTieRod]) - design_[Hardpoint::InnerTieRod]).norm() -
         tie_rod_length_;
}

PoseSolution MacphersonKinematics::solve_position(double lca_angle, double steer_seed) const {
  if (!(std::abs(lca_angle) <= kMaxLcaAngle)) {
    throw std::invalid_argument("solve_position: LCA angle " + std::to_string(lca_angle) +
                                " rad is outside +-0.5 rad");
  }
  const Eigen::Vector3d ball = ball_joint_at(lca_angle);
  const auto error_at = [&](double steer) { return tie_rod_error(pose_for(ball, steer)); };
  const double seed = std::clamp(steer_seed, -kMaxSteerAngle, kMaxSteerAngle);
  const std::optional<double> steer =
      root_near(error_at, seed, error_at(seed), kSteerSearchStep, -kMaxSteerAngle, kMaxSteerAngle);
  if (!steer) {
    throw KinematicLockError("no tie-rod closure within +-30 deg steer at LCA angle " +
                                 std::to_string(lca_angle) + " rad",
                             std::numeric_limits<double>::quiet_NaN());
  }
  return {pose_for(ball, *steer), lca_angle, *steer};
}

double MacphersonKinematics::wheel_center_travel(const KnucklePose& pose) const {
  const Eigen::Vector3d& wheel = design_[Hardpoint::WheelCenter];
  return pose.apply(wheel).z() - wheel.z();
}

PoseSolution MacphersonKinematics::solve_travel(double travel, const PoseSolution& seed) const {
  double steer_seed = seed.steer_angle;
  const auto error_at = [&](double angle) {
    return wheel_center_travel(solve_position(angle, steer_seed).pose) - travel;
  };
  try {
    const double f_seed = error_at(seed.lca_angle);
    const std::optional<double> angle =
        root_near(error_at, seed.lca_angle, f_seed, kLcaSearchStep, -kMaxLcaAngle, kMaxLcaAngle);
    if (!angle) {
      throw KinematicLockError("wheel travel " + std::to_string(travel) + " m is out of reach", travel);
    }
    return solve_position(*angle, steer_seed);
  } catch (const KinematicLockError& e) {
    if (std::isnan(e.travel())) throw KinematicLockError(e.what(), travel);
    throw;
  }
}

ConstraintResiduals MacphersonKinematics::residuals(const PoseSolution& solution) const {
  const auto& d = design_;
  const KnucklePose& pose = solution.pose;
  const Eigen::Vector3d ball = pose.apply(d[Hardpoint::LowerBallJoint]);
  ConstraintResiduals r;
  r.lca = std::max({std::abs((ball - d[Hardpoint::LcaFrontPivot]).norm() - lca_front_arm_),
                    std::abs((ball - d[Hardpoint::LcaRearPivot]).norm() - lca_rear_arm_),
                    (ball - ball_joint_at(solution.lca_angle)).norm()});
  const Eigen::Vector3d axis = (pose.rotation * strut_axis_).normalized();
  const Eigen::Vector3d to_top = d[Hardpoint::StrutTopMount] - ball;
  r.strut = (to_top - to_top.dot(axis) * axis).norm();
  r.tie_rod = std::abs(tie_rod_error(pose));
  return r;
}

double MacphersonKinematics::toe_deg(const KnucklePose& pose) const {
  const Eigen::Vector3d spin =
      pose.rotation * (design_[Hardpoint::SpindleOuter] - design_[Hardpoint::WheelCenter]);
  return std::atan2(spin.x(), side_ * spin.y()) * kRadToDeg;
}

double MacphersonKinematics::camber_deg(const KnucklePose& pose) const {
  const Eigen::Vector3d spin =
      pose.rotation * (design_[Hardpoint::SpindleOuter] - design_[Hardpoint::WheelCenter]);
  // Negative when the top of the wheel leans inboard. Subtracting from 0.0 avoids printing -0.
  return 0.0 - std::atan2(spin.z(), std::hypot(spin.x(), spin.y())) * kRadToDeg;
}

KinematicCurve MacphersonKinematics::sweep(std::span<const double> travel) const {
  const std::size_t n = travel.size();
  KinematicCurve curve;
  curve.travel.assign(travel.begin(), travel.end());
  curve.toe.resize(n);
  curve.camber.resize(n);

  std::vector<std::size_t> up;
  std::vector<std::size_t> down;
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(travel[i])) throw std::invalid_argument("sweep: travel must be finite");
    (travel[i] >= 0.0 ? up : down).push_back(i);
  }
  std::stable_sort(up.begin(), up.end(), [&](auto a, auto b) { return travel[a] < travel[b]; });
  std::stable_sort(down.begin(), down.end(), [&](auto a, auto b) { return travel[a] > travel[b]; });

  for (const auto* branch : {&up, &down}) {
    PoseSolution previous;  // design position
    for (std::size_t i : *branch) {
      previous = solve_travel(travel[i], previous);
      curve.toe[i] = toe_deg(previous.pose);
      curve.camber[i] = camber_deg(previous.pose);
    }
  }
  return curve;
}

KnucklePose solve_suspension_position(const HardpointSet& hardpoints, double lca_angle) {
  return MacphersonKinematics(hardpoints).solve_position(lca_angle).pose;
}

KinematicCurve evaluate_kinematics(const HardpointSet& hardpoints, std::span<const double> travel) {
  return MacphersonKinematics(hardpoints).sweep(travel);
}

}  // namespace gibo::kin
