#pragma once

#include "gibo/common/discipline_model.hpp"
#include "gibo/kinematics/macpherson.hpp"

namespace gibo::kin {

inline constexpr double kRollTravel = 0.02;        // m, wheel travel per side for roll steer
inline constexpr double kDefaultTrackWidth = 1.6;  // m

struct CurveStatistics {
  double bump_steer = 0.0;     // deg/m, least-squares toe slope over the central 5 samples
  double roll_steer = 0.0;     // deg/deg
  double static_toe = 0.0;     // deg, toe at zero travel
  double static_camber = 0.0;  // deg, camber at zero travel
  double camber_gain = 0.0;    // deg/m, least-squares camber slope over the central 5 samples

  NamedValues as_named() const;
};

/// Statistic names produced by as_named(), in a fixed order.
const std::vector<std::string>& curve_statistic_names();

/// Roll steer treats +-roll_travel of antisymmetric wheel travel as a body roll of
/// atan(2 roll_travel / track_width); toe between samples is interpolated linearly.
CurveStatistics curve_statistics(const KinematicCurve& curve, double track_width = kDefaultTrackWidth,
                                 double roll_travel = kRollTravel);

}  // namespace gibo::kin
