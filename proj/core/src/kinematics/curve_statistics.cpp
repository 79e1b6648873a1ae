#include "gibo/kinematics/curve_statistics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace gibo::kin {

namespace {

// Least-squares slope of y over x for the five samples centred on index `mid`.
double central_slope(const std::vector<double>& x, const std::vector<double>& y, std::size_t mid) {
  double xm = 0.0;
  double ym = 0.0;
  for (std::size_t i = mid - 2; i <= mid + 2; ++i) {
    xm += x[i];
    ym += y[i];
  }
  xm /= 5.0;
  ym /= 5.0;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = mid - 2; i <= mid + 2; ++i) {
    sxy += (x[i] - xm) * (y[i] - ym);
    sxx += (x[i] - xm) * (x[i] - xm);
  }
  return sxy / sxx;
}

double interpolate(const std::vector<double>& x, const std::vector<double>& y, double at) {
  if (at < x.front() || at > x.back()) {
    throw std::invalid_argument("curve_statistics: travel " + std::to_string(at) +
                                " m lies outside the curve");
  }
  const auto it = std::lower_bound(x.begin(), x.end(), at);
  const auto hi = static_cast<std::size_t>(it - x.begin());
  if (x[hi] == at) return y[hi];
  const std::size_t lo = hi - 1;
  const double w = (at - x[lo]) / (x[hi] - x[lo]);
  return y[lo] + w * (y[hi] - y[lo]);
}

}  // namespace

NamedValues CurveStatistics::as_named() const {
  return {{"bump_steer", bump_steer},
          {"roll_steer", roll_steer},
          {"static_toe", static_toe},
          {"static_camber", static_camber},
          {"camber_gain", camber_gain}};
}

const std::vector<std::string>& curve_statistic_names() {
  static const std::vector<std::string> names = {"bump_steer", "roll_steer", "static_toe",
                                                 "static_camber", "camber_gain"};
  return names;
}

CurveStatistics curve_statistics(const KinematicCurve& curve, double track_width, double roll_travel) {
  curve.validate();
  if (!(track_width > 0.0)) throw std::invalid_argument("curve_statistics: track width must be positive");
  if (!(roll_travel > 0.0)) throw std::invalid_argument("curve_statistics: roll travel must be positive");
  const auto zero = static_cast<std::size_t>(
      std::find(curve.travel.begin(), curve.travel.end(), 0.0) - curve.travel.begin());
  if (zero < 2 || zero + 2 >= curve.travel.size()) {
    throw std::invalid_argument("curve_statistics: need two samples on each side of zero travel");
  }
  CurveStatistics s;
  s.static_toe = curve.toe[zero];
  s.static_camber = curve.camber[zero];
  s.bump_steer = central_slope(curve.travel, curve.toe, zero);
  s.camber_gain = central_slope(curve.travel, curve.camber, zero);
  const double roll_deg = std::atan(2.0 * roll_travel / track_width) * 180.0 / std::numbers::pi;
  s.roll_steer = (interpolate(curve.travel, curve.toe, roll_travel) -
                  interpolate(curve.travel, curve.toe, -roll_travel)) /
                 (2.0 * roll_deg);
  return s;
}

}  // namespace gibo::kin
