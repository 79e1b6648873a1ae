#include "gibo/common/domain.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace gibo {

DomainBounds::DomainBounds(Eigen::VectorXd lower, Eigen::VectorXd upper)
    : lower_(std::move(lower)), upper_(std::move(upper)) {
  if (lower_.size() < 1) throw std::invalid_argument("DomainBounds: dimension must be at least 1");
  if (lower_.size() != upper_.size()) {
    throw std::invalid_argument("DomainBounds: lower and upper have different dimensions");
  }
  for (Eigen::Index i = 0; i < lower_.size(); ++i) {
    if (!std::isfinite(lower_[i]) || !std::isfinite(upper_[i]) || !(lower_[i] < upper_[i])) {
      throw std::invalid_argument("DomainBounds: coordinate " + std::to_string(i) +
                                  " needs finite lower < upper (got " + std::to_string(lower_[i]) +
                                  ", " + std::to_string(upper_[i]) + ")");
    }
  }
}

DomainBounds DomainBounds::unit(Eigen::Index dim) {
  return DomainBounds(Eigen::VectorXd::Zero(dim), Eigen::VectorXd::Ones(dim));
}

bool DomainBounds::contains(const Eigen::Ref<const Eigen::VectorXd>& point) const {
  if (point.size() != dim()) return false;
  return ((point.array() >= lower_.array()) && (point.array() <= upper_.array())).all();
}

Eigen::VectorXd DomainBounds::clamp(const Eigen::Ref<const Eigen::VectorXd>& point) const {
  return point.cwiseMax(lower_).cwiseMin(upper_);
}

Eigen::VectorXd DomainBounds::to_unit(const Eigen::Ref<const Eigen::VectorXd>& point) const {
  return ((point - lower_).array() / (upper_ - lower_).array()).matrix();
}

Eigen::VectorXd DomainBounds::from_unit(const Eigen::Ref<const Eigen::VectorXd>& unit_point) const {
  // Clamp after the affine map so round-off never leaves the box.
  Eigen::VectorXd p = lower_ + (unit_point.array() * (upper_ - lower_).array()).matrix();
  return clamp(p);
}

bool DomainBounds::operator==(const DomainBounds& other) const {
  return lower_.size() == other.lower_.size() && lower_ == other.lower_ && upper_ == other.upper_;
}

std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(index),
                    static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace gibo
