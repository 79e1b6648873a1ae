#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Core>

namespace gibo {

/// Axis-aligned box [lower, upper] in R^m.
class DomainBounds {
 public:
  DomainBounds(Eigen::VectorXd lower, Eigen::VectorXd upper);

  static DomainBounds unit(Eigen::Index dim);

  Eigen::Index dim() const { return lower_.size(); }
  const Eigen::VectorXd& lower() const { return lower_; }
  const Eigen::VectorXd& upper() const { return upper_; }
  Eigen::VectorXd extent() const { return upper_ - lower_; }
  Eigen::VectorXd center() const { return 0.5 * (lower_ + upper_); }

  bool contains(const Eigen::Ref<const Eigen::VectorXd>& point) const;
  Eigen::VectorXd clamp(const Eigen::Ref<const Eigen::VectorXd>& point) const;

  // Affine maps between the box and [0,1]^m.
  Eigen::VectorXd to_unit(const Eigen::Ref<const Eigen::VectorXd>& point) const;
  Eigen::VectorXd from_unit(const Eigen::Ref<const Eigen::VectorXd>& unit_point) const;

  bool operator==(const DomainBounds& other) const;

 private:
  Eigen::VectorXd lower_;
  Eigen::VectorXd upper_;
};

/// Deterministic generator for a named sub-stream of a user seed.
std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t index = 0);

}  // namespace gibo
