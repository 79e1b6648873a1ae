#pragma once

#include <random>
#include <vector>

#include <Eigen/Core>

#include "gibo/common/domain.hpp"

namespace gibo {

/// Latin hypercube sample of `count` points: each coordinate is split into `count`
/// equal strata and every stratum holds exactly one point. Points are strictly
/// inside the box.
std::vector<Eigen::VectorXd> latin_hypercube(const DomainBounds& bounds, int count, std::mt19937_64& rng);

/// Uniform draw strictly inside the box.
Eigen::VectorXd uniform_point(const DomainBounds& bounds, std::mt19937_64& rng);

}  // namespace gibo
