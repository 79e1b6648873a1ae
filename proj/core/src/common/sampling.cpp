#include "gibo/common/sampling.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace gibo {

namespace {

// Uniform on the open interval (0, 1).
double open_unit(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  double u = dist(rng);
  while (u <= 0.0) u = dist(rng);
  return u;
}

Eigen::VectorXd strictly_inside(const DomainBounds& bounds, Eigen::VectorXd p) {
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    const double lo = bounds.lower()[i];
    const double hi = bounds.upper()[i];
    if (p[i] <= lo) p[i] = std::nextafter(lo, hi);
    if (p[i] >= hi) p[i] = std::nextafter(hi, lo);
  }
  return p;
}

}  // namespace

std::vector<Eigen::VectorXd> latin_hypercube(const DomainBounds& bounds, int count, std::mt19937_64& rng) {
  if (count < 1) throw std::invalid_argument("latin_hypercube: count must be >= 1");
  const Eigen::Index m = bounds.dim();
  Eigen::MatrixXd unit(count, m);
  std::vector<int> perm(static_cast<std::size_t>(count));
  for (Eigen::Index d = 0; d < m; ++d) {
    std::iota(perm.begin(), perm.end(), 0);
    // Fisher-Yates with our own index draws; std::shuffle is implementation-defined.
    for (int i = count - 1; i > 0; --i) {
      std::uniform_int_distribution<int> pick(0, i);
      std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(pick(rng))]);
    }
    for (int i = 0; i < count; ++i) {
      unit(i, d) = (perm[static_cast<std::size_t>(i)] + open_unit(rng)) / count;
    }
  }
  std::vector<Eigen::VectorXd> points;
  points.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const Eigen::VectorXd u = unit.row(i).transpose();
    const Eigen::VectorXd p = bounds.lower() + (u.array() * bounds.extent().array()).matrix();
    points.push_back(strictly_inside(bounds, p));
  }
  return points;
}

Eigen::VectorXd uniform_point(const DomainBounds& bounds, std::mt19937_64& rng) {
  Eigen::VectorXd p(bounds.dim());
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    p[i] = bounds.lower()[i] + open_unit(rng) * (bounds.upper()[i] - bounds.lower()[i]);
  }
  return strictly_inside(bounds, p);
}

}  // namespace gibo
