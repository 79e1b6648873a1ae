#pragma once

#include <functional>

#include <Eigen/Core>

#include "gibo/common/domain.hpp"

namespace gibo::optim {

/// Returns f(x) and, when `gradient` is non-null, writes df/dx into it.
/// Non-finite values are treated as infeasible by the line search.
using Objective = std::function<double(const Eigen::VectorXd& x, Eigen::VectorXd* gradient)>;

struct BoxMinimizerOptions {
  int max_iterations = 100;
  int memory = 8;
  double projected_gradient_tolerance = 1e-8;
  double relative_function_tolerance = 1e-12;
  double armijo = 1e-4;
  int max_backtracks = 40;
};

struct BoxMinimizerResult {
  Eigen::VectorXd x;
  double value = 0.0;
  int iterations = 0;
  int evaluations = 0;
  bool converged = false;
};

/// Projected limited-memory BFGS over a box. Variables pinned at a bound with the
/// gradient pointing outward are held fixed; the quasi-Newton direction acts on the
/// rest and every trial point is projected back into the box.
BoxMinimizerResult minimize_in_box(const Objective& objective, const Eigen::VectorXd& start,
                                   const DomainBounds& bounds, const BoxMinimizerOptions& options = {});

/// Central differences with per-coordinate step `step * extent`, shifted inward at the
/// bounds so that every probe stays inside the box.
Eigen::VectorXd finite_difference_gradient(const std::function<double(const Eigen::VectorXd&)>& f,
                                           const Eigen::VectorXd& x, const DomainBounds& bounds,
                                           double step);

}  // namespace gibo::optim
