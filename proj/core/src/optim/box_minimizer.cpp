#include "gibo/optim/box_minimizer.hpp"

#include <cmath>
#include <deque>
#include <limits>

namespace gibo::optim {

namespace {

Eigen::VectorXd projected_gradient(const Eigen::VectorXd& x, const Eigen::VectorXd& g,
                                   const DomainBounds& bounds) {
  Eigen::VectorXd pg = g;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if ((x[i] <= bounds.lower()[i] && g[i] > 0.0) || (x[i] >= bounds.upper()[i] && g[i] < 0.0)) {
      pg[i] = 0.0;
    }
  }
  return pg;
}

struct CurvaturePair {
  Eigen::VectorXd s;
  Eigen::VectorXd y;
  double rho;
};

// Two-loop recursion restricted to the free coordinates (mask = 1).
Eigen::VectorXd lbfgs_direction(const Eigen::VectorXd& g, const Eigen::VectorXd& mask,
                                const std::deque<CurvaturePair>& history) {
  Eigen::VectorXd q = g.cwiseProduct(mask);
  std::vector<double> alpha(history.size());
  for (std::size_t k = history.size(); k-- > 0;) {
    const auto& p = history[k];
    alpha[k] = p.rho * p.s.cwiseProduct(mask).dot(q);
    q -= alpha[k] * p.y.cwiseProduct(mask);
  }
  if (!history.empty()) {
    const auto& last = history.back();
    const double yy = last.y.cwiseProduct(mask).squaredNorm();
    const double sy = last.s.cwiseProduct(mask).dot(last.y.cwiseProduct(mask));
    if (yy > 0.0 && sy > 0.0) q *= sy / yy;
  }
  for (std::size_t k = 0; k < history.size(); ++k) {
    const auto& p = history[k];
    const double beta = p.rho * p.y.cwiseProduct(mask).dot(q);
    q += (alpha[k] - beta) * p.s.cwiseProduct(mask);
  }
  return -q.cwiseProduct(mask);
}

}  // namespace

BoxMinimizerResult minimize_in_box(const Objective& objective, const Eigen::VectorXd& start,
                                   const DomainBounds& bounds, const BoxMinimizerOptions& options) {
  BoxMinimizerResult result;
  Eigen::VectorXd x = bounds.clamp(start);
  Eigen::VectorXd g(x.size());
  double f = objective(x, &g);
  ++result.evaluations;
  if (!std::isfinite(f) || !g.allFinite()) {
    result.x = x;
    result.value = f;
    return result;
  }

  std::deque<CurvaturePair> history;
  const double max_extent = bounds.extent().maxCoeff();

  for (int iter = 0; iter < options.max_iterations; ++iter) {
    result.iterations = iter + 1;
    const Eigen::VectorXd pg = projected_gradient(x, g, bounds);
    if (pg.lpNorm<Eigen::Infinity>() <= options.projected_gradient_tolerance) {
      result.converged = true;
      break;
    }
    Eigen::VectorXd mask = (pg.array() != 0.0).cast<double>();
    Eigen::VectorXd d = lbfgs_direction(g, mask, history);
    if (!(d.dot(g) < 0.0)) {
      history.clear();
      d = -pg;
    }
    // Without curvature information, cap the first trial step at a tenth of the box.
    double t = 1.0;
    if (history.empty()) {
      const double dn = d.lpNorm<Eigen::Infinity>();
      if (dn > 0.0) t = std::min(1.0, 0.1 * max_extent / dn);
    }

    bool accepted = false;
    Eigen::VectorXd x_new;
    Eigen::VectorXd g_new(x.size());
    double f_new = std::numeric_limits<double>::infinity();
    for (int bt = 0; bt < options.max_backtracks; ++bt) {
      x_new = bounds.clamp(x + t * d);
      const double decrease = g.dot(x_new - x);
      if (decrease >= 0.0 && (x_new - x).squaredNorm() == 0.0) break;
      f_new = objective(x_new, &g_new);
      ++result.evaluations;
      if (std::isfinite(f_new) && g_new.allFinite() &&
          f_new <= f + options.armijo * std::min(decrease, 0.0)) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) {
      if (!history.empty()) {
        // Retry from steepest descent before giving up.
        history.clear();
        continue;
      }
      result.converged = true;
      break;
    }

    const Eigen::VectorXd s = x_new - x;
    const Eigen::VectorXd y = g_new - g;
    const double sy = s.dot(y);
    if (sy > 1e-12 * s.norm() * y.norm()) {
      history.push_back({s, y, 1.0 / sy});
      if (static_cast<int>(history.size()) > options.memory) history.pop_front();
    }
    const double df = f - f_new;
    x = x_new;
    g = g_new;
    f = f_new;
    if (df <= options.relative_function_tolerance * (1.0 + std::abs(f))) {
      result.converged = true;
      break;
    }
  }
  result.x = x;
  result.value = f;
  return result;
}

Eigen::VectorXd finite_difference_gradient(const std::function<double(const Eigen::VectorXd&)>& f,
                                           const Eigen::VectorXd& x, const DomainBounds& bounds,
                                           double step) {
  Eigen::VectorXd grad(x.size());
  Eigen::VectorXd probe = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double h = step * (bounds.upper()[i] - bounds.lower()[i]);
    double lo = x[i] - h;
    double hi = x[i] + h;
    if (lo < bounds.lower()[i]) {
      lo = bounds.lower()[i];
      hi = std::min(lo + 2.0 * h, bounds.upper()[i]);
    } else if (hi > bounds.upper()[i]) {
      hi = bounds.upper()[i];
      lo = std::max(hi - 2.0 * h, bounds.lower()[i]);
    }
    probe[i] = hi;
    const double fh = f(probe);
    probe[i] = lo;
    const double fl = f(probe);
    probe[i] = x[i];
    grad[i] = (fh - fl) / (hi - lo);
  }
  return grad;
}

}  // namespace gibo::optim
