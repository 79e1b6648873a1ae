#include "gibo/baselines/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "gibo/common/sampling.hpp"

namespace gibo::baselines {

namespace {

using solver::TerminationReason;
using solver::TraceRecorder;

constexpr std::uint64_t kStartStream = 0x426173655374ULL;
constexpr std::uint64_t kSearchStream = 0x42617365526eULL;

// Wraps the recorder in normalized coordinates. Returns +inf for failed evaluations.
class UnitObjective {
 public:
  UnitObjective(TraceRecorder& recorder, const DomainBounds& bounds) : recorder_(recorder), bounds_(bounds) {}

  double operator()(const Eigen::VectorXd& u) {
    const std::optional<double> f = recorder_.evaluate(bounds_.from_unit(u));
    return f.value_or(std::numeric_limits<double>::infinity());
  }
  bool done() const { return !recorder_.budget_left() || recorder_.target_met(); }

 private:
  TraceRecorder& recorder_;
  const DomainBounds& bounds_;
};

Eigen::VectorXd clip_unit(const Eigen::VectorXd& u) { return u.cwiseMax(0.0).cwiseMin(1.0); }

void run_gradient(UnitObjective& f, const BaselineConfig& cfg, Eigen::VectorXd u, std::mt19937_64& rng) {
  const DomainBounds unit = DomainBounds::unit(u.size());
  double fu = f(u);
  double step = cfg.initial_step;
  while (!f.done()) {
    // Central differences, stencil shifted inward at the box faces.
    Eigen::VectorXd grad(u.size());
    for (Eigen::Index i = 0; i < u.size() && !f.done(); ++i) {
      double hi = u[i] + cfg.fd_step;
      double lo = u[i] - cfg.fd_step;
      if (lo < 0.0) { lo = 0.0; hi = 2.0 * cfg.fd_step; }
      if (hi > 1.0) { hi = 1.0; lo = 1.0 - 2.0 * cfg.fd_step; }
      Eigen::VectorXd probe = u;
      probe[i] = hi;
      const double fh = f(probe);
      if (f.done()) return;
      probe[i] = lo;
      const double fl = f(probe);
      grad[i] = (fh - fl) / (hi - lo);
    }
    if (f.done()) return;

    const double gnorm = grad.norm();
    bool accepted = false;
    if (std::isfinite(fu) && std::isfinite(gnorm) && gnorm > 0.0) {
      // Backtracking along the projected path; t is the step length before projection.
      double t = step;
      while (t >= cfg.min_step && !f.done()) {
        const Eigen::VectorXd trial = clip_unit(u - (t / gnorm) * grad);
        const double decrease = grad.dot(trial - u);
        if ((trial - u).norm() == 0.0) break;
        const double ft = f(trial);
        if (ft <= fu + cfg.armijo * decrease) {
          u = trial;
          fu = ft;
          accepted = true;
          step = std::min(2.0 * t, 1.0);
          break;
        }
        t *= 0.5;
      }
    }
    if (!accepted && !f.done()) {
      // Stalled at a stationary point or a face of the box: restart elsewhere.
      u = uniform_point(unit, rng);
      fu = f(u);
      step = cfg.initial_step;
    }
  }
}

void run_random(UnitObjective& f, Eigen::Index dim, std::mt19937_64& rng) {
  const DomainBounds unit = DomainBounds::unit(dim);
  while (!f.done()) f(uniform_point(unit, rng));
}

void run_es(UnitObjective& f, const BaselineConfig& cfg, Eigen::VectorXd mean, std::mt19937_64& rng) {
  const auto n = static_cast<double>(mean.size());
  const int lambda = cfg.population;
  const int mu = cfg.parents;
  const double mu_eff = mu;  // equal recombination weights
  const double c_sigma = (mu_eff + 2.0) / (n + mu_eff + 5.0);
  const double d_sigma = 1.0 + 2.0 * std::max(0.0, std::sqrt((mu_eff - 1.0) / (n + 1.0)) - 1.0) + c_sigma;
  const double chi_n = std::sqrt(n) * (1.0 - 1.0 / (4.0 * n) + 1.0 / (21.0 * n * n));
  double sigma = cfg.sigma0;
  Eigen::VectorXd path = Eigen::VectorXd::Zero(mean.size());
  std::normal_distribution<double> normal(0.0, 1.0);

  while (!f.done()) {
    std::vector<Eigen::VectorXd> z(static_cast<std::size_t>(lambda));
    std::vector<Eigen::VectorXd> x(static_cast<std::size_t>(lambda));
    std::vector<double> fx(static_cast<std::size_t>(lambda), std::numeric_limits<double>::infinity());
    int evaluated = 0;
    for (int k = 0; k < lambda && !f.done(); ++k) {
      auto& zk = z[static_cast<std::size_t>(k)];
      zk.resize(mean.size());
      for (Eigen::Index i = 0; i < zk.size(); ++i) zk[i] = normal(rng);
      x[static_cast<std::size_t>(k)] = clip_unit(mean + sigma * zk);
      fx[static_cast<std::size_t>(k)] = f(x[static_cast<std::size_t>(k)]);
      ++evaluated;
    }
    if (evaluated < lambda) return;
    std::vector<int> order(static_cast<std::size_t>(lambda));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return fx[static_cast<std::size_t>(a)] < fx[static_cast<std::size_t>(b)];
    });
    Eigen::VectorXd new_mean = Eigen::VectorXd::Zero(mean.size());
    Eigen::VectorXd z_mean = Eigen::VectorXd::Zero(mean.size());
    for (int k = 0; k < mu; ++k) {
      new_mean += x[static_cast<std::size_t>(order[static_cast<std::size_t>(k)])] / mu;
      z_mean += z[static_cast<std::size_t>(order[static_cast<std::size_t>(k)])] / mu;
    }
    mean = new_mean;
    path = (1.0 - c_sigma) * path + std::sqrt(c_sigma * (2.0 - c_sigma) * mu_eff) * z_mean;
    sigma *= std::exp((c_sigma / d_sigma) * (path.norm() / chi_n - 1.0));
    sigma = std::clamp(sigma, 1e-12, 1.0);
  }
}

}  // namespace

std::string_view to_string(BaselineKind kind) {
  switch (kind) {
    case BaselineKind::FiniteDifferenceGradient:
      return "fd_gradient";
    case BaselineKind::RandomSearch:
      return "random_search";
    case BaselineKind::EvolutionStrategy:
      return "evolution_strategy";
  }
  return "unknown";
}

BaselineKind baseline_kind_from_string(std::string_view name) {
  if (name == "fd_gradient" || name == "finite_difference_gradient") return BaselineKind::FiniteDifferenceGradient;
  if (name == "random_search" || name == "random") return BaselineKind::RandomSearch;
  if (name == "evolution_strategy" || name == "es") return BaselineKind::EvolutionStrategy;
  throw std::invalid_argument("unknown baseline '" + std::string(name) + "'");
}

void BaselineConfig::validate() const {
  if (max_evaluations < 1) throw std::invalid_argument("BaselineConfig: max_evaluations must be > 0");
  if (!(fd_step > 0.0) || fd_step >= 0.5) throw std::invalid_argument("BaselineConfig: fd_step must be in (0, 0.5)");
  if (!(armijo > 0.0) || armijo >= 1.0) throw std::invalid_argument("BaselineConfig: armijo must be in (0, 1)");
  if (!(initial_step > 0.0)) throw std::invalid_argument("BaselineConfig: initial_step must be > 0");
  if (!(min_step > 0.0)) throw std::invalid_argument("BaselineConfig: min_step must be > 0");
  if (population < 4) throw std::invalid_argument("BaselineConfig: population must be >= 4");
  if (parents < 1 || parents > population) {
    throw std::invalid_argument("BaselineConfig: parents must be in [1, population]");
  }
  if (!(sigma0 > 0.0)) throw std::invalid_argument("BaselineConfig: sigma0 must be > 0");
}

solver::OptimizationTrace run_baseline(const DisciplineModel& model, const solver::TargetSpec& target,
                                       const BaselineConfig& config, const DomainBounds& bounds) {
  config.validate();
  target.validate_against(model.output_names());
  if (!(bounds == model.bounds())) {
    // Searching a sub-box is fine; leaving the model's domain is not.
    if (bounds.dim() != model.bounds().dim() || !model.bounds().contains(bounds.lower()) ||
        !model.bounds().contains(bounds.upper())) {
      throw std::invalid_argument("run_baseline: bounds must lie within the model's domain");
    }
  }
  TraceRecorder recorder(model, target, std::string(to_string(config.kind)), config.max_evaluations,
                         config.norm_epsilon);
  UnitObjective objective(recorder, bounds);

  auto start_rng = make_rng(config.seed, kStartStream);
  Eigen::VectorXd start = config.start ? bounds.to_unit(bounds.clamp(*config.start))
                                       : uniform_point(DomainBounds::unit(bounds.dim()), start_rng);
  auto rng = make_rng(config.seed, kSearchStream);

  switch (config.kind) {
    case BaselineKind::FiniteDifferenceGradient:
      run_gradient(objective, config, start, rng);
      break;
    case BaselineKind::RandomSearch:
      run_random(objective, bounds.dim(), rng);
      break;
    case BaselineKind::EvolutionStrategy:
      run_es(objective, config, start, rng);
      break;
  }
  return recorder.finish(recorder.target_met() ? TerminationReason::TargetMet
                                               : TerminationReason::BudgetExhausted);
}

}  // namespace gibo::baselines
