#include "gibo/acquisition/acquisition.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "gibo/acquisition/normal.hpp"
#include "gibo/common/sampling.hpp"
#include "gibo/optim/box_minimizer.hpp"

namespace gibo::acq {

namespace {

constexpr std::uint64_t kPrescreenStream = 0x5072655363ULL;
constexpr std::uint64_t kStartStream = 0x5374617274ULL;
// Local runs seeded from the top of the pre-screen, in addition to the LHS starts.
constexpr double kIncumbentStartSpread = 1e-3;  // fraction of the box extent
constexpr std::size_t kPrescreenStarts = 2;

}  // namespace

std::string_view to_string(AcquisitionKind kind) {
  switch (kind) {
    case AcquisitionKind::ExpectedImprovement:
      return "ei";
    case AcquisitionKind::MaxProbabilityOfImprovement:
      return "mpi";
  }
  return "unknown";
}

AcquisitionKind acquisition_kind_from_string(std::string_view name) {
  if (name == "ei" || name == "expected_improvement") return AcquisitionKind::ExpectedImprovement;
  if (name == "mpi" || name == "max_probability_of_improvement") {
    return AcquisitionKind::MaxProbabilityOfImprovement;
  }
  throw std::invalid_argument("unknown acquisition kind '" + std::string(name) + "'");
}

void AcquisitionConfig::validate() const {
  if (!(xi >= 0.0) || !std::isfinite(xi)) throw std::invalid_argument("AcquisitionConfig: xi must be >= 0");
  if (restarts < 1) throw std::invalid_argument("AcquisitionConfig: restarts must be >= 1");
  if (prescreen < 1) throw std::invalid_argument("AcquisitionConfig: prescreen must be >= 1");
  if (!(gradient_step > 0.0)) throw std::invalid_argument("AcquisitionConfig: gradient_step must be > 0");
  if (max_local_iterations < 1) {
    throw std::invalid_argument("AcquisitionConfig: max_local_iterations must be >= 1");
  }
}

Incumbent Incumbent::from_training(const gp::TrainingSet& training) {
  if (training.size() < 1) throw std::invalid_argument("Incumbent: empty training set");
  Eigen::Index best = 0;
  training.values.minCoeff(&best);
  return {training.points.row(best).transpose(), training.values[best]};
}

double ei_value(double mean, double stddev, double incumbent_value, double xi) {
  const double improvement = incumbent_value - mean + xi;
  if (!(stddev > 0.0)) return std::max(0.0, improvement);
  const double z = improvement / stddev;
  const double ei = improvement * std_normal_cdf(z) + stddev * std_normal_pdf(z);
  return std::max(0.0, ei);
}

double mpi_value(double mean, double stddev, double incumbent_value, double xi) {
  const double margin = incumbent_value - xi - mean;
  if (!(stddev > 0.0)) return margin > 0.0 ? 1.0 : 0.0;
  return std::clamp(std_normal_cdf(margin / stddev), 0.0, 1.0);
}

double acquisition_value(AcquisitionKind kind, const gp::Prediction& prediction,
                         double incumbent_value, double xi) {
  switch (kind) {
    case AcquisitionKind::ExpectedImprovement:
      return ei_value(prediction.mean, prediction.stddev, incumbent_value, xi);
    case AcquisitionKind::MaxProbabilityOfImprovement:
      return mpi_value(prediction.mean, prediction.stddev, incumbent_value, xi);
  }
  return 0.0;
}

AcquisitionMaximum maximize_acquisition(const gp::GaussianProcess& posterior,
                                        const AcquisitionConfig& config, const Incumbent& incumbent,
                                        const DomainBounds& bounds) {
  config.validate();
  if (bounds.dim() != posterior.kernel().dim()) {
    throw std::invalid_argument("maximize_acquisition: bounds dimension does not match the posterior");
  }
  const auto value_at = [&](const Eigen::VectorXd& x) {
    return acquisition_value(config.kind, posterior.predict(x), incumbent.value, config.xi);
  };

  AcquisitionMaximum out;

  // Dense pre-screen.
  auto prescreen_rng = make_rng(config.seed, kPrescreenStream);
  Eigen::MatrixXd screen(config.prescreen, bounds.dim());
  for (int i = 0; i < config.prescreen; ++i) {
    screen.row(i) = uniform_point(bounds, prescreen_rng).transpose();
  }
  Eigen::VectorXd means;
  Eigen::VectorXd stddevs;
  posterior.predict_batch(screen, means, stddevs);
  std::vector<int> order(static_cast<std::size_t>(config.prescreen));
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> screen_values(order.size());
  for (int i = 0; i < config.prescreen; ++i) {
    screen_values[static_cast<std::size_t>(i)] =
        acquisition_value(config.kind, {means[i], stddevs[i]}, incumbent.value, config.xi);
  }
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return screen_values[static_cast<std::size_t>(a)] > screen_values[static_cast<std::size_t>(b)];
  });
  out.candidates.reserve(order.size());
  for (int idx : order) {
    out.candidates.push_back({screen.row(idx).transpose(), screen_values[static_cast<std::size_t>(idx)]});
  }

  // Local refinement.
  auto start_rng = make_rng(config.seed, kStartStream);
  std::vector<Eigen::VectorXd> starts = latin_hypercube(bounds, config.restarts, start_rng);
  for (std::size_t i = 0; i < std::min(kPrescreenStarts, out.candidates.size()); ++i) {
    starts.push_back(out.candidates[i].point);
  }
  if (incumbent.point.size() == bounds.dim()) {
    // Acquisition is flat at the incumbent itself; start just beside it.
    std::normal_distribution<double> jitter(0.0, kIncumbentStartSpread);
    Eigen::VectorXd start = incumbent.point;
    for (Eigen::Index i = 0; i < start.size(); ++i) start[i] += jitter(start_rng) * bounds.extent()[i];
    starts.push_back(bounds.clamp(start));
  }

  const auto negated = [&](const Eigen::VectorXd& x) { return -value_at(x); };
  const optim::Objective objective = [&](const Eigen::VectorXd& x, Eigen::VectorXd* grad) {
    if (grad) *grad = optim::finite_difference_gradient(negated, x, bounds, config.gradient_step);
    return negated(x);
  };
  optim::BoxMinimizerOptions options;
  options.max_iterations = config.max_local_iterations;
  options.projected_gradient_tolerance = 1e-12;

  out.point = out.candidates.front().point;
  out.value = value_at(out.point);
  for (const auto& start : starts) {
    const optim::BoxMinimizerResult r = optim::minimize_in_box(objective, start, bounds, options);
    const double v = -r.value;
    if (std::isfinite(v) && v > out.value) {
      out.value = v;
      out.point = r.x;
    }
  }
  out.point = bounds.clamp(out.point);
  out.value = value_at(out.point);
  return out;
}

}  // namespace gibo::acq
