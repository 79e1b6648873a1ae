#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "gibo/common/domain.hpp"
#include "gibo/gp/gaussian_process.hpp"

namespace gibo::acq {

enum class AcquisitionKind { ExpectedImprovement, MaxProbabilityOfImprovement };

std::string_view to_string(AcquisitionKind kind);
AcquisitionKind acquisition_kind_from_string(std::string_view name);

struct AcquisitionConfig {
  AcquisitionKind kind = AcquisitionKind::ExpectedImprovement;
  double xi = 0.0;  // exploration margin, in the units of the GP's values
  int restarts = 10;
  int prescreen = 1000;
  double gradient_step = 1e-6;  // central-difference step, fraction of the box extent
  int max_local_iterations = 50;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Best observed point of a training set (minimization).
struct Incumbent {
  Eigen::VectorXd point;
  double value = 0.0;

  static Incumbent from_training(const gp::TrainingSet& training);
};

/// Expected improvement for minimization,
/// (f+ - mu + xi) Phi(z) + sigma phi(z) with z = (f+ - mu + xi) / sigma.
/// At sigma = 0 it returns the limit max(0, f+ - mu + xi).
double ei_value(double mean, double stddev, double incumbent_value, double xi);

/// Probability of improving on f+ by at least xi, Phi((f+ - xi - mu) / sigma).
double mpi_value(double mean, double stddev, double incumbent_value, double xi);

double acquisition_value(AcquisitionKind kind, const gp::Prediction& prediction,
                         double incumbent_value, double xi);

struct Candidate {
  Eigen::VectorXd point;
  double value = 0.0;
};

struct AcquisitionMaximum {
  Eigen::VectorXd point;
  double value = 0.0;
  /// Pre-screen candidates, best first. Lets callers fall back to an unexplored point.
  std::vector<Candidate> candidates;
};

/// Maximizes the acquisition over `bounds`: a uniform random pre-screen, then projected
/// quasi-Newton runs from Latin-hypercube starts and from the best pre-screen
/// candidates. Ties go to the earliest run. The returned value is the acquisition at
/// the returned point.
AcquisitionMaximum maximize_acquisition(const gp::GaussianProcess& posterior,
                                        const AcquisitionConfig& config, const Incumbent& incumbent,
                                        const DomainBounds& bounds);

}  // namespace gibo::acq
