#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "gibo/gp/kernel.hpp"

namespace gibo::gp {

/// Observed design/objective pairs; one point per row of `points`.
struct TrainingSet {
  Eigen::MatrixXd points;
  Eigen::VectorXd values;

  Eigen::Index size() const { return values.size(); }
  Eigen::Index dim() const { return points.cols(); }
  void add(const Eigen::Ref<const Eigen::VectorXd>& point, double value);
  /// Throws std::invalid_argument when points and values disagree in length.
  void validate() const;
};

struct Prediction {
  double mean = 0.0;
  double stddev = 0.0;
};

// Diagonal jitter is tried from kJitterStart * signal_variance upwards in factors
// of ten and gives up past kJitterMax * signal_variance.
inline constexpr double kJitterStart = 1e-10;
inline constexpr double kJitterMax = 1e-4;

/// Lower Cholesky factor of K + (noise + jitter) I with the jitter that was needed.
struct RegularizedCholesky {
  Eigen::LLT<Eigen::MatrixXd> llt;
  double jitter = 0.0;
};

/// Factorizes gram + noise I, escalating jitter; throws SingularModelError on failure.
RegularizedCholesky factorize_with_jitter(const Eigen::MatrixXd& gram, double noise_variance,
                                          double signal_variance);

/// Exact zero-mean GP posterior. Immutable after construction, so predictions are
/// safe to run concurrently.
///
/// The predictive stddev is that of the latent function. The jitter added for the
/// factorization is subtracted from the predictive variance so that a noise-free model
/// reports zero uncertainty at its training points.
class GaussianProcess {
 public:
  /// Throws SingularModelError when the Gram matrix cannot be factorized.
  static GaussianProcess fit(const KernelSpec& kernel, TrainingSet training);

  Prediction predict(const Eigen::Ref<const Eigen::VectorXd>& query) const;
  /// Batch prediction for one query per row; faster than repeated predict().
  void predict_batch(const Eigen::Ref<const Eigen::MatrixXd>& queries, Eigen::VectorXd& mean,
                     Eigen::VectorXd& stddev) const;

  const KernelSpec& kernel() const { return kernel_; }
  const TrainingSet& training() const { return training_; }
  Eigen::MatrixXd cholesky_factor() const { return factor_.matrixL(); }
  const Eigen::VectorXd& weights() const { return weights_; }
  double jitter() const { return jitter_; }

 private:
  GaussianProcess(KernelSpec kernel, TrainingSet training, Eigen::LLT<Eigen::MatrixXd> factor,
                  Eigen::VectorXd weights, double jitter);

  KernelSpec kernel_;
  TrainingSet training_;
  Eigen::LLT<Eigen::MatrixXd> factor_;
  Eigen::VectorXd weights_;
  double jitter_;
};

/// log p(values | points, kernel) under the zero-mean GP prior.
double log_marginal_likelihood(const KernelSpec& kernel, const TrainingSet& training);

/// Parameter order of log_marginal_likelihood_gradient: log lengthscales (one per
/// dimension), log signal variance, log noise variance.
struct LikelihoodWithGradient {
  double value = 0.0;
  Eigen::VectorXd gradient;
};

LikelihoodWithGradient log_marginal_likelihood_with_gradient(const KernelSpec& kernel,
                                                             const TrainingSet& training);

}  // namespace gibo::gp
