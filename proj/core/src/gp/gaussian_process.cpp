#include "gibo/gp/gaussian_process.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "gibo/common/errors.hpp"

namespace gibo::gp {

void TrainingSet::add(const Eigen::Ref<const Eigen::VectorXd>& point, double value) {
  if (values.size() == 0 && points.size() == 0) {
    points.resize(0, point.size());
  }
  if (point.size() != points.cols()) {
    throw std::invalid_argument("TrainingSet::add: point dimension mismatch");
  }
  const Eigen::Index n = values.size();
  points.conservativeResize(n + 1, Eigen::NoChange);
  points.row(n) = point.transpose();
  values.conservativeResize(n + 1);
  values[n] = value;
}

void TrainingSet::validate() const {
  if (points.rows() != values.size()) {
    throw std::invalid_argument("TrainingSet: " + std::to_string(points.rows()) + " points but " +
                                std::to_string(values.size()) + " values");
  }
}

RegularizedCholesky factorize_with_jitter(const Eigen::MatrixXd& gram, double noise_variance,
                                          double signal_variance) {
  const Eigen::Index n = gram.rows();
  RegularizedCholesky out;
  for (double rel = kJitterStart; rel <= kJitterMax * 1.0000001; rel *= 10.0) {
    const double jitter = rel * signal_variance;
    Eigen::MatrixXd a = gram;
    a.diagonal().array() += noise_variance + jitter;
    out.llt.compute(a);
    if (out.llt.info() == Eigen::Success) {
      // LLT only checks pivots for positivity; reject factors with collapsed pivots too.
      const double min_pivot = out.llt.matrixLLT().diagonal().minCoeff();
      if (n == 0 || (std::isfinite(min_pivot) && min_pivot > 0.0)) {
        out.jitter = jitter;
        return out;
      }
    }
  }
  throw SingularModelError("Gram matrix is not positive definite even with jitter " +
                           std::to_string(kJitterMax) + " x signal variance");
}

GaussianProcess::GaussianProcess(KernelSpec kernel, TrainingSet training,
                                 Eigen::LLT<Eigen::MatrixXd> factor, Eigen::VectorXd weights,
                                 double jitter)
    : kernel_(std::move(kernel)),
      training_(std::move(training)),
      factor_(std::move(factor)),
      weights_(std::move(weights)),
      jitter_(jitter) {}

GaussianProcess GaussianProcess::fit(const KernelSpec& kernel, TrainingSet training) {
  kernel.validate();
  training.validate();
  if (training.size() < 1) throw std::invalid_argument("GaussianProcess::fit: empty training set");
  if (training.dim() != kernel.dim()) {
    throw std::invalid_argument("GaussianProcess::fit: training dimension does not match kernel");
  }
  const Eigen::MatrixXd gram = build_gram(kernel, training.points);
  RegularizedCholesky chol = factorize_with_jitter(gram, kernel.noise_variance, kernel.signal_variance);
  Eigen::VectorXd weights = chol.llt.solve(training.values);
  return GaussianProcess(kernel, std::move(training), std::move(chol.llt), std::move(weights),
                         chol.jitter);
}

Prediction GaussianProcess::predict(const Eigen::Ref<const Eigen::VectorXd>& query) const {
  if (query.size() != kernel_.dim()) {
    throw std::invalid_argument("GaussianProcess::predict: query dimension mismatch");
  }
  const Eigen::VectorXd kstar = cross_covariance(kernel_, training_.points, query.transpose());
  const double mean = kstar.dot(weights_);
  const Eigen::VectorXd v = factor_.matrixL().solve(kstar);
  const double var = kernel_.signal_variance - v.squaredNorm() - jitter_;
  return {mean, std::sqrt(std::max(var, 0.0))};
}

void GaussianProcess::predict_batch(const Eigen::Ref<const Eigen::MatrixXd>& queries,
                                    Eigen::VectorXd& mean, Eigen::VectorXd& stddev) const {
  const Eigen::MatrixXd kstar = cross_covariance(kernel_, training_.points, queries);
  mean = kstar.transpose() * weights_;
  const Eigen::MatrixXd v = factor_.matrixL().solve(kstar);
  stddev = (kernel_.signal_variance - jitter_ - v.colwise().squaredNorm().transpose().array())
               .max(0.0)
               .sqrt()
               .matrix();
}

double log_marginal_likelihood(const KernelSpec& kernel, const TrainingSet& training) {
  kernel.validate();
  training.validate();
  const Eigen::Index n = training.size();
  if (n < 1) throw std::invalid_argument("log_marginal_likelihood: empty training set");
  const Eigen::MatrixXd gram = build_gram(kernel, training.points);
  const RegularizedCholesky chol = factorize_with_jitter(gram, kernel.noise_variance, kernel.signal_variance);
  const Eigen::VectorXd alpha = chol.llt.solve(training.values);
  const double log_det = 2.0 * chol.llt.matrixLLT().diagonal().array().log().sum();
  return -0.5 * training.values.dot(alpha) - 0.5 * log_det -
         0.5 * static_cast<double>(n) * std::log(2.0 * std::numbers::pi);
}

LikelihoodWithGradient log_marginal_likelihood_with_gradient(const KernelSpec& kernel,
                                                             const TrainingSet& training) {
  kernel.validate();
  training.validate();
  const Eigen::Index n = training.size();
  const Eigen::Index m = kernel.dim();
  if (n < 1) throw std::invalid_argument("log_marginal_likelihood: empty training set");

  const Eigen::MatrixXd gram = build_gram(kernel, training.points);
  const RegularizedCholesky chol = factorize_with_jitter(gram, kernel.noise_variance, kernel.signal_variance);
  const Eigen::VectorXd alpha = chol.llt.solve(training.values);
  const double log_det = 2.0 * chol.llt.matrixLLT().diagonal().array().log().sum();

  LikelihoodWithGradient out;
  out.value = -0.5 * training.values.dot(alpha) - 0.5 * log_det -
              0.5 * static_cast<double>(n) * std::log(2.0 * std::numbers::pi);

  // d/dtheta = 0.5 tr((alpha alpha^T - K^{-1}) dK/dtheta)
  const Eigen::MatrixXd kinv = chol.llt.solve(Eigen::MatrixXd::Identity(n, n));
  const Eigen::MatrixXd w = alpha * alpha.transpose() - kinv;

  out.gradient.setZero(m + 2);
  const double sf2 = kernel.signal_variance;
  const Eigen::RowVectorXd inv_ell = kernel.lengthscales.cwiseInverse().transpose();
  const Eigen::MatrixXd scaled = training.points.array().rowwise() * inv_ell.array();
  constexpr double kSqrt5 = 2.23606797749978969640917366873128;

  double signal_term = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    signal_term += 0.5 * w(j, j) * gram(j, j);
    for (Eigen::Index i = j + 1; i < n; ++i) {
      const Eigen::RowVectorXd diff = scaled.row(i) - scaled.row(j);
      const double r2 = diff.squaredNorm();
      const double kij = gram(i, j);
      // Both orderings (i,j) and (j,i) contribute, hence no factor 0.5 below.
      signal_term += w(i, j) * kij;
      double factor = 0.0;  // dk/dlog(ell_d) = factor * diff_d^2
      if (kernel.family == KernelFamily::SquaredExponential) {
        factor = kij;
      } else {
        const double s = kSqrt5 * std::sqrt(r2);
        factor = sf2 * (5.0 / 3.0) * (1.0 + s) * std::exp(-s);
      }
      const double wf = w(i, j) * factor;
      for (Eigen::Index d = 0; d < m; ++d) out.gradient[d] += wf * diff[d] * diff[d];
    }
  }
  out.gradient[m] = signal_term;
  out.gradient[m + 1] = 0.5 * kernel.noise_variance * w.trace();
  return out;
}

}  // namespace gibo::gp
