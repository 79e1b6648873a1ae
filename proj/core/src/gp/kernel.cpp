#include "gibo/gp/kernel.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace gibo::gp {

namespace {

constexpr double kSqrt5 = 2.23606797749978969640917366873128;

void check_dim(const KernelSpec& kernel, Eigen::Index dim) {
  if (dim != kernel.dim()) {
    throw std::invalid_argument("kernel: input dimension " + std::to_string(dim) +
                                " does not match " + std::to_string(kernel.dim()) + " lengthscales");
  }
}

}  // namespace

std::string_view to_string(KernelFamily family) {
  switch (family) {
    case KernelFamily::SquaredExponential:
      return "squared_exponential";
    case KernelFamily::Matern52:
      return "matern52";
  }
  return "unknown";
}

KernelFamily kernel_family_from_string(std::string_view name) {
  if (name == "squared_exponential" || name == "se" || name == "gaussian") {
    return KernelFamily::SquaredExponential;
  }
  if (name == "matern52" || name == "matern") return KernelFamily::Matern52;
  throw std::invalid_argument("unknown kernel family '" + std::string(name) + "'");
}

void KernelSpec::validate() const {
  if (lengthscales.size() < 1) throw std::invalid_argument("KernelSpec: no lengthscales");
  for (Eigen::Index i = 0; i < lengthscales.size(); ++i) {
    if (!(lengthscales[i] > 0.0) || !std::isfinite(lengthscales[i])) {
      throw std::invalid_argument("KernelSpec: lengthscale " + std::to_string(i) + " must be positive");
    }
  }
  if (!(signal_variance > 0.0) || !std::isfinite(signal_variance)) {
    throw std::invalid_argument("KernelSpec: signal_variance must be positive");
  }
  if (!(noise_variance >= 0.0) || !std::isfinite(noise_variance)) {
    throw std::invalid_argument("KernelSpec: noise_variance must be nonnegative");
  }
}

double kernel_from_scaled_distance(KernelFamily family, double signal_variance, double r) {
  switch (family) {
    case KernelFamily::SquaredExponential:
      return signal_variance * std::exp(-0.5 * r * r);
    case KernelFamily::Matern52: {
      const double s = kSqrt5 * r;
      return signal_variance * (1.0 + s + s * s / 3.0) * std::exp(-s);
    }
  }
  return 0.0;
}

double kernel_eval(const KernelSpec& kernel, const Eigen::Ref<const Eigen::VectorXd>& a,
                   const Eigen::Ref<const Eigen::VectorXd>& b) {
  check_dim(kernel, a.size());
  check_dim(kernel, b.size());
  // Squared differences are symmetric in (a, b) bit for bit.
  const double r2 = ((a - b).array() / kernel.lengthscales.array()).square().sum();
  return kernel_from_scaled_distance(kernel.family, kernel.signal_variance, std::sqrt(r2));
}

Eigen::MatrixXd cross_covariance(const KernelSpec& kernel, const Eigen::Ref<const Eigen::MatrixXd>& a,
                                 const Eigen::Ref<const Eigen::MatrixXd>& b) {
  check_dim(kernel, a.cols());
  check_dim(kernel, b.cols());
  const Eigen::RowVectorXd inv_ell = kernel.lengthscales.cwiseInverse().transpose();
  const Eigen::MatrixXd as = a.array().rowwise() * inv_ell.array();
  const Eigen::MatrixXd bs = b.array().rowwise() * inv_ell.array();
  Eigen::MatrixXd out(a.rows(), b.rows());
  for (Eigen::Index j = 0; j < b.rows(); ++j) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      const double r2 = (as.row(i) - bs.row(j)).squaredNorm();
      out(i, j) = kernel_from_scaled_distance(kernel.family, kernel.signal_variance, std::sqrt(r2));
    }
  }
  return out;
}

Eigen::MatrixXd build_gram(const KernelSpec& kernel, const Eigen::Ref<const Eigen::MatrixXd>& points) {
  check_dim(kernel, points.cols());
  const Eigen::Index n = points.rows();
  const Eigen::RowVectorXd inv_ell = kernel.lengthscales.cwiseInverse().transpose();
  const Eigen::MatrixXd scaled = points.array().rowwise() * inv_ell.array();
  Eigen::MatrixXd gram(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    gram(j, j) = kernel.signal_variance;
    for (Eigen::Index i = j + 1; i < n; ++i) {
      const double r2 = (scaled.row(i) - scaled.row(j)).squaredNorm();
      const double k = kernel_from_scaled_distance(kernel.family, kernel.signal_variance, std::sqrt(r2));
      gram(i, j) = k;
      gram(j, i) = k;
    }
  }
  return gram;
}

}  // namespace gibo::gp
