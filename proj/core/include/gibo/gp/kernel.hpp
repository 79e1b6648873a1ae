#pragma once

#include <string_view>

#include <Eigen/Core>

namespace gibo::gp {

enum class KernelFamily { SquaredExponential, Matern52 };

std::string_view to_string(KernelFamily family);
KernelFamily kernel_family_from_string(std::string_view name);

/// Stationary ARD kernel with additive observation noise.
struct KernelSpec {
  KernelFamily family = KernelFamily::Matern52;
  Eigen::VectorXd lengthscales;  // one per input dimension, > 0
  double signal_variance = 1.0;  // > 0
  double noise_variance = 0.0;   // >= 0

  Eigen::Index dim() const { return lengthscales.size(); }
  /// Throws std::invalid_argument when a field is out of range.
  void validate() const;
};

/// k(a, b) without the noise term.
double kernel_eval(const KernelSpec& kernel, const Eigen::Ref<const Eigen::VectorXd>& a,
                   const Eigen::Ref<const Eigen::VectorXd>& b);

/// Gram matrix K[i][j] = k(points.row(i), points.row(j)); one point per row.
Eigen::MatrixXd build_gram(const KernelSpec& kernel, const Eigen::Ref<const Eigen::MatrixXd>& points);

/// Cross covariance C[i][j] = k(a.row(i), b.row(j)).
Eigen::MatrixXd cross_covariance(const KernelSpec& kernel, const Eigen::Ref<const Eigen::MatrixXd>& a,
                                 const Eigen::Ref<const Eigen::MatrixXd>& b);

/// Kernel value as a function of the scaled distance r = |(a - b) / lengthscales|.
double kernel_from_scaled_distance(KernelFamily family, double signal_variance, double r);

}  // namespace gibo::gp
