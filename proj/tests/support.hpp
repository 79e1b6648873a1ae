#pragma once

#include <chrono>
#include <filesystem>
#include <random>
#include <string>

#include <Eigen/Dense>

#include "gibo/gp/gaussian_process.hpp"
#include "gibo/gp/kernel.hpp"

namespace gibo::test {

inline std::filesystem::path source_dir() { return GIBO_SOURCE_DIR; }
inline std::filesystem::path nominal_fixture() { return source_dir() / "data" / "nominal_macpherson.json"; }

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& tag) {
  static int counter = 0;
  const auto stamp = std::chrono::steady_clock::now().time_since_epoch().count();
  auto dir = std::filesystem::temp_directory_path() /
             ("gibo_" + tag + "_" + std::to_string(stamp) + "_" + std::to_string(counter++));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline gp::KernelSpec random_kernel(std::mt19937_64& rng, Eigen::Index m, gp::KernelFamily family,
                                    double noise = 0.0) {
  std::uniform_real_distribution<double> ls(0.2, 1.5);
  std::uniform_real_distribution<double> sv(0.5, 2.0);
  gp::KernelSpec k;
  k.family = family;
  k.lengthscales.resize(m);
  for (Eigen::Index i = 0; i < m; ++i) k.lengthscales[i] = ls(rng);
  k.signal_variance = sv(rng);
  k.noise_variance = noise;
  return k;
}

inline gp::TrainingSet random_training(std::mt19937_64& rng, Eigen::Index n, Eigen::Index m) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::normal_distribution<double> v(0.0, 1.0);
  gp::TrainingSet t;
  t.points.resize(n, m);
  t.values.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) t.points(i, j) = u(rng);
    t.values[i] = v(rng);
  }
  return t;
}

/// Textbook posterior through an explicit inverse, written against the kernel formula
/// rather than the library's Gram builders.
struct DirectOracle {
  double mean;
  double variance;
};

inline double oracle_kernel(const gp::KernelSpec& k, const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const double r = ((a - b).array() / k.lengthscales.array()).matrix().norm();
  if (k.family == gp::KernelFamily::SquaredExponential) return k.signal_variance * std::exp(-0.5 * r * r);
  const double s = std::sqrt(5.0) * r;
  return k.signal_variance * (1.0 + s + s * s / 3.0) * std::exp(-s);
}

inline DirectOracle direct_posterior(const gp::KernelSpec& k, const gp::TrainingSet& t, const Eigen::VectorXd& q,
                                     double diagonal) {
  const Eigen::Index n = t.size();
  Eigen::MatrixXd K(n, n);
  Eigen::VectorXd ks(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    ks[i] = oracle_kernel(k, t.points.row(i).transpose(), q);
    for (Eigen::Index j = 0; j < n; ++j) {
      K(i, j) = oracle_kernel(k, t.points.row(i).transpose(), t.points.row(j).transpose());
    }
  }
  K.diagonal().array() += diagonal;
  const Eigen::MatrixXd Kinv = K.fullPivLu().inverse();
  return {ks.dot(Kinv * t.values), oracle_kernel(k, q, q) - ks.dot(Kinv * ks)};
}

}  // namespace gibo::test
