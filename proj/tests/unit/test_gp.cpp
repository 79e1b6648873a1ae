#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "gibo/common/errors.hpp"
#include "gibo/gp/gaussian_process.hpp"
#include "gibo/gp/hyperparameters.hpp"
#include "gibo/gp/kernel.hpp"
#include "support.hpp"

namespace gibo::gp {
namespace {

KernelSpec unit_kernel(KernelFamily family, Eigen::Index m) {
  KernelSpec k;
  k.family = family;
  k.lengthscales = Eigen::VectorXd::Ones(m);
  k.signal_variance = 1.0;
  return k;
}

TEST(Kernel, IdenticalInputsGiveSignalVariance) {
  const Eigen::Vector2d a(0.5, 0.5);
  for (auto family : {KernelFamily::SquaredExponential, KernelFamily::Matern52}) {
    KernelSpec k = unit_kernel(family, 2);
    k.signal_variance = 2.5;
    EXPECT_DOUBLE_EQ(kernel_eval(k, a, a), 2.5);
  }
}

TEST(Kernel, SquaredExponentialAtUnitDistance) {
  const Eigen::VectorXd a = Eigen::VectorXd::Zero(1);
  const Eigen::VectorXd b = Eigen::VectorXd::Ones(1);
  EXPECT_NEAR(kernel_eval(unit_kernel(KernelFamily::SquaredExponential, 1), a, b), 0.60653065971263342, 1e-15);
}

TEST(Kernel, MaternAgainstClosedForm) {
  const Eigen::VectorXd a = Eigen::VectorXd::Zero(1);
  const Eigen::VectorXd b = Eigen::VectorXd::Constant(1, 0.7);
  const double s = std::sqrt(5.0) * 0.7;
  EXPECT_NEAR(kernel_eval(unit_kernel(KernelFamily::Matern52, 1), a, b), (1 + s + s * s / 3) * std::exp(-s), 1e-15);
}

TEST(Kernel, ArdLengthscalesScaleEachAxis) {
  KernelSpec k = unit_kernel(KernelFamily::SquaredExponential, 2);
  k.lengthscales << 2.0, 0.5;
  const Eigen::Vector2d a(0, 0);
  const Eigen::Vector2d b(2.0, 0.5);  // one lengthscale along each axis -> r^2 = 2
  EXPECT_NEAR(kernel_eval(k, a, b), std::exp(-1.0), 1e-15);
}

TEST(Kernel, GramMatrixOffDiagonals) {
  Eigen::MatrixXd pts(3, 1);
  pts << 0, 1, 2;
  const Eigen::MatrixXd g = build_gram(unit_kernel(KernelFamily::SquaredExponential, 1), pts);
  EXPECT_NEAR(g(0, 1), std::exp(-0.5), 1e-15);
  EXPECT_NEAR(g(0, 2), std::exp(-2.0), 1e-15);
  EXPECT_NEAR(g(1, 2), std::exp(-0.5), 1e-15);
  EXPECT_TRUE(g.isApprox(g.transpose()));
  EXPECT_DOUBLE_EQ(g(1, 1), 1.0);
}

TEST(Kernel, CrossCovarianceMatchesPointwise) {
  std::mt19937_64 rng(3);
  const KernelSpec k = test::random_kernel(rng, 3, KernelFamily::Matern52);
  const TrainingSet a = test::random_training(rng, 4, 3);
  const TrainingSet b = test::random_training(rng, 2, 3);
  const Eigen::MatrixXd c = cross_covariance(k, a.points, b.points);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 2; ++j) {
      EXPECT_DOUBLE_EQ(c(i, j), kernel_eval(k, a.points.row(i).transpose(), b.points.row(j).transpose()));
    }
  }
}

TEST(Kernel, RejectsInvalidSpecs) {
  KernelSpec k = unit_kernel(KernelFamily::Matern52, 2);
  k.lengthscales[1] = 0.0;
  EXPECT_THROW(k.validate(), std::invalid_argument);
  k = unit_kernel(KernelFamily::Matern52, 2);
  k.signal_variance = -1;
  EXPECT_THROW(k.validate(), std::invalid_argument);
  k = unit_kernel(KernelFamily::Matern52, 2);
  k.noise_variance = -1e-3;
  EXPECT_THROW(k.validate(), std::invalid_argument);
  EXPECT_THROW(kernel_family_from_string("rbf-ish"), std::invalid_argument);
}

TEST(GaussianProcess, SinglePointLogMarginalLikelihood) {
  // n = 1, value 0, k = 1: log N(0 | 0, 1 + jitter).
  TrainingSet t;
  t.points = Eigen::MatrixXd::Zero(1, 1);
  t.values = Eigen::VectorXd::Zero(1);
  const double expected = -0.5 * std::log(2 * std::numbers::pi * (1 + 1e-10));
  EXPECT_NEAR(log_marginal_likelihood(unit_kernel(KernelFamily::SquaredExponential, 1), t), expected, 1e-9);
  EXPECT_NEAR(expected, -0.91894, 1e-5);
}

TEST(GaussianProcess, MatchesDirectInversionOnTwoPoints) {
  TrainingSet t;
  t.points.resize(2, 1);
  t.points << 0.0, 1.0;
  t.values.resize(2);
  t.values << 1.0, -1.0;
  KernelSpec k = unit_kernel(KernelFamily::SquaredExponential, 1);
  k.noise_variance = 0.01;
  const GaussianProcess g = GaussianProcess::fit(k, t);
  const Eigen::VectorXd q = Eigen::VectorXd::Constant(1, 0.3);
  const test::DirectOracle o = test::direct_posterior(k, t, q, k.noise_variance + g.jitter());
  const Prediction p = g.predict(q);
  EXPECT_NEAR(p.mean, o.mean, 1e-12);
  // The jitter added for the factorization is taken back out of the variance.
  EXPECT_NEAR(p.stddev, std::sqrt(o.variance - g.jitter()), 1e-10);
}

TEST(GaussianProcess, MatchesDirectInversionOnRandomSmallSets) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> n_dist(1, 4);
  std::uniform_int_distribution<int> m_dist(1, 3);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = n_dist(rng);
    const int m = m_dist(rng);
    const auto family = trial % 2 ? KernelFamily::Matern52 : KernelFamily::SquaredExponential;
    const KernelSpec k = test::random_kernel(rng, m, family, 1e-3);
    const TrainingSet t = test::random_training(rng, n, m);
    const GaussianProcess g = GaussianProcess::fit(k, t);
    const Eigen::VectorXd q = test::random_training(rng, 1, m).points.row(0).transpose();
    const test::DirectOracle o = test::direct_posterior(k, t, q, k.noise_variance + g.jitter());
    EXPECT_NEAR(g.predict(q).mean, o.mean, 1e-10);
  }
}

TEST(GaussianProcess, InterpolatesNoiseFreeData) {
  std::mt19937_64 rng(5);
  const KernelSpec k = test::random_kernel(rng, 2, KernelFamily::Matern52);
  const TrainingSet t = test::random_training(rng, 6, 2);
  const GaussianProcess g = GaussianProcess::fit(k, t);
  for (Eigen::Index i = 0; i < t.size(); ++i) {
    const Prediction p = g.predict(t.points.row(i).transpose());
    EXPECT_NEAR(p.mean, t.values[i], 1e-6);
    EXPECT_NEAR(p.stddev, 0.0, 1e-4);
  }
}

TEST(GaussianProcess, FarFieldRevertsToPrior) {
  TrainingSet t;
  t.points = Eigen::MatrixXd::Zero(1, 2);
  t.values = Eigen::VectorXd::Constant(1, 3.0);
  KernelSpec k = unit_kernel(KernelFamily::SquaredExponential, 2);
  k.signal_variance = 4.0;
  const GaussianProcess g = GaussianProcess::fit(k, t);
  const Prediction p = g.predict(Eigen::Vector2d(20.0, 0.0));
  EXPECT_NEAR(p.mean, 0.0, 1e-6);
  EXPECT_NEAR(p.stddev, 2.0, 1e-6);
}

TEST(GaussianProcess, BatchPredictionAgreesWithSingle) {
  std::mt19937_64 rng(8);
  const KernelSpec k = test::random_kernel(rng, 3, KernelFamily::Matern52, 1e-4);
  const GaussianProcess g = GaussianProcess::fit(k, test::random_training(rng, 7, 3));
  const TrainingSet q = test::random_training(rng, 5, 3);
  Eigen::VectorXd mean;
  Eigen::VectorXd sd;
  g.predict_batch(q.points, mean, sd);
  for (int i = 0; i < 5; ++i) {
    const Prediction p = g.predict(q.points.row(i).transpose());
    EXPECT_NEAR(mean[i], p.mean, 1e-12);
    EXPECT_NEAR(sd[i], p.stddev, 1e-12);
  }
}

TEST(GaussianProcess, DuplicatePointsNeedJitterButFit) {
  TrainingSet t;
  t.points = Eigen::MatrixXd::Constant(3, 1, 0.25);
  t.values = Eigen::VectorXd::Constant(3, 1.0);
  const GaussianProcess g = GaussianProcess::fit(unit_kernel(KernelFamily::SquaredExponential, 1), t);
  EXPECT_GE(g.jitter(), kJitterStart);
  EXPECT_LE(g.jitter(), kJitterMax);
  EXPECT_NEAR(g.predict(Eigen::VectorXd::Constant(1, 0.25)).mean, 1.0, 1e-3);
}

TEST(GaussianProcess, IndefiniteMatrixRaisesSingular) {
  Eigen::MatrixXd bad = Eigen::MatrixXd::Identity(2, 2);
  bad(0, 1) = bad(1, 0) = 5.0;
  EXPECT_THROW(factorize_with_jitter(bad, 0.0, 1.0), SingularModelError);
}

TEST(GaussianProcess, RejectsMismatchedTraining) {
  TrainingSet t;
  t.points = Eigen::MatrixXd::Zero(2, 1);
  t.values = Eigen::VectorXd::Zero(3);
  EXPECT_THROW(GaussianProcess::fit(unit_kernel(KernelFamily::Matern52, 1), t), std::invalid_argument);
}

TEST(GaussianProcess, AddingPointNeverRaisesStddev) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 30; ++trial) {
    const KernelSpec k = test::random_kernel(rng, 2, KernelFamily::Matern52);
    TrainingSet t = test::random_training(rng, 5, 2);
    const GaussianProcess before = GaussianProcess::fit(k, t);
    const TrainingSet extra = test::random_training(rng, 1, 2);
    t.add(extra.points.row(0).transpose(), extra.values[0]);
    const GaussianProcess after = GaussianProcess::fit(k, t);
    const TrainingSet q = test::random_training(rng, 10, 2);
    for (int i = 0; i < 10; ++i) {
      EXPECT_LE(after.predict(q.points.row(i).transpose()).stddev,
                before.predict(q.points.row(i).transpose()).stddev + 1e-8);
    }
  }
}

TEST(Likelihood, GradientMatchesFiniteDifferences) {
  std::mt19937_64 rng(2);
  for (auto family : {KernelFamily::SquaredExponential, KernelFamily::Matern52}) {
    const KernelSpec k = test::random_kernel(rng, 2, family, 0.05);
    const TrainingSet t = test::random_training(rng, 8, 2);
    const LikelihoodWithGradient lg = log_marginal_likelihood_with_gradient(k, t);
    EXPECT_NEAR(lg.value, log_marginal_likelihood(k, t), 1e-10);
    ASSERT_EQ(lg.gradient.size(), 4);
    const double h = 1e-6;
    for (int p = 0; p < 4; ++p) {
      auto shifted = [&](double delta) {
        KernelSpec s = k;
        if (p < 2) s.lengthscales[p] *= std::exp(delta);
        if (p == 2) s.signal_variance *= std::exp(delta);
        if (p == 3) s.noise_variance *= std::exp(delta);
        return log_marginal_likelihood(s, t);
      };
      EXPECT_NEAR(lg.gradient[p], (shifted(h) - shifted(-h)) / (2 * h), 1e-5) << "parameter " << p;
    }
  }
}

TEST(Hyperparameters, RecoversLengthscaleOfSmoothFunction) {
  TrainingSet t;
  t.points.resize(40, 1);
  t.values.resize(40);
  for (int i = 0; i < 40; ++i) {
    const double x = i / 39.0;
    t.points(i, 0) = x;
    t.values[i] = std::sin(x / 0.3);
  }
  const KernelSpec k = optimize_hyperparams(t, KernelFamily::SquaredExponential, 5, 1);
  // sin(x / 0.3) changes by about one unit over 0.3 to 0.9 in x.
  EXPECT_GT(k.lengthscales[0], 0.2);
  EXPECT_LT(k.lengthscales[0], 1.2);
  EXPECT_LT(k.noise_variance, 1e-3);
}

TEST(Hyperparameters, DeterministicForSeed) {
  std::mt19937_64 rng(4);
  const TrainingSet t = test::random_training(rng, 12, 2);
  const KernelSpec a = optimize_hyperparams(t, KernelFamily::Matern52, 3, 9);
  const KernelSpec b = optimize_hyperparams(t, KernelFamily::Matern52, 3, 9);
  EXPECT_EQ(a.lengthscales, b.lengthscales);
  EXPECT_EQ(a.signal_variance, b.signal_variance);
  EXPECT_EQ(a.noise_variance, b.noise_variance);
}

TEST(Hyperparameters, ImprovesOnHeuristicStart) {
  std::mt19937_64 rng(6);
  TrainingSet t = test::random_training(rng, 15, 2);
  for (Eigen::Index i = 0; i < t.size(); ++i) t.values[i] = std::cos(4 * t.points(i, 0)) + t.points(i, 1);
  const KernelSpec h = heuristic_kernel(t, KernelFamily::Matern52);
  const KernelSpec k = optimize_hyperparams(t, KernelFamily::Matern52, 5, 1);
  EXPECT_GE(log_marginal_likelihood(k, t), log_marginal_likelihood(h, t) - 1e-9);
}

TEST(Hyperparameters, ConstantDataStillReturns) {
  TrainingSet t;
  t.points.resize(5, 1);
  t.points << 0.1, 0.3, 0.5, 0.7, 0.9;
  t.values = Eigen::VectorXd::Constant(5, 2.0);
  KernelSpec k;
  EXPECT_NO_THROW(k = optimize_hyperparams(t, KernelFamily::Matern52, 3, 0));
  EXPECT_NO_THROW(k.validate());
}

TEST(Hyperparameters, DuplicatePointBarelyMovesLikelihood) {
  std::mt19937_64 rng(10);
  TrainingSet t = test::random_training(rng, 8, 2);
  const KernelSpec k = optimize_hyperparams(t, KernelFamily::Matern52, 3, 0);
  const double before = log_marginal_likelihood(k, t);
  t.add(t.points.row(0).transpose(), t.values[0]);
  const double after = log_marginal_likelihood(k, t);
  EXPECT_TRUE(std::isfinite(after));
  // A repeated noise-free observation adds almost no information.
  EXPECT_LT(std::abs(after - before), 15.0);
}

}  // namespace
}  // namespace gibo::gp
