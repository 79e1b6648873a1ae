#include <atomic>
#include <cmath>

#include <gtest/gtest.h>

#include "gibo/baselines/baselines.hpp"
#include "gibo/common/errors.hpp"

namespace gibo::baselines {
namespace {

using solver::OptimizationTrace;
using solver::TargetSpec;
using solver::TerminationReason;

struct CountingModel {
  std::shared_ptr<std::atomic<int>> calls = std::make_shared<std::atomic<int>>(0);
  FunctionModel model;

  explicit CountingModel(Eigen::Index m)
      : model(DomainBounds::unit(m), names(m), [c = calls](const Eigen::VectorXd& y) {
          ++*c;
          return Eigen::VectorXd(y);
        }) {}

  static std::vector<std::string> names(Eigen::Index m) {
    std::vector<std::string> n;
    for (Eigen::Index i = 0; i < m; ++i) n.push_back("o" + std::to_string(i));
    return n;
  }
};

TargetSpec target_at(const Eigen::VectorXd& x) {
  std::vector<solver::TargetEntry> e;
  for (Eigen::Index i = 0; i < x.size(); ++i) e.push_back({"o" + std::to_string(i), x[i], 1.0, 1.0});
  return TargetSpec(e);
}

BaselineConfig config(BaselineKind kind, int budget, std::uint64_t seed, double eps = 1e-3) {
  BaselineConfig c;
  c.kind = kind;
  c.max_evaluations = budget;
  c.seed = seed;
  c.norm_epsilon = eps;
  return c;
}

void check_accounting(const OptimizationTrace& t, const CountingModel& m, int budget) {
  EXPECT_EQ(static_cast<int>(t.records.size()), m.calls->load());
  EXPECT_LE(static_cast<int>(t.records.size()), budget);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < t.records.size(); ++i) {
    const auto& r = t.records[i];
    EXPECT_EQ(r.iteration, static_cast<int>(i));
    EXPECT_TRUE(m.model.bounds().contains(r.point));
    best = std::min(best, r.norm_sq);
    EXPECT_EQ(r.incumbent, best);
  }
}

TEST(Names, RoundTrip) {
  for (auto k : {BaselineKind::FiniteDifferenceGradient, BaselineKind::RandomSearch, BaselineKind::EvolutionStrategy}) {
    EXPECT_EQ(baseline_kind_from_string(to_string(k)), k);
  }
  EXPECT_EQ(baseline_kind_from_string("es"), BaselineKind::EvolutionStrategy);
  EXPECT_THROW(baseline_kind_from_string("bo"), std::invalid_argument);
}

TEST(Config, Validation) {
  BaselineConfig c;
  c.max_evaluations = 0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = {};
  c.parents = 9;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = {};
  c.fd_step = 0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
}

TEST(FiniteDifference, ConvexIdentityReachesTightTolerance) {
  const CountingModel m(2);
  const Eigen::Vector2d x(0.35, 0.6);
  const auto t = run_baseline(m.model, target_at(x), config(BaselineKind::FiniteDifferenceGradient, 300, 0, 1e-6),
                              m.model.bounds());
  EXPECT_EQ(t.reason, TerminationReason::TargetMet);
  EXPECT_LT(t.incumbent_value(), 1e-6);
  check_accounting(t, m, 300);
}

TEST(FiniteDifference, TargetOnTheBoundary) {
  const CountingModel m(2);
  const auto t = run_baseline(m.model, target_at(Eigen::Vector2d(1.0, 0.0)),
                              config(BaselineKind::FiniteDifferenceGradient, 300, 3, 1e-6), m.model.bounds());
  EXPECT_EQ(t.reason, TerminationReason::TargetMet);
  check_accounting(t, m, 300);
}

TEST(FiniteDifference, ExplicitStart) {
  const CountingModel m(1);
  BaselineConfig c = config(BaselineKind::FiniteDifferenceGradient, 50, 0);
  c.start = Eigen::VectorXd::Constant(1, 0.9);
  const auto t = run_baseline(m.model, target_at(Eigen::VectorXd::Constant(1, 0.1)), c, m.model.bounds());
  EXPECT_EQ(t.records.front().point[0], 0.9);
}

TEST(RandomSearch, DeterministicAndUniform) {
  const CountingModel a(3);
  const CountingModel b(3);
  const auto target = target_at(Eigen::Vector3d(5, 5, 5));
  const auto ta = run_baseline(a.model, target, config(BaselineKind::RandomSearch, 400, 9), a.model.bounds());
  const auto tb = run_baseline(b.model, target, config(BaselineKind::RandomSearch, 400, 9), b.model.bounds());
  ASSERT_EQ(ta.records.size(), 400u);
  EXPECT_EQ(ta.reason, TerminationReason::BudgetExhausted);
  Eigen::Vector3d mean = Eigen::Vector3d::Zero();
  for (std::size_t i = 0; i < ta.records.size(); ++i) {
    EXPECT_EQ(ta.records[i].point, tb.records[i].point);
    mean += ta.records[i].point;
  }
  mean /= 400.0;
  // Uniform mean 0.5 with standard error sqrt(1/12/400) ~ 0.0144.
  for (int d = 0; d < 3; ++d) EXPECT_NEAR(mean[d], 0.5, 0.06);
  check_accounting(ta, a, 400);
}

TEST(RandomSearch, DifferentSeedsDiffer) {
  const CountingModel m(2);
  const auto target = target_at(Eigen::Vector2d(5, 5));
  const auto a = run_baseline(m.model, target, config(BaselineKind::RandomSearch, 5, 1), m.model.bounds());
  const auto b = run_baseline(m.model, target, config(BaselineKind::RandomSearch, 5, 2), m.model.bounds());
  EXPECT_NE(a.records[0].point, b.records[0].point);
}

TEST(EvolutionStrategy, SolvesSmoothProblem) {
  const CountingModel m(3);
  const auto t = run_baseline(m.model, target_at(Eigen::Vector3d(0.2, 0.5, 0.7)),
                              config(BaselineKind::EvolutionStrategy, 600, 4), m.model.bounds());
  EXPECT_EQ(t.reason, TerminationReason::TargetMet);
  check_accounting(t, m, 600);
}

TEST(Baselines, FailuresAreRecorded) {
  FunctionModel m(DomainBounds::unit(1), {"o0"}, [](const Eigen::VectorXd& y) -> Eigen::VectorXd {
    if (y[0] < 0.05) throw EvaluationError("edge");
    return y;
  });
  const auto t = run_baseline(m, target_at(Eigen::VectorXd::Constant(1, 0.5)),
                              config(BaselineKind::RandomSearch, 100, 0, 1e-12), m.bounds());
  EXPECT_GT(t.failures(), 0);
  for (const auto& r : t.records) {
    if (r.failed) EXPECT_TRUE(std::isnan(r.norm_sq));
  }
}

}  // namespace
}  // namespace gibo::baselines
