#include <algorithm>
#include <cmath>
#include <set>

#include <gtest/gtest.h>

#include "gibo/common/errors.hpp"
#include "gibo/common/sampling.hpp"
#include "gibo/solver/inverse_solver.hpp"
#include "gibo/solver/target.hpp"
#include "gibo/solver/trace.hpp"

namespace gibo::solver {
namespace {

// g(y) = y on [0,1]^m, outputs named o0, o1, ...
FunctionModel identity_model(Eigen::Index m) {
  std::vector<std::string> names;
  for (Eigen::Index i = 0; i < m; ++i) names.push_back("o" + std::to_string(i));
  return FunctionModel(DomainBounds::unit(m), names, [](const Eigen::VectorXd& y) { return y; });
}

TargetSpec target_at(const Eigen::VectorXd& x) {
  std::vector<TargetEntry> e;
  for (Eigen::Index i = 0; i < x.size(); ++i) e.push_back({"o" + std::to_string(i), x[i], 1.0, 1.0});
  return TargetSpec(e);
}

void check_trace_invariants(const OptimizationTrace& t, const DomainBounds& bounds, const TerminationPolicy& p) {
  ASSERT_LE(static_cast<int>(t.records.size()), p.max_evaluations);
  double best = std::numeric_limits<double>::infinity();
  double prev_incumbent = std::numeric_limits<double>::infinity();
  for (const auto& r : t.records) {
    EXPECT_TRUE(bounds.contains(r.point));
    if (!r.failed) best = std::min(best, r.norm_sq);
    if (std::isfinite(r.incumbent)) {
      EXPECT_LE(r.incumbent, prev_incumbent);
      EXPECT_EQ(r.incumbent, best);
      prev_incumbent = r.incumbent;
    }
  }
  EXPECT_EQ(t.incumbent_value(), best);
  if (t.reason == TerminationReason::TargetMet) EXPECT_LT(t.incumbent_value(), p.norm_epsilon);
  if (t.reason == TerminationReason::AcquisitionConverged) {
    ASSERT_FALSE(t.acquisition_maxima.empty());
    EXPECT_LE(t.acquisition_maxima.back(), p.acquisition_epsilon);
  }
}

TEST(Residual, HandArithmetic) {
  FunctionModel m(DomainBounds::unit(1), {"a", "b"}, [](const Eigen::VectorXd&) { return Eigen::Vector2d(0.3, -0.4); });
  const TargetSpec t({{"a", 0.0, 1.0, 1.0}, {"b", 0.0, 1.0, 1.0}});
  EXPECT_NEAR(residual_objective(m, t, Eigen::VectorXd::Constant(1, 0.5)).norm_sq, 0.25, 1e-15);
}

TEST(Residual, ScalesAndWeights) {
  FunctionModel m(DomainBounds::unit(1), {"a", "b"}, [](const Eigen::VectorXd&) { return Eigen::Vector2d(3.0, 1.0); });
  const TargetSpec t({{"a", 1.0, 2.0, 4.0}, {"b", 0.0, 1.0, 0.5}});
  // 2 * ((3-1)/4)^2 + ((1-0)/0.5)^2
  EXPECT_NEAR(residual_objective(m, t, Eigen::VectorXd::Constant(1, 0.5)).norm_sq, 0.5 + 4.0, 1e-15);
}

TEST(Residual, SelfInverseIsZero) {
  const FunctionModel m = identity_model(3);
  const Eigen::Vector3d y(0.2, 0.7, 0.4);
  const ResidualResult r = residual_objective(m, target_at(y), y);
  EXPECT_LE(r.norm_sq, 1e-12);
  EXPECT_EQ(r.output.at("o1"), 0.7);
}

TEST(Residual, RejectsPointsOutsideBounds) {
  const FunctionModel m = identity_model(1);
  EXPECT_THROW(residual_objective(m, target_at(Eigen::VectorXd::Zero(1)), Eigen::VectorXd::Constant(1, 1.5)),
               std::invalid_argument);
}

TEST(TargetSpecTest, Validation) {
  EXPECT_THROW(TargetSpec({{"a", 0, 0.0, 1}}).validate(), std::invalid_argument);
  EXPECT_THROW(TargetSpec({{"a", 0, 1, -1}}).validate(), std::invalid_argument);
  EXPECT_THROW(TargetSpec({{"a", 0, 1, 1}, {"a", 1, 1, 1}}).validate(), std::invalid_argument);
  EXPECT_THROW(TargetSpec({{"Bump_Steer", 0, 1, 1}}).validate_against({"bump_steer"}), std::invalid_argument);
  EXPECT_NO_THROW(TargetSpec({{"bump_steer", 0, 1, 1}}).validate_against({"bump_steer", "roll_steer"}));
}

TEST(Policy, Validation) {
  TerminationPolicy p;
  p.n_init = 1;
  EXPECT_THROW(p.validate(), std::invalid_argument);
  p = {};
  p.max_evaluations = 5;
  EXPECT_THROW(p.validate(), std::invalid_argument);
  p = {};
  p.norm_epsilon = 0;
  EXPECT_THROW(p.validate(), std::invalid_argument);
  p = {};
  p.acquisition_epsilon = -1;
  EXPECT_THROW(p.validate(), std::invalid_argument);
}

TEST(InitialDesign, TwoPointsStratified) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto pts = initial_design(DomainBounds::unit(1), 2, seed);
    ASSERT_EQ(pts.size(), 2u);
    std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) { return a[0] < b[0]; });
    EXPECT_GE(pts[0][0], 0.0);
    EXPECT_LT(pts[0][0], 0.5);
    EXPECT_GE(pts[1][0], 0.5);
    EXPECT_LE(pts[1][0], 1.0);
  }
}

TEST(InitialDesign, LatinPropertyStrictInteriorAndDeterminism) {
  const DomainBounds box(Eigen::Vector3d(-1, 0, 10), Eigen::Vector3d(1, 0.5, 20));
  const auto a = initial_design(box, 12, 5);
  const auto b = initial_design(box, 12, 5);
  ASSERT_EQ(a.size(), 12u);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i], b[i]);
  for (Eigen::Index d = 0; d < 3; ++d) {
    std::set<int> strata;
    for (const auto& p : a) {
      EXPECT_GT(p[d], box.lower()[d]);
      EXPECT_LT(p[d], box.upper()[d]);
      strata.insert(static_cast<int>(std::floor(box.to_unit(p)[d] * 12)));
    }
    EXPECT_EQ(strata.size(), 12u);
  }
  EXPECT_THROW(initial_design(box, 1, 0), std::invalid_argument);
}

TEST(Solve, FeasibleTargetMet) {
  const FunctionModel m = identity_model(2);
  const TargetSpec t = target_at(Eigen::Vector2d(0.3, 0.6));
  TerminationPolicy p;
  p.max_evaluations = 60;
  const OptimizationTrace tr = solve(m, t, p, {}, 1);
  EXPECT_EQ(tr.reason, TerminationReason::TargetMet);
  check_trace_invariants(tr, m.bounds(), p);
}

TEST(Solve, InfeasibleTargetConvergesOnAcquisition) {
  const FunctionModel m = identity_model(2);
  const TargetSpec t = target_at(Eigen::Vector2d(11.0, 11.0));  // 10 units beyond the image
  TerminationPolicy p;
  p.max_evaluations = 200;
  const OptimizationTrace tr = solve(m, t, p, {}, 3);
  EXPECT_EQ(tr.reason, TerminationReason::AcquisitionConverged);
  EXPECT_LT(static_cast<int>(tr.records.size()), p.max_evaluations);
  EXPECT_GE(static_cast<int>(tr.records.size()), p.n_init + p.acquisition_warmup);
  check_trace_invariants(tr, m.bounds(), p);
}

TEST(Solve, BudgetEqualToInitialDesign) {
  const FunctionModel m = identity_model(2);
  TerminationPolicy p;
  p.n_init = 4;
  p.max_evaluations = 4;
  const OptimizationTrace tr = solve(m, target_at(Eigen::Vector2d(5, 5)), p, {}, 0);
  EXPECT_EQ(tr.reason, TerminationReason::BudgetExhausted);
  EXPECT_EQ(tr.records.size(), 4u);
  EXPECT_TRUE(tr.acquisition_maxima.empty());
}

TEST(Solve, DeterministicForSeed) {
  const FunctionModel m = identity_model(2);
  const TargetSpec t = target_at(Eigen::Vector2d(0.8, 0.1));
  TerminationPolicy p;
  p.max_evaluations = 25;
  p.norm_epsilon = 1e-9;
  const auto a = solve(m, t, p, {}, 42);
  const auto b = solve(m, t, p, {}, 42);
  ASSERT_EQ(a.records.size(), b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    EXPECT_EQ(a.records[i].point, b.records[i].point);
    EXPECT_EQ(a.records[i].norm_sq, b.records[i].norm_sq);
  }
}

TEST(Solve, IdentityTransformAndMpiAlsoRun) {
  const FunctionModel m = identity_model(2);
  TerminationPolicy p;
  p.max_evaluations = 40;
  SurrogateOptions s;
  s.transform = ObjectiveTransform::Identity;
  acq::AcquisitionConfig a;
  a.kind = acq::AcquisitionKind::MaxProbabilityOfImprovement;
  a.xi = 0.01;
  const auto tr = solve(m, target_at(Eigen::Vector2d(0.5, 0.5)), p, a, 2, s);
  check_trace_invariants(tr, m.bounds(), p);
  EXPECT_EQ(tr.method, "bo_mpi");
}

TEST(Solve, FailedEvaluationsAreRecordedAndExcluded) {
  // Fails on a slab covering a tenth of the domain.
  FunctionModel m(DomainBounds::unit(2), {"o0", "o1"}, [](const Eigen::VectorXd& y) -> Eigen::VectorXd {
    if (y[0] > 0.9) throw EvaluationError("slab");
    return y;
  });
  TerminationPolicy p;
  p.max_evaluations = 40;
  const auto tr = solve(m, target_at(Eigen::Vector2d(0.2, 0.2)), p, {}, 4);
  check_trace_invariants(tr, m.bounds(), p);
  for (const auto& r : tr.records) {
    if (r.failed) {
      EXPECT_TRUE(r.outputs.empty());
      EXPECT_TRUE(std::isnan(r.norm_sq));
      EXPECT_EQ(r.error, "slab");
    }
  }
}

TEST(Solve, AbortsWhenMostEvaluationsFail) {
  FunctionModel m(DomainBounds::unit(1), {"o0"}, [](const Eigen::VectorXd& y) -> Eigen::VectorXd {
    if (y[0] > 0.05) throw EvaluationError("broken");
    return y;
  });
  TerminationPolicy p;
  p.max_evaluations = 30;
  try {
    solve(m, target_at(Eigen::VectorXd::Constant(1, 0.5)), p, {}, 0);
    FAIL() << "expected SolverAborted";
  } catch (const SolverAborted& e) {
    EXPECT_GT(e.partial().failures(), 6);
    EXPECT_NE(std::string(e.what()).find("broken"), std::string::npos);
  }
}

TEST(Trace, EvaluationsToThreshold) {
  OptimizationTrace t;
  for (double v : {5.0, 0.5, 2.0, 1e-4, 1e-5}) {
    EvaluationRecord r;
    r.iteration = static_cast<int>(t.records.size());
    r.norm_sq = v;
    t.records.push_back(r);
  }
  EXPECT_EQ(t.evaluations_to_threshold(1e-3), 4);
  EXPECT_EQ(t.evaluations_to_threshold(1.0), 2);
  EXPECT_FALSE(t.evaluations_to_threshold(1e-9).has_value());
}

TEST(Transform, Names) {
  EXPECT_EQ(objective_transform_from_string("log"), ObjectiveTransform::Log);
  EXPECT_EQ(objective_transform_from_string("identity"), ObjectiveTransform::Identity);
  EXPECT_THROW(objective_transform_from_string("sqrt"), std::invalid_argument);
}

}  // namespace
}  // namespace gibo::solver
