#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <random>

#include <gtest/gtest.h>
#include <json.hpp>

#include "gibo/common/errors.hpp"
#include "gibo/kinematics/curve_statistics.hpp"
#include "gibo/kinematics/fixture.hpp"
#include "gibo/kinematics/macpherson.hpp"
#include "gibo/kinematics/suspension_model.hpp"
#include "support.hpp"

namespace gibo::kin {
namespace {

// Nominal fixture statistics, frozen from a verified run.
constexpr double GOLDEN_BUMP_STEER = 18.010088371621659;
constexpr double GOLDEN_ROLL_STEER = 0.2509568571133946;

SuspensionFixture nominal() { return load_fixture(test::nominal_fixture()); }

double toe_at(const HardpointSet& hp, double travel) {
  const double t[] = {travel};
  return evaluate_kinematics(hp, t).toe[0];
}

// Moves the tie rod ends (inner y, z and outer y, z) until toe at four travels
// within +-h equals static toe. Newton with a finite-difference Jacobian, started
// from the nominal geometry.
HardpointSet zero_bump_steer_geometry(HardpointSet hp, double h) {
  const double travel[] = {-h, -0.5 * h, 0.0, 0.5 * h, h};
  auto& inner = hp[Hardpoint::InnerTieRod];
  auto& outer = hp[Hardpoint::OuterTieRod];
  const std::array<double*, 4> vars = {&inner.y(), &inner.z(), &outer.y(), &outer.z()};
  auto residual = [&]() {
    const auto c = evaluate_kinematics(hp, travel);
    return Eigen::Vector4d(c.toe[0] - c.toe[2], c.toe[1] - c.toe[2], c.toe[3] - c.toe[2], c.toe[4] - c.toe[2]);
  };
  for (int it = 0; it < 30; ++it) {
    const Eigen::Vector4d r = residual();
    if (r.norm() < 1e-12) break;
    Eigen::Matrix4d J;
    for (int k = 0; k < 4; ++k) {
      *vars[k] += 1e-7;
      J.col(k) = (residual() - r) / 1e-7;
      *vars[k] -= 1e-7;
    }
    const Eigen::Vector4d step = J.fullPivLu().solve(r);
    for (int k = 0; k < 4; ++k) *vars[k] -= step[k];
  }
  return hp;
}

TEST(Pose, DesignPositionIsIdentity) {
  const MacphersonKinematics k(nominal().hardpoints);
  const PoseSolution s = k.solve_position(0.0);
  EXPECT_LE((s.pose.rotation - Eigen::Matrix3d::Identity()).norm(), 1e-12);
  EXPECT_LE(s.pose.translation.norm(), 1e-12);
  EXPECT_LE(k.residuals(s).max(), 1e-12);
  EXPECT_EQ(k.toe_deg(s.pose), 0.0);
  EXPECT_EQ(k.wheel_center_travel(s.pose), 0.0);
}

TEST(Pose, ConstraintsHoldOverArmAngles) {
  const MacphersonKinematics k(nominal().hardpoints);
  double seed = 0.0;
  for (double a = -0.3; a <= 0.3; a += 0.01) {
    const PoseSolution s = k.solve_position(a, seed);
    seed = s.steer_angle;
    EXPECT_LE(k.residuals(s).max(), 1e-9) << "lca angle " << a;
    EXPECT_NEAR(s.pose.rotation.determinant(), 1.0, 1e-12);
    EXPECT_LE((s.pose.rotation.transpose() * s.pose.rotation - Eigen::Matrix3d::Identity()).norm(), 1e-12);
  }
  EXPECT_NO_THROW(solve_suspension_position(nominal().hardpoints, 0.1));
}

TEST(Pose, LockBeyondReach) {
  const MacphersonKinematics k(nominal().hardpoints);
  const double far[] = {0.0, 0.6};
  EXPECT_THROW(k.sweep(far), KinematicLockError);
}

TEST(Sweep, ToeAtZeroEqualsStaticToeAndResidualsSmall) {
  const auto f = nominal();
  const MacphersonKinematics k(f.hardpoints);
  const auto travel = f.sweep.travel();
  ASSERT_EQ(travel.size(), 33u);
  const auto curve = k.sweep(travel);
  const auto zero = std::find(travel.begin(), travel.end(), 0.0) - travel.begin();
  EXPECT_EQ(curve.toe[zero], 0.0);
  PoseSolution seed;
  for (double t : travel) {
    seed = k.solve_travel(t, seed);
    EXPECT_LE(k.residuals(seed).max(), 1e-9);
    EXPECT_NEAR(k.wheel_center_travel(seed.pose), t, 1e-9);
  }
}

TEST(Sweep, IndependentOfOrder) {
  const auto f = nominal();
  auto travel = f.sweep.travel();
  const auto forward = evaluate_kinematics(f.hardpoints, travel);
  std::reverse(travel.begin(), travel.end());
  const auto backward = evaluate_kinematics(f.hardpoints, travel);
  const std::size_t n = travel.size();
  for (std::size_t i = 0; i < n; ++i) {
    EXPECT_EQ(forward.toe[i], backward.toe[n - 1 - i]);
    EXPECT_EQ(forward.camber[i], backward.camber[n - 1 - i]);
  }
}

TEST(Sweep, ContinuousInOuterTieRod) {
  const auto f = nominal();
  const double base = evaluate_statistics(f.hardpoints, f.sweep, f.track_width, f.roll_travel).bump_steer;
  for (int axis = 0; axis < 3; ++axis) {
    for (double d : {-1e-6, 1e-6}) {
      HardpointSet hp = f.hardpoints;
      hp[Hardpoint::OuterTieRod][axis] += d;
      const double moved = evaluate_statistics(hp, f.sweep, f.track_width, f.roll_travel).bump_steer;
      EXPECT_LT(std::abs(moved - base), 1e-2) << "axis " << axis << " delta " << d;
    }
  }
}

TEST(Sweep, ZeroBumpSteerGeometryIsFlat) {
  const HardpointSet hp = zero_bump_steer_geometry(nominal().hardpoints, 0.05);
  SweepSpec fine{0.05, 101};
  const auto curve = evaluate_kinematics(hp, fine.travel());
  for (double toe : curve.toe) EXPECT_LT(std::abs(toe), 1e-3);
  EXPECT_LT(std::abs(curve_statistics(curve, 1.6, 0.02).bump_steer), 0.05);
}

TEST(Sweep, BumpSteerMonotoneInOuterTieRodHeight) {
  const auto f = nominal();
  std::vector<double> bs;
  for (int i = -10; i <= 10; ++i) {
    HardpointSet hp = f.hardpoints;
    hp[Hardpoint::OuterTieRod].z() += 1e-3 * i;
    bs.push_back(evaluate_statistics(hp, f.sweep, f.track_width, f.roll_travel).bump_steer);
  }
  const double sign = bs.back() > bs.front() ? 1.0 : -1.0;
  for (std::size_t i = 1; i < bs.size(); ++i) EXPECT_GT(sign * (bs[i] - bs[i - 1]), 0.0) << "step " << i;
}

TEST(Statistics, NominalGolden) {
  const auto f = nominal();
  const auto s = evaluate_statistics(f.hardpoints, f.sweep, f.track_width, f.roll_travel);
  EXPECT_NEAR(s.bump_steer, GOLDEN_BUMP_STEER, 1e-9);
  EXPECT_NEAR(s.roll_steer, GOLDEN_ROLL_STEER, 1e-9);
  EXPECT_EQ(s.static_toe, 0.0);
}

KinematicCurve synthetic(const std::function<double(double)>& toe) {
  KinematicCurve c;
  c.travel = SweepSpec{0.08, 33}.travel();
  for (double t : c.travel) {
    c.toe.push_back(toe(t));
    c.camber.push_back(-1.0 + 5.0 * t);
  }
  return c;
}

TEST(Statistics, ZeroCurve) {
  const auto s = curve_statistics(synthetic([](double) { return 0.0; }));
  EXPECT_EQ(s.bump_steer, 0.0);
  EXPECT_EQ(s.roll_steer, 0.0);
  EXPECT_EQ(s.static_toe, 0.0);
  EXPECT_NEAR(s.camber_gain, 5.0, 1e-12);
  EXPECT_EQ(s.static_camber, -1.0);
}

TEST(Statistics, LinearCurve) {
  const auto s = curve_statistics(synthetic([](double t) { return 0.1 + 2.0 * t; }));
  EXPECT_NEAR(s.bump_steer, 2.0, 1e-12);
  EXPECT_EQ(s.static_toe, 0.1);
  // toe difference 2 * 2.0 * 0.02 over twice the roll angle atan(0.04 / 1.6)
  const double roll_deg = std::atan(0.04 / 1.6) * 180.0 / M_PI;
  EXPECT_NEAR(s.roll_steer, 0.08 / (2.0 * roll_deg), 1e-12);
  EXPECT_NEAR(s.roll_steer, 0.02793, 1e-5);
}

TEST(Statistics, IgnoresCurvatureOutsideCentralSamples) {
  // Quadratic toe is symmetric, so the central least-squares slope is exactly zero.
  const auto s = curve_statistics(synthetic([](double t) { return 40.0 * t * t; }));
  EXPECT_NEAR(s.bump_steer, 0.0, 1e-12);
  EXPECT_NEAR(s.roll_steer, 0.0, 1e-12);
}

TEST(Statistics, RejectsBadCurves) {
  KinematicCurve c = synthetic([](double) { return 0.0; });
  c.toe.pop_back();
  EXPECT_THROW(curve_statistics(c), std::invalid_argument);
  KinematicCurve d;
  d.travel = {-0.01, 0.0, 0.01};
  d.toe = d.camber = {0, 0, 0};
  EXPECT_THROW(curve_statistics(d), std::invalid_argument);
  EXPECT_THROW(curve_statistics(synthetic([](double) { return 0.0; }), 0.0), std::invalid_argument);
}

TEST(Fixture, RoundTrip) {
  const auto f = nominal();
  const auto g = parse_fixture(fixture_to_json(f));
  EXPECT_EQ(g.name, f.name);
  for (Hardpoint p : all_hardpoints()) EXPECT_EQ(g.hardpoints[p], f.hardpoints[p]);
  EXPECT_EQ(g.sweep.samples, f.sweep.samples);
  EXPECT_EQ(g.track_width, f.track_width);
}

TEST(Fixture, Errors) {
  const auto error_of = [](const std::string& text) {
    try {
      parse_fixture(text);
    } catch (const std::invalid_argument& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  EXPECT_NE(error_of("{").find("fixture"), std::string::npos);
  EXPECT_NE(error_of(R"({"schema_version": 2})").find("schema_version"), std::string::npos);
  nlohmann::json doc = nlohmann::json::parse(fixture_to_json(nominal()));
  doc["hardpoints"].erase("outer_tie_rod");
  EXPECT_NE(error_of(doc.dump()).find("outer_tie_rod"), std::string::npos);
  doc = nlohmann::json::parse(fixture_to_json(nominal()));
  doc["hardpoints"]["wheel_center"] = {1.0, 2.0};
  EXPECT_NE(error_of(doc.dump()).find("wheel_center"), std::string::npos);
  EXPECT_THROW(load_fixture("/nonexistent/fixture.json"), std::invalid_argument);
}

TEST(Hardpoints, Validation) {
  HardpointSet hp = nominal().hardpoints;
  hp[Hardpoint::OuterTieRod] = hp[Hardpoint::InnerTieRod];
  EXPECT_THROW(hp.validate(), std::invalid_argument);
  hp = nominal().hardpoints;
  hp[Hardpoint::LcaRearPivot] = hp[Hardpoint::LcaFrontPivot];
  EXPECT_THROW(MacphersonKinematics{hp}, std::invalid_argument);
  hp = nominal().hardpoints;
  hp[Hardpoint::SpindleOuter].x() = std::nan("");
  EXPECT_THROW(hp.validate(), std::invalid_argument);
}

TEST(DesignVariablesTest, ParseApplyExtract) {
  auto c = parse_free_coordinate("outer_tie_rod.z");
  EXPECT_EQ(c.hardpoint, Hardpoint::OuterTieRod);
  EXPECT_EQ(c.axis, 2);
  EXPECT_EQ(c.name(), "outer_tie_rod.z");
  EXPECT_THROW(parse_free_coordinate("outer_tie_rod.w"), std::invalid_argument);
  EXPECT_THROW(parse_free_coordinate("tie_rod.z"), std::invalid_argument);
  c.lower = 0.2;
  c.upper = 0.24;
  const DesignVariables v({c});
  const auto hp = v.apply(nominal().hardpoints, Eigen::VectorXd::Constant(1, 0.23));
  EXPECT_EQ(hp[Hardpoint::OuterTieRod].z(), 0.23);
  EXPECT_EQ(v.extract(hp)[0], 0.23);
  EXPECT_THROW(DesignVariables({c, c}), std::invalid_argument);
  c.lower = 0.3;
  EXPECT_THROW(DesignVariables({c}), std::invalid_argument);
}

TEST(Model, EvaluatesNamedStatistics) {
  const auto f = nominal();
  FreeCoordinate c = parse_free_coordinate("outer_tie_rod.z");
  c.lower = 0.21;
  c.upper = 0.23;
  const SuspensionModel m(f, DesignVariables({c}));
  const NamedValues out = m.evaluate(Eigen::VectorXd::Constant(1, 0.22));
  EXPECT_NEAR(out.at("bump_steer"), GOLDEN_BUMP_STEER, 1e-9);
  EXPECT_EQ(out.size(), curve_statistic_names().size());
  EXPECT_EQ(m.input_names(), std::vector<std::string>{"outer_tie_rod.z"});
}

TEST(Model, RandomPerturbationsSatisfyConstraints) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-0.01, 0.01);
  const auto f = nominal();
  for (int trial = 0; trial < 10; ++trial) {
    HardpointSet hp = f.hardpoints;
    for (Hardpoint p : all_hardpoints())
      for (int a = 0; a < 3; ++a) hp[p][a] += u(rng);
    const MacphersonKinematics k(hp);
    PoseSolution seed;
    for (double t : f.sweep.travel()) {
      seed = k.solve_travel(t, seed);
      EXPECT_LE(k.residuals(seed).max(), 1e-9);
    }
  }
}

}  // namespace
}  // namespace gibo::kin
