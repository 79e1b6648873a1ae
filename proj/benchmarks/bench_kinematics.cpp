#include <benchmark/benchmark.h>

#include "gibo/kinematics/fixture.hpp"
#include "gibo/kinematics/suspension_model.hpp"

namespace {

using namespace gibo::kin;

const SuspensionFixture& fixture() {
  static const SuspensionFixture f = load_fixture(std::string(GIBO_SOURCE_DIR) + "/data/nominal_macpherson.json");
  return f;
}

void BM_SolvePosition(benchmark::State& state) {
  const MacphersonKinematics k(fixture().hardpoints);
  for (auto _ : state) benchmark::DoNotOptimize(k.solve_position(0.1));
}
BENCHMARK(BM_SolvePosition);

void BM_Sweep(benchmark::State& state) {
  SweepSpec sweep{0.08, static_cast<int>(state.range(0))};
  const auto travel = sweep.travel();
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_kinematics(fixture().hardpoints, travel));
}
BENCHMARK(BM_Sweep)->Arg(33)->Arg(129)->Unit(benchmark::kMicrosecond);

void BM_ModelEvaluate(benchmark::State& state) {
  std::vector<FreeCoordinate> coords;
  for (const char* name : {"outer_tie_rod.x", "outer_tie_rod.y", "outer_tie_rod.z"}) {
    FreeCoordinate c = parse_free_coordinate(name);
    const double nominal = fixture().hardpoints[c.hardpoint][c.axis];
    c.lower = nominal - 0.025;
    c.upper = nominal + 0.025;
    coords.push_back(c);
  }
  const SuspensionModel model(fixture(), DesignVariables(coords));
  const Eigen::VectorXd y = model.bounds().center();
  for (auto _ : state) benchmark::DoNotOptimize(model.evaluate(y));
}
BENCHMARK(BM_ModelEvaluate)->Unit(benchmark::kMicrosecond);

}  // namespace
