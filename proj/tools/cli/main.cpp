// gibo: command-line front end for the inverse-design experiments.
//
//   gibo solve --config FILE [--seed N] [--out DIR]
//   gibo compare --configs FILE... [--seeds N...] [--out DIR] [--parallel]
//   gibo kinematics --fixture FILE [--sweep AMPLITUDE[:SAMPLES]]
//   gibo evaluate [--workdir DIR]     (external-process protocol endpoint)
//
// Exit status: 0 success, 1 usage error, 2 invalid configuration, 3 solver or
// evaluation failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "gibo/common/errors.hpp"
#include "gibo/harness/compare.hpp"
#include "gibo/harness/config.hpp"
#include "gibo/harness/experiment.hpp"
#include "gibo/harness/json_source.hpp"
#include "gibo/kinematics/external_adapter.hpp"
#include "gibo/kinematics/fixture.hpp"
#include "gibo/kinematics/macpherson.hpp"
#include "gibo/kinematics/suspension_model.hpp"

namespace {

using namespace gibo;
namespace fs = std::filesystem;

constexpr int kExitUsage = 1;
constexpr int kExitConfig = 2;
constexpr int kExitFailure = 3;

kin::SweepSpec parse_sweep(const std::string& text) {
  kin::SweepSpec sweep;
  const auto colon = text.find(':');
  try {
    std::size_t used = 0;
    sweep.amplitude = std::stod(text.substr(0, colon), &used);
    if (used != (colon == std::string::npos ? text.size() : colon)) throw std::invalid_argument(text);
    if (colon != std::string::npos) {
      const std::string count = text.substr(colon + 1);
      sweep.samples = std::stoi(count, &used);
      if (used != count.size()) throw std::invalid_argument(text);
    }
  } catch (const std::logic_error&) {
    throw std::invalid_argument("--sweep: expected AMPLITUDE[:SAMPLES], e.g. 0.08:33, got '" + text + "'");
  }
  sweep.validate();
  return sweep;
}

int cmd_solve(const std::string& config_path, std::optional<std::uint64_t> seed, const std::string& out) {
  harness::ExperimentConfig config = harness::load_experiment_config(config_path);
  if (seed) config.seed = *seed;
  if (!out.empty()) config.output_dir = out;
  const harness::ExperimentResult result = harness::run_experiment(config);
  const auto& trace = result.trace;
  if (result.abort_message) {
    std::cerr << "gibo: " << *result.abort_message << "\npartial artifacts written to "
              << config.output_dir.string() << '\n';
    return kExitFailure;
  }
  std::cout << config.name << ": " << solver::to_string(trace.reason) << " after " << trace.records.size()
            << " evaluations, best norm_sq " << harness::format_number(trace.incumbent_value()) << " ("
            << config.output_dir.string() << ")\n";
  return 0;
}

int cmd_compare(const std::vector<std::string>& paths, const std::vector<std::uint64_t>& seeds,
                const std::string& out, bool parallel) {
  std::vector<harness::ExperimentConfig> configs;
  for (const auto& p : paths) configs.push_back(harness::load_experiment_config(p));
  harness::CompareOptions options;
  options.seeds = seeds;
  if (!out.empty()) options.output_dir = out;
  options.parallel = parallel;
  const harness::ComparisonResult result = harness::compare(configs, options);
  for (const auto& m : result.methods) {
    std::cout << m.label << " (" << m.method << "): median evaluations to norm_sq < "
              << harness::format_number(result.threshold) << ": "
              << (m.median_evaluations_to_threshold ? harness::format_number(*m.median_evaluations_to_threshold)
                                                    : std::string("not reached"))
              << '\n';
  }
  int status = 0;
  for (const auto& run : result.runs) {
    if (run.result.abort_message) {
      std::cerr << "gibo: " << run.label << " seed " << run.seed << ": " << *run.result.abort_message << '\n';
      status = kExitFailure;
    }
  }
  return status;
}

int cmd_kinematics(const std::string& fixture_path, const std::string& sweep_text) {
  kin::SuspensionFixture fixture = kin::load_fixture(fixture_path);
  if (!sweep_text.empty()) fixture.sweep = parse_sweep(sweep_text);
  const std::vector<double> travel = fixture.sweep.travel();
  const kin::KinematicCurve curve = kin::evaluate_kinematics(fixture.hardpoints, travel);
  std::cout << "travel_m,toe_deg,camber_deg\n";
  for (std::size_t i = 0; i < curve.travel.size(); ++i) {
    std::cout << harness::format_number(curve.travel[i]) << ',' << harness::format_number(curve.toe[i]) << ','
              << harness::format_number(curve.camber[i]) << '\n';
  }
  const auto stats = kin::curve_statistics(curve, fixture.track_width, fixture.roll_travel).as_named();
  for (const auto& name : kin::curve_statistic_names()) {
    std::cerr << name << " = " << harness::format_number(stats.at(name)) << '\n';
  }
  return 0;
}

int cmd_evaluate(const fs::path& workdir) {
  const std::string text = harness::read_text_file(workdir / kin::kInputFile);
  const kin::ExternalQuery q = kin::parse_query_json(text);
  const auto stats = kin::evaluate_statistics(q.hardpoints, q.sweep, q.track_width, q.roll_travel);
  std::ofstream out(workdir / kin::kOutputFile, std::ios::binary | std::ios::trunc);
  out << kin::outputs_to_json(stats.as_named()) << '\n';
  if (!out) throw std::runtime_error("cannot write " + (workdir / kin::kOutputFile).string());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Inverse suspension design by Bayesian optimization"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out;
  auto* solve = app.add_subcommand("solve", "Run one experiment");
  solve->add_option("--config", config_path, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
  solve->add_option("--seed", seed, "Override the config's seed");
  solve->add_option("--out", out, "Override the output directory");

  std::vector<std::string> config_paths;
  std::vector<std::uint64_t> seeds;
  bool parallel = false;
  auto* cmp = app.add_subcommand("compare", "Run several optimizers on the same problem");
  cmp->add_option("--configs", config_paths, "Experiment configs sharing model and target")
      ->required()
      ->check(CLI::ExistingFile);
  cmp->add_option("--seeds", seeds, "Run every config once per seed");
  cmp->add_option("--out", out, "Output directory (default: compare)");
  cmp->add_flag("--parallel", parallel, "Run members concurrently (built-in model only)");

  std::string fixture_path;
  std::string sweep_text;
  auto* kinematics = app.add_subcommand("kinematics", "Print the toe/camber curve of a fixture");
  kinematics->add_option("--fixture", fixture_path, "Fixture geometry (JSON)")->required()->check(CLI::ExistingFile);
  kinematics->add_option("--sweep", sweep_text, "AMPLITUDE[:SAMPLES] in meters, e.g. 0.08:33");

  std::string workdir = ".";
  auto* evaluate = app.add_subcommand("evaluate", "Answer one external-protocol query (input.json -> output.json)");
  evaluate->add_option("--workdir", workdir, "Directory holding input.json")->check(CLI::ExistingDirectory);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*solve) return cmd_solve(config_path, seed, out);
    if (*cmp) return cmd_compare(config_paths, seeds, out, parallel);
    if (*kinematics) return cmd_kinematics(fixture_path, sweep_text);
    if (*evaluate) return cmd_evaluate(workdir);
  } catch (const harness::ConfigError& e) {
    std::cerr << "gibo: invalid configuration: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "gibo: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "gibo: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}
