#include "gibo/harness/compare.hpp"

#include <algorithm>
#include <fstream>
#include <future>
#include <limits>
#include <set>

#include "gibo/harness/json_source.hpp"

namespace gibo::harness {

namespace {

using nlohmann::json;

std::string describe_design(const ExperimentConfig& c) {
  std::string s;
  for (const auto& fc : c.design) {
    s += fc.name() + "[" + format_number(fc.lower) + "," + format_number(fc.upper) + "] ";
  }
  return s;
}

std::string describe_target(const ExperimentConfig& c) {
  std::string s(to_string(c.target.mode));
  for (const auto& e : c.target.entries) {
    s += " " + e.name + ":" + format_number(e.weight) + ":" + format_number(e.scale);
    if (c.target.mode == TargetMode::Values) s += ":" + format_number(e.value);
  }
  if (c.target.mode == TargetMode::SelfInverse) s += " fraction " + format_number(c.target.interior_fraction);
  if (c.target.mode == TargetMode::BeyondImage) {
    s += " offset " + format_number(c.target.offset) + " grid " + std::to_string(c.target.grid_points);
  }
  return s;
}

std::string describe_model(const ExperimentConfig& c) {
  std::string s = c.model.fixture.string();
  if (c.model.external) {
    for (const auto& arg : c.model.external->command) s += " " + arg;
  }
  return s;
}

}  // namespace

void validate_comparable(const std::vector<ExperimentConfig>& configs) {
  if (configs.size() < 2) throw ConfigError("compare: at least two configs are required");
  const ExperimentConfig& first = configs.front();
  for (const ExperimentConfig& c : configs) {
    const auto differ = [&](const std::string& what, const std::string& a, const std::string& b) {
      throw ConfigError(c.source.string() + ": cannot compare with " + first.source.string() + ": " + what +
                        " differs (" + b + " vs " + a + ")");
    };
    if (describe_model(c) != describe_model(first)) differ("model", describe_model(first), describe_model(c));
    if (describe_design(c) != describe_design(first)) {
      differ("design_variables", describe_design(first), describe_design(c));
    }
    if (describe_target(c) != describe_target(first)) differ("target", describe_target(first), describe_target(c));
    if (c.termination.max_evaluations != first.termination.max_evaluations) {
      differ("termination/max_evaluations", std::to_string(first.termination.max_evaluations),
             std::to_string(c.termination.max_evaluations));
    }
    if (c.termination.norm_epsilon != first.termination.norm_epsilon) {
      differ("termination/norm_epsilon", format_number(first.termination.norm_epsilon),
             format_number(c.termination.norm_epsilon));
    }
  }
}

std::optional<double> censored_median(std::vector<std::optional<int>> values) {
  if (values.empty()) return std::nullopt;
  std::vector<double> v;
  for (const auto& x : values) v.push_back(x ? double(*x) : std::numeric_limits<double>::infinity());
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  const double med = n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
  if (!std::isfinite(med)) return std::nullopt;
  return med;
}

ComparisonResult compare(const std::vector<ExperimentConfig>& configs, const CompareOptions& options) {
  validate_comparable(configs);
  ComparisonResult out;
  out.threshold = configs.front().termination.norm_epsilon;

  // Unique labels: the config name, suffixed on collisions.
  std::vector<std::string> labels;
  std::set<std::string> used;
  for (const auto& c : configs) {
    std::string label = c.name;
    for (int k = 2; used.count(label); ++k) label = c.name + "_" + std::to_string(k);
    used.insert(label);
    labels.push_back(label);
  }

  std::vector<ExperimentConfig> members;
  for (std::size_t i = 0; i < configs.size(); ++i) {
    const std::vector<std::uint64_t> seeds = options.seeds.empty() ? std::vector{configs[i].seed} : options.seeds;
    for (std::uint64_t seed : seeds) {
      ExperimentConfig m = configs[i];
      m.seed = seed;
      m.output_dir = options.output_dir / labels[i] / ("seed_" + std::to_string(seed));
      members.push_back(std::move(m));
      out.runs.push_back({labels[i], seed, members.back().output_dir, {}});
    }
  }

  const bool concurrent = options.parallel && !configs.front().model.external;
  if (concurrent) {
    std::vector<std::future<ExperimentResult>> pending;
    for (const auto& m : members) pending.push_back(std::async(std::launch::async, run_experiment, std::cref(m)));
    for (std::size_t i = 0; i < pending.size(); ++i) out.runs[i].result = pending[i].get();
  } else {
    for (std::size_t i = 0; i < members.size(); ++i) out.runs[i].result = run_experiment(members[i]);
  }

  for (std::size_t i = 0; i < configs.size(); ++i) {
    MethodSummary s;
    s.label = labels[i];
    s.method = configs[i].optimizer.label();
    for (const auto& run : out.runs) {
      if (run.label == labels[i]) s.evaluations_to_threshold.push_back(run.result.trace.evaluations_to_threshold(out.threshold));
    }
    s.median_evaluations_to_threshold = censored_median(s.evaluations_to_threshold);
    out.methods.push_back(std::move(s));
  }

  std::filesystem::create_directories(options.output_dir);
  const bool single_seed = out.runs.size() == configs.size();
  {
    std::ofstream csv(options.output_dir / "comparison.csv", std::ios::binary | std::ios::trunc);
    if (!csv) throw std::runtime_error("cannot write " + (options.output_dir / "comparison.csv").string());
    csv << "evaluation";
    std::size_t rows = 0;
    for (const auto& run : out.runs) {
      csv << ',' << run.label;
      if (!single_seed) csv << "/seed_" << run.seed;
      rows = std::max(rows, run.result.trace.records.size());
    }
    csv << '\n';
    for (std::size_t k = 0; k < rows; ++k) {
      csv << k + 1;
      for (const auto& run : out.runs) {
        const auto& records = run.result.trace.records;
        csv << ',' << (k < records.size() ? format_number(records[k].incumbent) : std::string());
      }
      csv << '\n';
    }
  }
  {
    json j;
    j["schema_version"] = kArtifactSchemaVersion;
    j["threshold"] = out.threshold;
    json methods = json::array();
    for (const auto& s : out.methods) {
      json runs = json::array();
      for (const auto& run : out.runs) {
        if (run.label != s.label) continue;
        const auto& t = run.result.trace;
        const auto hit = t.evaluations_to_threshold(out.threshold);
        runs.push_back({{"seed", run.seed},
                        {"termination_reason", run.result.abort_message ? "Aborted" : std::string(solver::to_string(t.reason))},
                        {"evaluations", t.records.size()},
                        {"best_norm_sq", std::isfinite(t.incumbent_value()) ? json(t.incumbent_value()) : json(nullptr)},
                        {"evaluations_to_threshold", hit ? json(*hit) : json(nullptr)},
                        {"output_dir", run.output_dir.string()}});
      }
      methods.push_back({{"label", s.label},
                         {"method", s.method},
                         {"runs", runs},
                         {"median_evaluations_to_threshold", s.median_evaluations_to_threshold
                                                                 ? json(*s.median_evaluations_to_threshold)
                                                                 : json(nullptr)}});
    }
    j["methods"] = methods;
    j["schema"] = {{"comparison.csv",
                    {{"columns",
                      {{{"name", "evaluation"}, {"description", "1-based discipline evaluation count"}},
                       {{"name", "<label>[/seed_<seed>]"},
                        {"description", "best norm_sq after that many evaluations; empty once the run has stopped"}}}}}}};
    std::ofstream f(options.output_dir / "compare_summary.json", std::ios::binary | std::ios::trunc);
    f << j.dump(2) << '\n';
  }
  return out;
}

}  // namespace gibo::harness
