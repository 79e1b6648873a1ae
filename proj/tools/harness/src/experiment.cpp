#include "gibo/harness/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>

#include "gibo/baselines/baselines.hpp"
#include "gibo/common/errors.hpp"
#include "gibo/common/sampling.hpp"
#include "gibo/kinematics/external_adapter.hpp"
#include "gibo/kinematics/fixture.hpp"
#include "gibo/kinematics/suspension_model.hpp"

namespace gibo::harness {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr std::uint64_t kPlantStream = 0x506c616e74ULL;
constexpr long long kMaxGridEvaluations = 1'000'000;

std::vector<std::string> target_names(const TargetConfig& t) {
  std::vector<std::string> names;
  for (const auto& e : t.entries) names.push_back(e.name);
  return names;
}

std::unique_ptr<DisciplineModel> make_model(const ExperimentConfig& config) {
  kin::SuspensionFixture fixture = kin::load_fixture(config.model.fixture);
  kin::DesignVariables variables(config.design);
  if (config.model.external) {
    return kin::external_adapter(*config.model.external, std::move(fixture), std::move(variables),
                                 target_names(config.target));
  }
  return std::make_unique<kin::SuspensionModel>(std::move(fixture), std::move(variables));
}

// Evaluates the full grid; returns the outputs of every successful point.
std::vector<NamedValues> scan_grid(const DisciplineModel& model, int per_axis, long long& evaluations) {
  const Eigen::Index m = model.bounds().dim();
  const double total = std::pow(static_cast<double>(per_axis), static_cast<double>(m));
  if (total > static_cast<double>(kMaxGridEvaluations)) {
    throw std::invalid_argument("beyond_image: grid of " + std::to_string(per_axis) + "^" + std::to_string(m) +
                                " points exceeds the limit of " + std::to_string(kMaxGridEvaluations));
  }
  std::vector<NamedValues> outputs;
  std::vector<int> index(static_cast<std::size_t>(m), 0);
  Eigen::VectorXd u(m);
  while (true) {
    for (Eigen::Index i = 0; i < m; ++i) u[i] = index[static_cast<std::size_t>(i)] / double(per_axis - 1);
    try {
      outputs.push_back(model.evaluate(model.bounds().from_unit(u)));
    } catch (const EvaluationError&) {
      // unreachable design; not part of the image
    }
    ++evaluations;
    Eigen::Index k = 0;
    while (k < m && ++index[static_cast<std::size_t>(k)] == per_axis) index[static_cast<std::size_t>(k++)] = 0;
    if (k == m) break;
  }
  if (outputs.empty()) throw std::invalid_argument("beyond_image: every grid point failed to evaluate");
  return outputs;
}

ImageCheck image_range(const std::vector<NamedValues>& outputs, const std::vector<solver::TargetEntry>& entries) {
  ImageCheck check;
  for (const auto& e : entries) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& o : outputs) {
      lo = std::min(lo, o.at(e.name));
      hi = std::max(hi, o.at(e.name));
    }
    check.minimum[e.name] = lo;
    check.maximum[e.name] = hi;
  }
  return check;
}

json named_json(const NamedValues& values) {
  json j = json::object();
  for (const auto& [k, v] : values) j[k] = v;
  return j;
}

json point_json(const std::vector<std::string>& names, const Eigen::VectorXd& y) {
  json j = json::object();
  for (std::size_t i = 0; i < names.size(); ++i) j[names[i]] = y[static_cast<Eigen::Index>(i)];
  return j;
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

ResolvedExperiment resolve_experiment(const ExperimentConfig& config) {
  ResolvedExperiment r;
  r.model = make_model(config);
  std::vector<solver::TargetEntry> entries = config.target.entries;
  switch (config.target.mode) {
    case TargetMode::Values:
      break;
    case TargetMode::SelfInverse: {
      const DomainBounds& b = r.model->bounds();
      const Eigen::VectorXd half = 0.5 * config.target.interior_fraction * b.extent();
      const DomainBounds interior(b.center() - half, b.center() + half);
      auto rng = make_rng(config.seed, kPlantStream);
      r.planted = uniform_point(interior, rng);
      const NamedValues out = r.model->evaluate(*r.planted);
      for (auto& e : entries) e.value = out.at(e.name);
      break;
    }
    case TargetMode::BeyondImage: {
      long long evaluations = 0;
      const std::vector<NamedValues> grid = scan_grid(*r.model, config.target.grid_points, evaluations);
      ImageCheck check = image_range(grid, entries);
      check.grid_evaluations = evaluations;
      for (auto& e : entries) e.value = check.maximum.at(e.name) + config.target.offset * e.scale;
      const solver::TargetSpec spec(entries);
      check.min_norm_sq = std::numeric_limits<double>::infinity();
      for (const auto& o : grid) check.min_norm_sq = std::min(check.min_norm_sq, spec.weighted_norm_sq(o));
      r.image = std::move(check);
      break;
    }
  }
  r.target = solver::TargetSpec(std::move(entries));
  r.target.validate();
  r.target.validate_against(r.model->output_names());
  return r;
}

solver::OptimizationTrace run_optimizer(const ExperimentConfig& config, const ResolvedExperiment& resolved) {
  if (config.optimizer.is_bo()) {
    return solver::solve(*resolved.model, resolved.target, config.termination, config.optimizer.acquisition,
                         config.seed, config.optimizer.surrogate);
  }
  baselines::BaselineConfig b = config.optimizer.baseline;
  b.seed = config.seed;
  b.max_evaluations = config.termination.max_evaluations;
  b.norm_epsilon = config.termination.norm_epsilon;
  return baselines::run_baseline(*resolved.model, resolved.target, b, resolved.model->bounds());
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  const ResolvedExperiment resolved = resolve_experiment(config);
  ExperimentResult result;
  try {
    result.trace = run_optimizer(config, resolved);
  } catch (const solver::SolverAborted& e) {
    result.trace = e.partial();
    result.abort_message = e.what();
  }
  result.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_artifacts(config.output_dir, config, resolved, result);
  return result;
}

std::string format_number(double value) {
  if (!std::isfinite(value)) return std::isnan(value) ? "" : (value > 0 ? "inf" : "-inf");
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

void write_trace_csv(std::ostream& out, const solver::OptimizationTrace& trace) {
  out << "iteration";
  for (const auto& n : trace.input_names) out << ',' << n;
  for (const auto& n : trace.output_names) out << ',' << n;
  out << ",norm_sq,incumbent,acquisition_max,status\n";
  for (const auto& r : trace.records) {
    out << r.iteration;
    for (Eigen::Index i = 0; i < r.point.size(); ++i) out << ',' << format_number(r.point[i]);
    for (const auto& n : trace.output_names) {
      auto it = r.outputs.find(n);
      out << ',' << (it == r.outputs.end() ? std::string() : format_number(it->second));
    }
    out << ',' << format_number(r.norm_sq) << ',' << format_number(r.incumbent) << ','
        << format_number(r.acquisition_max) << ',' << (r.failed ? "failed" : "ok") << '\n';
  }
}

void write_scatter_csv(std::ostream& out, const solver::OptimizationTrace& trace, const DomainBounds& bounds) {
  out << "iteration";
  for (const auto& n : trace.input_names) out << ',' << n;
  out << ",norm_sq,status\n";
  for (const auto& r : trace.records) {
    const Eigen::VectorXd u = bounds.to_unit(r.point);
    out << r.iteration;
    for (Eigen::Index i = 0; i < u.size(); ++i) out << ',' << format_number(u[i]);
    out << ',' << format_number(r.norm_sq) << ',' << (r.failed ? "failed" : "ok") << '\n';
  }
}

json artifact_schema(const solver::OptimizationTrace& trace) {
  json trace_cols = json::array();
  trace_cols.push_back({{"name", "iteration"}, {"description", "0-based discipline evaluation index"}});
  for (const auto& n : trace.input_names) {
    trace_cols.push_back({{"name", n}, {"description", "design coordinate, meters"}});
  }
  for (const auto& n : trace.output_names) {
    trace_cols.push_back({{"name", n}, {"description", "raw model output; empty when the evaluation failed"}});
  }
  trace_cols.push_back({{"name", "norm_sq"}, {"description", "weighted squared residual ||g(y) - x||^2 in scaled units"}});
  trace_cols.push_back({{"name", "incumbent"}, {"description", "smallest norm_sq up to and including this row"}});
  trace_cols.push_back(
      {{"name", "acquisition_max"}, {"description", "acquisition maximum that proposed this point; empty otherwise"}});
  trace_cols.push_back({{"name", "status"}, {"description", "ok or failed"}});

  json scatter_cols = json::array();
  scatter_cols.push_back({{"name", "iteration"}, {"description", "0-based discipline evaluation index"}});
  for (const auto& n : trace.input_names) {
    scatter_cols.push_back({{"name", n}, {"description", "design coordinate mapped to [0,1] over its bounds"}});
  }
  scatter_cols.push_back({{"name", "norm_sq"}, {"description", "as in trace.csv"}});
  scatter_cols.push_back({{"name", "status"}, {"description", "ok or failed"}});
  return {{"version", kArtifactSchemaVersion},
          {"trace.csv", {{"columns", trace_cols}}},
          {"scatter.csv", {{"columns", scatter_cols}}}};
}

json summary_json(const ExperimentConfig& config, const ResolvedExperiment& resolved, const ExperimentResult& result) {
  const auto& trace = result.trace;
  json j;
  j["schema_version"] = kArtifactSchemaVersion;
  j["name"] = config.name;
  j["method"] = trace.method;
  j["seed"] = config.seed;
  j["termination_reason"] = result.abort_message ? json("Aborted") : json(solver::to_string(trace.reason));
  if (result.abort_message) j["error"] = *result.abort_message;
  j["evaluations"] = trace.records.size();
  j["failures"] = trace.failures();
  j["wall_time_seconds"] = result.wall_seconds;
  const auto hit = trace.evaluations_to_threshold(config.termination.norm_epsilon);
  j["evaluations_to_threshold"] = hit ? json(*hit) : json(nullptr);
  j["last_acquisition_max"] =
      trace.acquisition_maxima.empty() ? json(nullptr) : number_or_null(trace.acquisition_maxima.back());

  json target = json::object();
  target["mode"] = to_string(config.target.mode);
  json stats = json::object();
  for (const auto& e : resolved.target.entries()) {
    stats[e.name] = {{"value", e.value}, {"weight", e.weight}, {"scale", e.scale}};
  }
  target["statistics"] = stats;
  if (resolved.planted) target["planted_point"] = point_json(trace.input_names, *resolved.planted);
  if (resolved.image) {
    target["image_check"] = {{"grid_evaluations", resolved.image->grid_evaluations},
                             {"minimum", named_json(resolved.image->minimum)},
                             {"maximum", named_json(resolved.image->maximum)},
                             {"min_norm_sq", resolved.image->min_norm_sq}};
  }
  j["target"] = target;
  j["termination"] = {{"norm_epsilon", config.termination.norm_epsilon},
                      {"acquisition_epsilon", config.termination.acquisition_epsilon},
                      {"max_evaluations", config.termination.max_evaluations},
                      {"n_init", config.termination.n_init}};

  if (const auto* best = trace.incumbent()) {
    j["best"] = {{"iteration", best->iteration},
                 {"norm_sq", best->norm_sq},
                 {"point", point_json(trace.input_names, best->point)},
                 {"normalized_point", point_json(trace.input_names, resolved.model->bounds().to_unit(best->point))},
                 {"outputs", named_json(best->outputs)}};
  } else {
    j["best"] = nullptr;
  }
  j["bounds"] = {{"lower", point_json(trace.input_names, resolved.model->bounds().lower())},
                 {"upper", point_json(trace.input_names, resolved.model->bounds().upper())}};
  j["schema"] = artifact_schema(trace);
  return j;
}

void write_artifacts(const fs::path& dir, const ExperimentConfig& config, const ResolvedExperiment& resolved,
                     const ExperimentResult& result) {
  fs::create_directories(dir);
  const auto open = [&](const char* name) {
    std::ofstream out(dir / name, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
    return out;
  };
  {
    auto out = open("trace.csv");
    write_trace_csv(out, result.trace);
  }
  {
    auto out = open("scatter.csv");
    write_scatter_csv(out, result.trace, resolved.model->bounds());
  }
  {
    auto out = open("summary.json");
    out << summary_json(config, resolved, result).dump(2) << '\n';
  }
}

}  // namespace gibo::harness
