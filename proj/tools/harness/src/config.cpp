#include "gibo/harness/config.hpp"

#include <algorithm>
#include <set>

#include "gibo/harness/json_source.hpp"
#include "gibo/kinematics/fixture.hpp"

namespace gibo::harness {

namespace {

namespace fs = std::filesystem;

fs::path resolve(const fs::path& base, const std::string& p) {
  const fs::path path(p);
  return (path.is_absolute() ? path : base / path).lexically_normal();
}

// Runs a core validate() and re-throws its message at `node`.
template <typename F>
void check(const Node& node, F&& validate) {
  try {
    validate();
  } catch (const std::invalid_argument& e) {
    node.fail(e.what());
  }
}

ModelConfig parse_model(const Node& node, const fs::path& base, kin::SuspensionFixture& fixture) {
  node.allow_keys({"fixture", "external"});
  ModelConfig model;
  const Node fixture_node = node.at("fixture");
  model.fixture = resolve(base, fixture_node.string());
  try {
    fixture = kin::load_fixture(model.fixture);
  } catch (const std::invalid_argument& e) {
    fixture_node.fail(e.what());
  }
  if (node.has("external")) {
    const Node ext = node.at("external");
    ext.allow_keys({"command", "workdir", "timeout_seconds"});
    kin::ExternalProcessSpec spec;
    const Node cmd = ext.at("command");
    if (cmd.is_string()) {
      spec.command = {cmd.string()};
    } else if (cmd.is_array() && cmd.size() > 0) {
      for (std::size_t i = 0; i < cmd.size(); ++i) spec.command.push_back(cmd.at(i).string());
    } else {
      cmd.fail("expected a program name or a non-empty argv array");
    }
    spec.workdir = resolve(base, ext.string_or("workdir", "external_work"));
    spec.timeout = std::chrono::duration<double>(ext.positive_or("timeout_seconds", 600.0));
    model.external = std::move(spec);
  }
  return model;
}

std::vector<kin::FreeCoordinate> parse_design(const Node& node, const kin::SuspensionFixture& fixture) {
  if (!node.is_array() || node.size() == 0) node.fail("expected a non-empty array of free coordinates");
  if (node.size() > 3 * kin::kHardpointCount) node.fail("at most 24 free coordinates are supported");
  std::vector<kin::FreeCoordinate> out;
  std::set<std::string> seen;
  for (std::size_t i = 0; i < node.size(); ++i) {
    const Node item = node.at(i);
    item.allow_keys({"coordinate", "lower", "upper", "range"});
    const Node name = item.at("coordinate");
    kin::FreeCoordinate c;
    try {
      c = kin::parse_free_coordinate(name.string());
    } catch (const std::invalid_argument& e) {
      name.fail(e.what());
    }
    if (!seen.insert(c.name()).second) name.fail("coordinate " + c.name() + " is listed twice");
    const double nominal = fixture.hardpoints[c.hardpoint][c.axis];
    if (item.has("range")) {
      if (item.has("lower") || item.has("upper")) item.fail(c.name() + ": give either range or lower/upper");
      const double r = item.at("range").positive();
      c.lower = nominal - r;
      c.upper = nominal + r;
    } else {
      c.lower = item.at("lower").number();
      c.upper = item.at("upper").number();
      if (!(c.lower < c.upper)) {
        item.fail(c.name() + ": lower bound " + item.at("lower").json().dump() + " is not below upper bound " +
                  item.at("upper").json().dump());
      }
    }
    out.push_back(c);
  }
  return out;
}

TargetConfig parse_target(const Node& node, bool external) {
  node.allow_keys({"mode", "statistics", "interior_fraction", "offset", "grid_points"});
  TargetConfig t;
  const std::string mode = node.string_or("mode", "values");
  if (mode == "values") {
    t.mode = TargetMode::Values;
  } else if (mode == "self_inverse") {
    t.mode = TargetMode::SelfInverse;
  } else if (mode == "beyond_image") {
    t.mode = TargetMode::BeyondImage;
  } else {
    node.at("mode").fail("unknown target mode '" + mode + "' (expected values, self_inverse or beyond_image)");
  }

  const auto& known = kin::curve_statistic_names();
  const auto add_entry = [&](const std::string& name, const Node& where) {
    if (!external && std::find(known.begin(), known.end(), name) == known.end()) {
      std::string list;
      for (const auto& k : known) list += (list.empty() ? "" : ", ") + k;
      where.fail("unknown statistic '" + name + "' (the built-in model provides " + list + ")");
    }
    solver::TargetEntry e;
    e.name = name;
    t.entries.push_back(e);
  };

  const Node stats = node.at("statistics");
  if (stats.is_array()) {
    if (t.mode == TargetMode::Values) stats.fail("mode 'values' needs an object of statistic -> value");
    for (std::size_t i = 0; i < stats.size(); ++i) add_entry(stats.at(i).string(), stats.at(i));
  } else if (stats.is_object()) {
    for (const auto& [name, value] : stats.members()) {
      add_entry(name, value);
      solver::TargetEntry& e = t.entries.back();
      if (value.is_number()) {
        if (t.mode != TargetMode::Values) value.fail("target values are derived in mode '" + mode + "'");
        e.value = value.number();
      } else {
        value.allow_keys({"value", "weight", "scale"});
        if (t.mode == TargetMode::Values) {
          e.value = value.at("value").number();
        } else if (value.has("value")) {
          value.at("value").fail("target values are derived in mode '" + mode + "'");
        }
        e.weight = value.positive_or("weight", 1.0);
        e.scale = value.positive_or("scale", 1.0);
      }
    }
  } else {
    stats.fail("expected an object or an array of statistic names");
  }
  if (t.entries.empty()) stats.fail("at least one target statistic is required");

  t.interior_fraction = node.number_or("interior_fraction", t.interior_fraction);
  if (!(t.interior_fraction > 0.0 && t.interior_fraction <= 1.0)) {
    node.at("interior_fraction").fail("must be in (0, 1]");
  }
  t.offset = node.positive_or("offset", t.offset);
  const long long grid = node.integer_or("grid_points", t.grid_points);
  if (grid < 2 || grid > 100000) node.at("grid_points").fail("must be in [2, 100000]");
  t.grid_points = static_cast<int>(grid);
  return t;
}

OptimizerConfig parse_optimizer(const Node& node) {
  OptimizerConfig o;
  o.method = node.string_or("method", "bo");
  if (o.method == "bo") {
    node.allow_keys({"method", "acquisition", "xi", "restarts", "prescreen", "kernel", "hyper_restarts",
                     "hyper_max_iterations", "refit_every", "objective_transform", "max_noise_variance", "min_lengthscale"});
    if (node.has("acquisition")) {
      try {
        o.acquisition.kind = acq::acquisition_kind_from_string(node.at("acquisition").string());
      } catch (const std::invalid_argument& e) {
        node.at("acquisition").fail(e.what());
      }
    }
    o.acquisition.xi = node.number_or("xi", o.acquisition.xi);
    o.acquisition.restarts = static_cast<int>(node.integer_or("restarts", o.acquisition.restarts));
    o.acquisition.prescreen = static_cast<int>(node.integer_or("prescreen", o.acquisition.prescreen));
    check(node, [&] { o.acquisition.validate(); });
    if (node.has("kernel")) {
      try {
        o.surrogate.family = gp::kernel_family_from_string(node.at("kernel").string());
      } catch (const std::invalid_argument& e) {
        node.at("kernel").fail(e.what());
      }
    }
    o.surrogate.hyper_restarts = static_cast<int>(node.integer_or("hyper_restarts", o.surrogate.hyper_restarts));
    o.surrogate.hyper_max_iterations =
        static_cast<int>(node.integer_or("hyper_max_iterations", o.surrogate.hyper_max_iterations));
    o.surrogate.refit_every = static_cast<int>(node.integer_or("refit_every", o.surrogate.refit_every));
    if (node.has("objective_transform")) {
      try {
        o.surrogate.transform = solver::objective_transform_from_string(node.at("objective_transform").string());
      } catch (const std::invalid_argument& e) {
        node.at("objective_transform").fail(e.what());
      }
    }
    o.surrogate.max_noise_variance = node.positive_or("max_noise_variance", o.surrogate.max_noise_variance);
    if (o.surrogate.max_noise_variance <= 1e-10) node.at("max_noise_variance").fail("must be > 1e-10");
    o.surrogate.min_lengthscale = node.positive_or("min_lengthscale", o.surrogate.min_lengthscale);
    if (o.surrogate.min_lengthscale >= 1e3) node.at("min_lengthscale").fail("must be below 1000");
    if (o.surrogate.hyper_restarts < 1) node.at("hyper_restarts").fail("must be >= 1");
    if (o.surrogate.hyper_max_iterations < 1) node.at("hyper_max_iterations").fail("must be >= 1");
    if (o.surrogate.refit_every < 1) node.at("refit_every").fail("must be >= 1");
    return o;
  }

  baselines::BaselineConfig& b = o.baseline;
  try {
    b.kind = baselines::baseline_kind_from_string(o.method);
  } catch (const std::invalid_argument&) {
    node.at("method").fail("unknown method '" + o.method +
                           "' (expected bo, fd_gradient, random_search or evolution_strategy)");
  }
  o.method = std::string(baselines::to_string(b.kind));
  switch (b.kind) {
    case baselines::BaselineKind::FiniteDifferenceGradient:
      node.allow_keys({"method", "fd_step", "armijo", "initial_step", "min_step"});
      b.fd_step = node.positive_or("fd_step", b.fd_step);
      b.armijo = node.positive_or("armijo", b.armijo);
      b.initial_step = node.positive_or("initial_step", b.initial_step);
      b.min_step = node.positive_or("min_step", b.min_step);
      break;
    case baselines::BaselineKind::RandomSearch:
      node.allow_keys({"method"});
      break;
    case baselines::BaselineKind::EvolutionStrategy:
      node.allow_keys({"method", "population", "parents", "sigma0"});
      b.population = static_cast<int>(node.integer_or("population", b.population));
      b.parents = static_cast<int>(node.integer_or("parents", b.parents));
      b.sigma0 = node.positive_or("sigma0", b.sigma0);
      break;
  }
  check(node, [&] { b.validate(); });
  return o;
}

solver::TerminationPolicy parse_termination(const Node& node) {
  node.allow_keys({"norm_epsilon", "acquisition_epsilon", "max_evaluations", "n_init", "acquisition_warmup"});
  solver::TerminationPolicy p;
  p.norm_epsilon = node.positive_or("norm_epsilon", p.norm_epsilon);
  p.acquisition_epsilon = node.positive_or("acquisition_epsilon", p.acquisition_epsilon);
  p.max_evaluations = static_cast<int>(node.integer_or("max_evaluations", p.max_evaluations));
  p.n_init = static_cast<int>(node.integer_or("n_init", p.n_init));
  p.acquisition_warmup = static_cast<int>(node.integer_or("acquisition_warmup", p.acquisition_warmup));
  check(node, [&] { p.validate(); });
  return p;
}

}  // namespace

std::string_view to_string(TargetMode mode) {
  switch (mode) {
    case TargetMode::Values:
      return "values";
    case TargetMode::SelfInverse:
      return "self_inverse";
    case TargetMode::BeyondImage:
      return "beyond_image";
  }
  return "unknown";
}

std::string OptimizerConfig::label() const {
  return is_bo() ? "bo_" + std::string(acq::to_string(acquisition.kind)) : method;
}

ExperimentConfig parse_experiment_config(std::string text, const std::string& origin,
                                         const std::filesystem::path& base_dir) {
  const JsonSource source(std::move(text), origin);
  Node root(source, source.root(), "");
  root.expect_object();
  root.allow_keys({"schema_version", "name", "model", "design_variables", "target", "optimizer", "termination",
                   "seed", "output_dir"});
  const long long version = root.integer_or("schema_version", kConfigSchemaVersion);
  if (version != kConfigSchemaVersion) {
    root.at("schema_version").fail("unsupported schema_version " + std::to_string(version));
  }

  ExperimentConfig c;
  c.source = origin;
  c.name = root.string_or("name", fs::path(origin).stem().string());
  if (c.name.empty()) root.at("name").fail("must not be empty");

  kin::SuspensionFixture fixture;
  c.model = parse_model(root.at("model"), base_dir, fixture);
  c.design = parse_design(root.at("design_variables"), fixture);
  c.target = parse_target(root.at("target"), c.model.external.has_value());
  c.optimizer = root.has("optimizer") ? parse_optimizer(root.at("optimizer")) : OptimizerConfig{};
  c.termination = root.has("termination") ? parse_termination(root.at("termination")) : solver::TerminationPolicy{};
  c.optimizer.baseline.max_evaluations = c.termination.max_evaluations;
  c.optimizer.baseline.norm_epsilon = c.termination.norm_epsilon;
  if (root.has("seed")) {
    const long long seed = root.at("seed").integer();
    if (seed < 0) root.at("seed").fail("must be >= 0");
    c.seed = static_cast<std::uint64_t>(seed);
  }
  c.output_dir = root.string_or("output_dir", "runs/" + c.name);
  return c;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  return parse_experiment_config(read_text_file(path), path.string(),
                                 path.parent_path().empty() ? fs::path(".") : path.parent_path());
}

}  // namespace gibo::harness
