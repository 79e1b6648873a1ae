#include "gibo/kinematics/external_adapter.hpp"

#include <fcntl.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "gibo/common/errors.hpp"

namespace gibo::kin {

namespace {

using nlohmann::json;

std::mutex& workdir_mutex(const std::filesystem::path& workdir) {
  static std::mutex registry_mutex;
  static std::map<std::string, std::unique_ptr<std::mutex>> registry;
  std::error_code ec;
  std::filesystem::path key = std::filesystem::weakly_canonical(workdir, ec);
  if (ec) key = workdir;
  std::lock_guard lock(registry_mutex);
  auto& slot = registry[key.string()];
  if (!slot) slot = std::make_unique<std::mutex>();
  return *slot;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

std::string query_to_json(const ExternalQuery& query) {
  json doc;
  doc["schema_version"] = 1;
  json hp = json::object();
  for (Hardpoint p : all_hardpoints()) {
    const auto& v = query.hardpoints[p];
    hp[std::string(hardpoint_name(p))] = {v.x(), v.y(), v.z()};
  }
  doc["hardpoints"] = hp;
  doc["sweep"] = {{"amplitude", query.sweep.amplitude}, {"samples", query.sweep.samples}};
  doc["track_width"] = query.track_width;
  doc["roll_travel"] = query.roll_travel;
  return doc.dump(2);
}

ExternalQuery parse_query_json(std::string_view text) {
  // Same layout as a fixture file, so reuse that parser.
  const SuspensionFixture f = parse_fixture(text);
  return {f.hardpoints, f.sweep, f.track_width, f.roll_travel};
}

std::string outputs_to_json(const NamedValues& values) {
  json doc = json::object();
  for (const auto& [name, value] : values) doc[name] = value;
  return doc.dump(2);
}

NamedValues parse_outputs_json(std::string_view text, const std::vector<std::string>& required) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw EvaluationError(std::string("malformed output.json: ") + e.what());
  }
  if (!doc.is_object()) throw EvaluationError("malformed output.json: top level must be an object");
  NamedValues out;
  for (const auto& name : required) {
    if (!doc.contains(name)) throw EvaluationError("output.json lacks statistic '" + name + "'");
    if (!doc[name].is_number()) throw EvaluationError("output.json: '" + name + "' is not a number");
    out[name] = doc[name].get<double>();
  }
  return out;
}

ProcessResult run_process(const ExternalProcessSpec& spec) {
  if (spec.command.empty()) throw std::invalid_argument("run_process: empty command");
  std::filesystem::create_directories(spec.workdir);
  const std::string stderr_path = (spec.workdir / kStderrFile).string();
  const std::string workdir = spec.workdir.string();

  std::vector<std::string> args = spec.command;
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  argv.push_back(nullptr);

  const pid_t pid = fork();
  if (pid < 0) throw EvaluationError("fork failed");
  if (pid == 0) {
    if (chdir(workdir.c_str()) != 0) _exit(126);
    const int err = open(stderr_path.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
    const int null = open("/dev/null", O_WRONLY);
    if (err >= 0) dup2(err, STDERR_FILENO);
    if (null >= 0) dup2(null, STDOUT_FILENO);
    execvp(argv[0], argv.data());
    _exit(127);
  }

  ProcessResult result;
  const auto deadline = std::chrono::steady_clock::now() +
                        std::chrono::duration_cast<std::chrono::steady_clock::duration>(spec.timeout);
  int status = 0;
  while (true) {
    const pid_t r = waitpid(pid, &status, WNOHANG);
    if (r == pid) break;
    if (r < 0) throw EvaluationError("waitpid failed");
    if (std::chrono::steady_clock::now() >= deadline) {
      kill(pid, SIGKILL);
      waitpid(pid, &status, 0);
      result.timed_out = true;
      break;
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(2));
  }
  if (!result.timed_out) {
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : 128 + WTERMSIG(status);
  }
  result.stderr_text = read_file(stderr_path);
  return result;
}

ExternalModel::ExternalModel(ExternalProcessSpec process, SuspensionFixture nominal,
                             DesignVariables variables, std::vector<std::string> outputs)
    : process_(std::move(process)),
      nominal_(std::move(nominal)),
      variables_(std::move(variables)),
      outputs_(std::move(outputs)),
      bounds_(variables_.bounds()) {
  if (process_.command.empty()) throw std::invalid_argument("ExternalModel: empty command");
  if (outputs_.empty()) throw std::invalid_argument("ExternalModel: no outputs declared");
  if (!(process_.timeout.count() > 0.0)) throw std::invalid_argument("ExternalModel: timeout must be positive");
}

NamedValues ExternalModel::evaluate(const Eigen::VectorXd& design) const {
  if (design.size() != bounds_.dim()) throw std::invalid_argument("ExternalModel: design dimension mismatch");
  std::lock_guard lock(workdir_mutex(process_.workdir));
  std::filesystem::create_directories(process_.workdir);
  const ExternalQuery query{variables_.apply(nominal_.hardpoints, design), nominal_.sweep,
                            nominal_.track_width, nominal_.roll_travel};
  {
    std::ofstream out(process_.workdir / kInputFile);
    out << query_to_json(query);
    if (!out) throw EvaluationError("cannot write " + (process_.workdir / kInputFile).string());
  }
  std::error_code ec;
  std::filesystem::remove(process_.workdir / kOutputFile, ec);

  const ProcessResult r = run_process(process_);
  if (r.timed_out) {
    throw EvaluationError("external model timed out after " + std::to_string(process_.timeout.count()) + " s");
  }
  if (r.exit_code != 0) {
    throw EvaluationError("external model exited with code " + std::to_string(r.exit_code) + ": " +
                          r.stderr_text);
  }
  const auto output_path = process_.workdir / kOutputFile;
  if (!std::filesystem::exists(output_path)) throw EvaluationError("external model wrote no output.json");
  return parse_outputs_json(read_file(output_path), outputs_);
}

std::unique_ptr<DisciplineModel> external_adapter(ExternalProcessSpec process, SuspensionFixture nominal,
                                                  DesignVariables variables,
                                                  std::vector<std::string> outputs) {
  return std::make_unique<ExternalModel>(std::move(process), std::move(nominal), std::move(variables),
                                         std::move(outputs));
}

}  // namespace gibo::kin
