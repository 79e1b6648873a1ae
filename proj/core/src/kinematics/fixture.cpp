#include "gibo/kinematics/fixture.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace gibo::kin {

namespace {

using nlohmann::json;

Eigen::Vector3d read_point(const json& j, const std::string& key) {
  if (!j.is_array() || j.size() != 3) {
    throw std::invalid_argument("fixture: /hardpoints/" + key + " must be an array of 3 numbers");
  }
  Eigen::Vector3d p;
  for (int i = 0; i < 3; ++i) {
    if (!j[static_cast<std::size_t>(i)].is_number()) {
      throw std::invalid_argument("fixture: /hardpoints/" + key + " must contain numbers");
    }
    p[i] = j[static_cast<std::size_t>(i)].get<double>();
  }
  return p;
}

}  // namespace

SuspensionFixture parse_fixture(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("fixture: ") + e.what());
  }
  if (!doc.is_object()) throw std::invalid_argument("fixture: top level must be an object");
  const int version = doc.value("schema_version", kFixtureSchemaVersion);
  if (version != kFixtureSchemaVersion) {
    throw std::invalid_argument("fixture: unsupported schema_version " + std::to_string(version));
  }
  SuspensionFixture f;
  f.name = doc.value("name", std::string("unnamed"));
  if (!doc.contains("hardpoints") || !doc["hardpoints"].is_object()) {
    throw std::invalid_argument("fixture: missing /hardpoints object");
  }
  const json& hp = doc["hardpoints"];
  for (Hardpoint p : all_hardpoints()) {
    const std::string key(hardpoint_name(p));
    if (!hp.contains(key)) throw std::invalid_argument("fixture: missing /hardpoints/" + key);
    f.hardpoints[p] = read_point(hp[key], key);
  }
  for (const auto& [key, value] : hp.items()) {
    (void)value;
    hardpoint_from_name(key);
  }
  if (doc.contains("sweep")) {
    const json& s = doc["sweep"];
    f.sweep.amplitude = s.value("amplitude", f.sweep.amplitude);
    f.sweep.samples = s.value("samples", f.sweep.samples);
  }
  f.track_width = doc.value("track_width", f.track_width);
  f.roll_travel = doc.value("roll_travel", f.roll_travel);
  f.hardpoints.validate();
  f.sweep.validate();
  if (!(f.track_width > 0.0)) throw std::invalid_argument("fixture: /track_width must be positive");
  if (!(f.roll_travel > 0.0) || f.roll_travel > f.sweep.amplitude) {
    throw std::invalid_argument("fixture: /roll_travel must be positive and within the sweep");
  }
  return f;
}

SuspensionFixture load_fixture(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open fixture file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_fixture(buffer.str());
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(path.string() + ": " + e.what());
  }
}

std::string fixture_to_json(const SuspensionFixture& fixture) {
  json doc;
  doc["schema_version"] = kFixtureSchemaVersion;
  doc["name"] = fixture.name;
  json hp = json::object();
  for (Hardpoint p : all_hardpoints()) {
    const auto& v = fixture.hardpoints[p];
    hp[std::string(hardpoint_name(p))] = {v.x(), v.y(), v.z()};
  }
  doc["hardpoints"] = hp;
  doc["sweep"] = {{"amplitude", fixture.sweep.amplitude}, {"samples", fixture.sweep.samples}};
  doc["track_width"] = fixture.track_width;
  doc["roll_travel"] = fixture.roll_travel;
  return doc.dump(2);
}

}  // namespace gibo::kin
