#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "gibo/kinematics/curve_statistics.hpp"
#include "gibo/kinematics/hardpoints.hpp"
#include "gibo/kinematics/macpherson.hpp"

namespace gibo::kin {

inline constexpr int kFixtureSchemaVersion = 1;

/// Nominal corner geometry plus the evaluation settings that go with it.
///
/// JSON schema (version 1):
///   {
///     "schema_version": 1,
///     "name": "...",
///     "hardpoints": { "<hardpoint>": [x, y, z], ... all eight ... },   // meters
///     "sweep": { "amplitude": 0.08, "samples": 33 },                     // optional
///     "track_width": 1.6,                                                // optional, m
///     "roll_travel": 0.02                                                // optional, m
///   }
struct SuspensionFixture {
  std::string name;
  HardpointSet hardpoints;
  SweepSpec sweep;
  double track_width = kDefaultTrackWidth;
  double roll_travel = kRollTravel;
};

/// Throws std::invalid_argument with the offending key on schema violations.
SuspensionFixture parse_fixture(std::string_view json_text);
SuspensionFixture load_fixture(const std::filesystem::path& path);
std::string fixture_to_json(const SuspensionFixture& fixture);

}  // namespace gibo::kin
