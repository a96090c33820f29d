#pragma once

// Everything a simulated episode depends on, in one value: world geometry,
// start pose, sensor models and fault schedules, controller and kernel
// parameters, physics constants, and the campaign acceptance threshold.
// Loaded from JSON whose keys mirror the field names below; unknown keys are
// rejected so mistyped configs fail loudly.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pondguard/rbr/engine.hpp"
#include "pondguard/sim/dynamics.hpp"
#include "pondguard/sim/map.hpp"

namespace pondguard::sim {

struct StartPose {
  double x = 2.0;
  double y = 2.0;
  double heading = 0.0;
};

struct FaultWindow {
  enum class Channel : std::uint8_t { kSonar, kClassifier };
  enum class Kind : std::uint8_t { kStuckLow, kStuckHigh, kDropout };

  Channel channel = Channel::kSonar;
  Kind kind = Kind::kDropout;
  std::uint64_t from_tick = 0;
  std::uint64_t to_tick = UINT64_MAX;  // window is [from_tick, to_tick)
  // Stuck faults are covert unless this is set; dropouts always report
  // unhealthy.
  bool mark_unhealthy = false;

  bool active(std::uint64_t tick) const {
    return tick >= from_tick && tick < to_tick;
  }
};

struct SensorParams {
  double sonar_trip_threshold = 1.5;
  double sonar_noise_sigma = 0.05;
  double classifier_detect_range = 2.5;
  double classifier_p_detect = 1.0;
  double classifier_false_positive_rate = 0.0;
  std::vector<FaultWindow> faults;
};

struct ControllerParams {
  std::string ruleset_path;  // informational; the CLI passes rules explicitly
  double clear_threshold = 3.0;
  std::uint32_t wdt_deadline = 20;
};

// Optional survey endpoint; reaching it ends the episode as completed.
struct GoalRegion {
  double x = 0.0;
  double y = 0.0;
  double radius = 1.0;
};

struct ScenarioConfig {
  PondMap map;
  StartPose start;
  double dt = 0.1;
  std::uint64_t max_ticks = 600;
  std::uint64_t rng_seed = 1;
  SensorParams sensors;
  ControllerParams controller;
  PhysicsParams physics;
  rbr::ControlParams control;  // thrust levels; turn side resolved at runtime
  double hull_radius = 0.4;
  double whisker_reach = 0.15;
  double p_collision_acceptance = 0.005;
  std::optional<GoalRegion> goal;

  void validate() const;  // throws ConfigError

  // Canonical JSON (stable key order and number formatting).
  std::string to_json() const;
  // 64-bit hash of the canonical JSON; identifies the scenario in reports.
  std::uint64_t content_hash() const;

  static ScenarioConfig from_json_text(const std::string& text);
  static ScenarioConfig from_file(const std::string& path);
};

}  // namespace pondguard::sim
