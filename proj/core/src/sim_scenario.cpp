#include "pondguard/sim/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "pondguard/util/hash.hpp"

namespace pondguard::sim {

namespace {

using ordered_json = nlohmann::ordered_json;

void check_keys(const ordered_json& j,
                std::initializer_list<const char*> allowed,
                const std::string& context) {
  if (!j.is_object()) {
    throw ConfigError("expected an object for " + context);
  }
  for (const auto& item : j.items()) {
    if (std::find_if(allowed.begin(), allowed.end(), [&](const char* k) {
          return item.key() == k;
        }) == allowed.end()) {
      throw ConfigError("unknown key '" + item.key() + "' in " + context);
    }
  }
}

template <typename T>
void read(const ordered_json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

FaultWindow::Channel channel_from_name(const std::string& name) {
  if (name == "sonar") return FaultWindow::Channel::kSonar;
  if (name == "classifier") return FaultWindow::Channel::kClassifier;
  throw ConfigError("unknown fault channel '" + name + "'");
}

FaultWindow::Kind fault_kind_from_name(const std::string& name) {
  if (name == "stuck_low") return FaultWindow::Kind::kStuckLow;
  if (name == "stuck_high") return FaultWindow::Kind::kStuckHigh;
  if (name == "dropout") return FaultWindow::Kind::kDropout;
  throw ConfigError("unknown fault kind '" + name + "'");
}

const char* channel_name(FaultWindow::Channel c) {
  return c == FaultWindow::Channel::kSonar ? "sonar" : "classifier";
}

const char* fault_kind_name(FaultWindow::Kind k) {
  switch (k) {
    case FaultWindow::Kind::kStuckLow: return "stuck_low";
    case FaultWindow::Kind::kStuckHigh: return "stuck_high";
    case FaultWindow::Kind::kDropout: return "dropout";
  }
  return "dropout";
}

}  // namespace

void ScenarioConfig::validate() const {
  map.validate();
  if (!(dt > 0.0)) throw ConfigError("dt must be positive");
  if (max_ticks < 1) throw ConfigError("max_ticks must be >= 1");
  if (controller.wdt_deadline < 1) {
    throw ConfigError("wdt_deadline must be >= 1");
  }
  if (!(controller.clear_threshold > 0.0)) {
    throw ConfigError("clear_threshold must be positive");
  }
  if (sensors.classifier_p_detect < 0.0 || sensors.classifier_p_detect > 1.0 ||
      sensors.classifier_false_positive_rate < 0.0 ||
      sensors.classifier_false_positive_rate > 1.0) {
    throw ConfigError("classifier probabilities must lie in [0, 1]");
  }
  if (sensors.sonar_noise_sigma < 0.0) {
    throw ConfigError("sonar_noise_sigma must be >= 0");
  }
  if (sensors.sonar_trip_threshold < 0.0 ||
      sensors.classifier_detect_range < 0.0) {
    throw ConfigError("sensor ranges must be >= 0");
  }
  if (hull_radius <= 0.0) throw ConfigError("hull_radius must be positive");
  if (whisker_reach < 0.0) throw ConfigError("whisker_reach must be >= 0");
  if (p_collision_acceptance < 0.0 || p_collision_acceptance > 1.0) {
    throw ConfigError("p_collision_acceptance must lie in [0, 1]");
  }
  for (const FaultWindow& f : sensors.faults) {
    if (f.from_tick > f.to_tick) {
      throw ConfigError("fault window ends before it starts");
    }
  }
  if (start.x < 0.0 || start.x > map.width || start.y < 0.0 ||
      start.y > map.height) {
    throw ConfigError("start pose lies outside the pond");
  }
  if (min_clearance(map, start.x, start.y, hull_radius) <= 0.0) {
    throw ConfigError("start pose already in collision");
  }
  if (goal) {
    if (goal->radius <= 0.0) throw ConfigError("goal radius must be positive");
  }
}

std::string ScenarioConfig::to_json() const {
  ordered_json j;
  j["map"]["width"] = map.width;
  j["map"]["height"] = map.height;
  j["map"]["circles"] = ordered_json::array();
  for (const Circle& c : map.circles) {
    j["map"]["circles"].push_back({{"x", c.x}, {"y", c.y}, {"r", c.r}});
  }
  j["map"]["rects"] = ordered_json::array();
  for (const RectObstacle& r : map.rects) {
    j["map"]["rects"].push_back(
        {{"x", r.x}, {"y", r.y}, {"w", r.w}, {"h", r.h}});
  }
  j["start"] = {{"x", start.x}, {"y", start.y}, {"heading", start.heading}};
  j["dt"] = dt;
  j["max_ticks"] = max_ticks;
  j["rng_seed"] = rng_seed;
  j["sensors"]["sonar_trip_threshold"] = sensors.sonar_trip_threshold;
  j["sensors"]["sonar_noise_sigma"] = sensors.sonar_noise_sigma;
  j["sensors"]["classifier_detect_range"] = sensors.classifier_detect_range;
  j["sensors"]["classifier_p_detect"] = sensors.classifier_p_detect;
  j["sensors"]["classifier_false_positive_rate"] =
      sensors.classifier_false_positive_rate;
  j["sensors"]["faults"] = ordered_json::array();
  for (const FaultWindow& f : sensors.faults) {
    ordered_json fw;
    fw["channel"] = channel_name(f.channel);
    fw["kind"] = fault_kind_name(f.kind);
    fw["from_tick"] = f.from_tick;
    fw["to_tick"] = f.to_tick;
    fw["mark_unhealthy"] = f.mark_unhealthy;
    j["sensors"]["faults"].push_back(std::move(fw));
  }
  j["controller"]["ruleset_path"] = controller.ruleset_path;
  j["controller"]["clear_threshold"] = controller.clear_threshold;
  j["controller"]["wdt_deadline"] = controller.wdt_deadline;
  j["physics"] = {{"k_thrust", physics.k_thrust},
                  {"c_drag", physics.c_drag},
                  {"k_yaw", physics.k_yaw}};
  j["control"] = {{"cruise_thrust", control.cruise_thrust},
                  {"reverse_thrust", control.reverse_thrust},
                  {"turn_thrust", control.turn_thrust}};
  j["hull_radius"] = hull_radius;
  j["whisker_reach"] = whisker_reach;
  j["p_collision_acceptance"] = p_collision_acceptance;
  if (goal) {
    j["goal"] = {{"x", goal->x}, {"y", goal->y}, {"radius", goal->radius}};
  }
  return j.dump(2) + "\n";
}

std::uint64_t ScenarioConfig::content_hash() const {
  return util::fnv1a64(to_json());
}

ScenarioConfig ScenarioConfig::from_json_text(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("scenario is not valid JSON: ") + e.what());
  }
  check_keys(j,
             {"map", "start", "dt", "max_ticks", "rng_seed", "sensors",
              "controller", "physics", "control", "hull_radius",
              "whisker_reach", "p_collision_acceptance", "goal"},
             "scenario");

  ScenarioConfig cfg;
  try {
    if (j.contains("map")) {
      const auto& jm = j["map"];
      check_keys(jm, {"width", "height", "circles", "rects"}, "map");
      read(jm, "width", cfg.map.width);
      read(jm, "height", cfg.map.height);
      if (jm.contains("circles")) {
        for (const auto& jc : jm["circles"]) {
          check_keys(jc, {"x", "y", "r"}, "circle obstacle");
          Circle c;
          read(jc, "x", c.x);
          read(jc, "y", c.y);
          read(jc, "r", c.r);
          cfg.map.circles.push_back(c);
        }
      }
      if (jm.contains("rects")) {
        for (const auto& jr : jm["rects"]) {
          check_keys(jr, {"x", "y", "w", "h"}, "rect obstacle");
          RectObstacle r;
          read(jr, "x", r.x);
          read(jr, "y", r.y);
          read(jr, "w", r.w);
          read(jr, "h", r.h);
          cfg.map.rects.push_back(r);
        }
      }
    }
    if (j.contains("start")) {
      check_keys(j["start"], {"x", "y", "heading"}, "start");
      read(j["start"], "x", cfg.start.x);
      read(j["start"], "y", cfg.start.y);
      read(j["start"], "heading", cfg.start.heading);
    }
    read(j, "dt", cfg.dt);
    read(j, "max_ticks", cfg.max_ticks);
    read(j, "rng_seed", cfg.rng_seed);
    if (j.contains("sensors")) {
      const auto& js = j["sensors"];
      check_keys(js,
                 {"sonar_trip_threshold", "sonar_noise_sigma",
                  "classifier_detect_range", "classifier_p_detect",
                  "classifier_false_positive_rate", "faults"},
                 "sensors");
      read(js, "sonar_trip_threshold", cfg.sensors.sonar_trip_threshold);
      read(js, "sonar_noise_sigma", cfg.sensors.sonar_noise_sigma);
      read(js, "classifier_detect_range", cfg.sensors.classifier_detect_range);
      read(js, "classifier_p_detect", cfg.sensors.classifier_p_detect);
      read(js, "classifier_false_positive_rate",
           cfg.sensors.classifier_false_positive_rate);
      if (js.contains("faults")) {
        for (const auto& jf : js["faults"]) {
          check_keys(jf,
                     {"channel", "kind", "from_tick", "to_tick",
                      "mark_unhealthy"},
                     "fault window");
          FaultWindow f;
          f.channel = channel_from_name(jf.at("channel").get<std::string>());
          f.kind = fault_kind_from_name(jf.at("kind").get<std::string>());
          read(jf, "from_tick", f.from_tick);
          read(jf, "to_tick", f.to_tick);
          read(jf, "mark_unhealthy", f.mark_unhealthy);
          cfg.sensors.faults.push_back(f);
        }
      }
    }
    if (j.contains("controller")) {
      const auto& jc = j["controller"];
      check_keys(jc, {"ruleset_path", "clear_threshold", "wdt_deadline"},
                 "controller");
      read(jc, "ruleset_path", cfg.controller.ruleset_path);
      read(jc, "clear_threshold", cfg.controller.clear_threshold);
      read(jc, "wdt_deadline", cfg.controller.wdt_deadline);
    }
    if (j.contains("physics")) {
      check_keys(j["physics"], {"k_thrust", "c_drag", "k_yaw"}, "physics");
      read(j["physics"], "k_thrust", cfg.physics.k_thrust);
      read(j["physics"], "c_drag", cfg.physics.c_drag);
      read(j["physics"], "k_yaw", cfg.physics.k_yaw);
    }
    if (j.contains("control")) {
      check_keys(j["control"],
                 {"cruise_thrust", "reverse_thrust", "turn_thrust"},
                 "control");
      read(j["control"], "cruise_thrust", cfg.control.cruise_thrust);
      read(j["control"], "reverse_thrust", cfg.control.reverse_thrust);
      read(j["control"], "turn_thrust", cfg.control.turn_thrust);
    }
    read(j, "hull_radius", cfg.hull_radius);
    read(j, "whisker_reach", cfg.whisker_reach);
    read(j, "p_collision_acceptance", cfg.p_collision_acceptance);
    if (j.contains("goal")) {
      check_keys(j["goal"], {"x", "y", "radius"}, "goal");
      GoalRegion g;
      read(j["goal"], "x", g.x);
      read(j["goal"], "y", g.y);
      read(j["goal"], "radius", g.radius);
      cfg.goal = g;
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad scenario value: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

ScenarioConfig ScenarioConfig::from_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open scenario: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return from_json_text(buffer.str());
}

}  // namespace pondguard::sim
