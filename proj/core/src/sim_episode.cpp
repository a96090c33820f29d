#include "pondguard/sim/episode.hpp"

#include <cmath>
#include <cstdio>

#include "pondguard/kernel/safety.hpp"
#include "pondguard/rbr/engine.hpp"
#include "pondguard/sim/sensors.hpp"
#include "pondguard/util/rng.hpp"

namespace pondguard::sim {

std::string_view outcome_name(Outcome o) {
  switch (o) {
    case Outcome::kCompleted: return "completed";
    case Outcome::kCollision: return "collision";
    case Outcome::kGuardStop: return "guard_stop";
    case Outcome::kTimeout: return "timeout";
  }
  return "timeout";
}

EpisodeResult run_episode(const ScenarioConfig& cfg, const dsl::RuleSet& rs,
                          bool keep_records) {
  cfg.validate();

  util::Rng rng(cfg.rng_seed);
  AsvState asv;
  asv.x = cfg.start.x;
  asv.y = cfg.start.y;
  asv.heading = normalize_heading(cfg.start.heading);
  asv.hull_radius = cfg.hull_radius;

  rbr::BeliefState beliefs;
  kernel::WatchdogState wdt =
      kernel::WatchdogState::idle(cfg.controller.wdt_deadline);
  kernel::GuardState guard;
  bool turn_to_port = true;

  EpisodeResult result;
  if (keep_records) result.records.reserve(cfg.max_ticks);
  result.outcome = Outcome::kTimeout;
  result.ticks = cfg.max_ticks;

  for (std::uint64_t tick = 0; tick < cfg.max_ticks; ++tick) {
    const SenseResult sr =
        sense(asv, cfg.map, cfg.sensors, cfg.whisker_reach, tick, rng);
    const bool voted = kernel::vote_1oo2(sr.sonar, sr.classifier);
    if (voted) ++result.trip_count;

    rbr::Percept percept;
    percept.distance = sr.sonar_distance;
    percept.classifier_detect = sr.classifier.tripped;
    percept.sonar_trip = sr.sonar.tripped;
    percept.voted_trip = voted;
    percept.contact = sr.whisker_contact;
    percept.speed = asv.surge;

    const bool was_latched = beliefs.trip_latched;
    beliefs =
        rbr::update_beliefs(beliefs, percept, cfg.controller.clear_threshold);
    if (beliefs.trip_latched && !was_latched) {
      // Capture the avoidance turn side once per latch: steer away from the
      // closest feature, port on a dead-ahead tie.
      const double bearing =
          nearest_obstacle_bearing(cfg.map, asv.x, asv.y, asv.heading);
      turn_to_port = bearing <= 0.0;
    } else if (!beliefs.trip_latched) {
      turn_to_port = true;
    }

    const rbr::AgentStep step = rbr::deliberate(beliefs, percept, rs);
    beliefs = step.beliefs_after;

    rbr::ControlParams control = cfg.control;
    control.turn_to_port = turn_to_port;
    rbr::ThrustCommand cmd = rbr::act(step.action, control);

    const bool hazard_cleared =
        percept.distance > cfg.controller.clear_threshold ||
        percept.speed <= 0.0;
    const auto wdt_out = kernel::watchdog_step(wdt, voted, hazard_cleared);
    wdt = wdt_out.state;
    if (wdt_out.escalation) ++result.wdt_escalations;

    guard = kernel::guard_step(guard, sr.whisker_contact,
                               wdt_out.escalation.has_value(), false);
    if (!guard.power_enabled) cmd = {0.0, 0.0};

    asv = step_dynamics(asv, cmd, cfg.physics, cfg.dt);
    const double clearance =
        min_clearance(cfg.map, asv.x, asv.y, cfg.hull_radius);
    const bool collision = clearance <= 0.0;

    if (keep_records) {
      TickRecord rec;
      rec.tick = tick;
      rec.asv = asv;
      rec.sonar_dist = sr.sonar_distance;
      rec.sonar_trip = sr.sonar.tripped;
      rec.sonar_healthy = sr.sonar.healthy;
      rec.clf_trip = sr.classifier.tripped;
      rec.clf_healthy = sr.classifier.healthy;
      rec.voted_trip = voted;
      rec.action = step.action;
      rec.fired_rule = step.fired_rule;
      rec.wdt_armed = wdt.armed;
      rec.wdt_remaining = wdt.ticks_remaining;
      rec.guard_latched = guard.latched;
      rec.demand_count = guard.demand_count;
      rec.contact = sr.whisker_contact;
      rec.collision = collision;
      result.records.push_back(std::move(rec));
    }

    if (collision) {
      result.outcome = Outcome::kCollision;
      result.ticks = tick + 1;
      break;
    }
    if (guard.latched && std::abs(asv.surge) < 0.01) {
      result.outcome = Outcome::kGuardStop;
      result.ticks = tick + 1;
      break;
    }
    if (cfg.goal &&
        std::hypot(asv.x - cfg.goal->x, asv.y - cfg.goal->y) <=
            cfg.goal->radius) {
      result.outcome = Outcome::kCompleted;
      result.ticks = tick + 1;
      break;
    }
  }

  result.demand_count = guard.demand_count;
  return result;
}

void write_trace_csv(std::ostream& out, std::span<const TickRecord> records) {
  out << kTraceCsvHeader << '\n';
  char buf[512];
  for (const TickRecord& r : records) {
    std::snprintf(buf, sizeof(buf),
                  "%llu,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%d,%d,%d,%d,%d",
                  static_cast<unsigned long long>(r.tick), r.asv.x, r.asv.y,
                  r.asv.heading, r.asv.surge, r.asv.thrust_left,
                  r.asv.thrust_right, r.sonar_dist, r.sonar_trip ? 1 : 0,
                  r.sonar_healthy ? 1 : 0, r.clf_trip ? 1 : 0,
                  r.clf_healthy ? 1 : 0, r.voted_trip ? 1 : 0);
    out << buf << ',' << r.action.kind_name() << ',' << r.fired_rule;
    std::snprintf(buf, sizeof(buf), ",%d,%u,%d,%llu,%d,%d",
                  r.wdt_armed ? 1 : 0, r.wdt_remaining,
                  r.guard_latched ? 1 : 0,
                  static_cast<unsigned long long>(r.demand_count),
                  r.contact ? 1 : 0, r.collision ? 1 : 0);
    out << buf << '\n';
  }
}

}  // namespace pondguard::sim
