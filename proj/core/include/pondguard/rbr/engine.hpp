#pragma once

// The deterministic sense-decide-act controller. One instance per vehicle;
// every function here is pure, so the simulator and the model checker drive
// the exact same code.

#include <cstdint>
#include <string>

#include "pondguard/dsl/ast.hpp"
#include "pondguard/vocab.hpp"

namespace pondguard::rbr {

// Reported sonar distance when no echo is available (open water / dropout).
inline constexpr double kDistanceSentinel = 1e9;

// One tick's sensor picture as the controller sees it. voted_trip is the
// 1oo2 output; contact is the whisker predicate.
struct Percept {
  double distance = kDistanceSentinel;  // metres, >= 0
  bool classifier_detect = false;
  bool sonar_trip = false;
  bool voted_trip = false;
  bool contact = false;
  double speed = 0.0;  // m/s, signed surge

  bool well_formed() const {
    return distance >= 0.0 && distance <= kDistanceSentinel &&
           speed == speed;  // NaN check
  }
};

// Minimal controller memory: am I currently avoiding, and for how long.
struct BeliefState {
  Action last_action = Action::hold_course();
  bool trip_latched = false;
  std::uint64_t ticks_since_trip = 0;  // 0 exactly when not latched

  bool operator==(const BeliefState& o) const {
    return last_action == o.last_action && trip_latched == o.trip_latched &&
           ticks_since_trip == o.ticks_since_trip;
  }
};

struct AgentStep {
  BeliefState beliefs_after;
  Action action;
  std::string fired_rule;

  bool operator==(const AgentStep& o) const {
    return beliefs_after == o.beliefs_after && action == o.action &&
           fired_rule == o.fired_rule;
  }
};

struct ControlParams {
  double cruise_thrust = 0.4;
  double reverse_thrust = 0.5;
  double turn_thrust = 0.5;
  // Turn direction for turn_away, resolved by the caller from the obstacle
  // bearing captured at trip time. Port when the bearing is to starboard or
  // dead ahead.
  bool turn_to_port = true;
};

struct ThrustCommand {
  double left = 0.0;
  double right = 0.0;
};

// Latch on a voted trip; clear once the obstacle reads farther than
// clear_threshold with no active trip. ticks_since_trip counts latched ticks.
BeliefState update_beliefs(const BeliefState& b, const Percept& p,
                           double clear_threshold);

// First-match rule evaluation over the percept plus belief extensions.
// Requires a validated rule set (the catch-all guarantees a match).
AgentStep deliberate(const BeliefState& b, const Percept& p,
                     const dsl::RuleSet& rs);

// Maps an action to differential thrust. stop is exactly (0, 0).
ThrustCommand act(const Action& a, const ControlParams& params);

// The assignment deliberate evaluates conditions against.
Valuation to_valuation(const Percept& p, const BeliefState& b);

}  // namespace pondguard::rbr
