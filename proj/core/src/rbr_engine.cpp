#include "pondguard/rbr/engine.hpp"

#include <algorithm>
#include <cassert>

#include "pondguard/dsl/validate.hpp"
#include "pondguard/util/errors.hpp"

namespace pondguard::rbr {

BeliefState update_beliefs(const BeliefState& b, const Percept& p,
                           double clear_threshold) {
  assert(p.well_formed());
  BeliefState next = b;
  if (p.voted_trip) {
    next.trip_latched = true;
  } else if (b.trip_latched && p.distance > clear_threshold) {
    next.trip_latched = false;
  }
  next.ticks_since_trip = next.trip_latched ? b.ticks_since_trip + 1 : 0;
  return next;
}

AgentStep deliberate(const BeliefState& b, const Percept& p,
                     const dsl::RuleSet& rs) {
  const Valuation v = to_valuation(p, b);
  const std::size_t winner = dsl::first_match(rs, v);
  if (winner >= rs.rules().size()) {
    throw Error("no rule matched; rule set '" + rs.name() +
                "' is missing its catch-all");
  }
  const dsl::Rule& rule = rs.rules()[winner];
  AgentStep step;
  step.action = rule.action;
  step.fired_rule = rule.id;
  step.beliefs_after = b;
  step.beliefs_after.last_action = rule.action;
  return step;
}

ThrustCommand act(const Action& a, const ControlParams& params) {
  switch (a.kind) {
    case Action::Kind::kStop:
      return {0.0, 0.0};
    case Action::Kind::kReverse:
      return {-params.reverse_thrust, -params.reverse_thrust};
    case Action::Kind::kTurnAway:
      // Port turn = positive yaw = right thruster forward, left reversed.
      return params.turn_to_port
                 ? ThrustCommand{-params.turn_thrust, params.turn_thrust}
                 : ThrustCommand{params.turn_thrust, -params.turn_thrust};
    case Action::Kind::kHoldCourse:
      return {params.cruise_thrust, params.cruise_thrust};
    case Action::Kind::kSetThrust:
      return {std::clamp(a.left, -1.0, 1.0), std::clamp(a.right, -1.0, 1.0)};
  }
  return {0.0, 0.0};
}

Valuation to_valuation(const Percept& p, const BeliefState& b) {
  Valuation v;
  v.set_num(Field::kDistance, p.distance);
  v.set_num(Field::kSpeed, p.speed);
  v.set_num(Field::kTicksSinceTrip, static_cast<double>(b.ticks_since_trip));
  v.set_flag(Field::kClassifierDetect, p.classifier_detect);
  v.set_flag(Field::kSonarTrip, p.sonar_trip);
  v.set_flag(Field::kVotedTrip, p.voted_trip);
  v.set_flag(Field::kContact, p.contact);
  v.set_flag(Field::kTripLatched, b.trip_latched);
  return v;
}

}  // namespace pondguard::rbr
