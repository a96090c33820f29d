#include "pondguard/vocab.hpp"

#include <algorithm>
#include <charconv>

namespace pondguard {

namespace {

struct FieldEntry {
  Field field;
  std::string_view name;
};

constexpr FieldEntry kFieldTable[] = {
    {Field::kDistance, "distance"},
    {Field::kSpeed, "speed"},
    {Field::kTicksSinceTrip, "ticks_since_trip"},
    {Field::kClassifierDetect, "classifier_detect"},
    {Field::kSonarTrip, "sonar_trip"},
    {Field::kVotedTrip, "voted_trip"},
    {Field::kContact, "contact"},
    {Field::kTripLatched, "trip_latched"},
};

// Canonical decimal rendering, shortest round-trip form.
std::string format_number(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, end);
}

}  // namespace

std::string_view field_name(Field f) {
  return kFieldTable[static_cast<std::size_t>(f)].name;
}

std::optional<Field> field_from_name(std::string_view name) {
  for (const auto& entry : kFieldTable) {
    if (entry.name == name) return entry.field;
  }
  return std::nullopt;
}

Action Action::set_thrust(double left, double right) {
  Action a;
  a.kind = Kind::kSetThrust;
  a.left = std::clamp(left, -1.0, 1.0);
  a.right = std::clamp(right, -1.0, 1.0);
  return a;
}

std::string_view Action::kind_name() const {
  switch (kind) {
    case Kind::kStop: return "stop";
    case Kind::kReverse: return "reverse";
    case Kind::kTurnAway: return "turn_away";
    case Kind::kHoldCourse: return "hold_course";
    case Kind::kSetThrust: return "set_thrust";
  }
  return "stop";
}

std::string Action::to_string() const {
  if (kind != Kind::kSetThrust) return std::string(kind_name());
  return "set_thrust(" + format_number(left) + ", " + format_number(right) + ")";
}

std::optional<Action::Kind> action_kind_from_name(std::string_view name) {
  if (name == "stop") return Action::Kind::kStop;
  if (name == "reverse") return Action::Kind::kReverse;
  if (name == "turn_away") return Action::Kind::kTurnAway;
  if (name == "hold_course") return Action::Kind::kHoldCourse;
  if (name == "set_thrust") return Action::Kind::kSetThrust;
  return std::nullopt;
}

}  // namespace pondguard
