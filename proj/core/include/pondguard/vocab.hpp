#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace pondguard {

// ── Percept vocabulary ──────────────────────────────────────────────────────
// The fixed set of fields a rule condition may reference. trip_latched and
// ticks_since_trip belong to the controller's belief state; the rest are
// sensed each tick. The vocabulary is closed: referencing anything else is a
// parse error, which is what keeps the condition space finitely partitionable.

enum class Field : std::uint8_t {
  kDistance = 0,        // metres, sensed clearance along heading
  kSpeed,               // m/s, signed surge
  kTicksSinceTrip,      // belief, numeric
  kClassifierDetect,    // boolean channels from here on
  kSonarTrip,
  kVotedTrip,
  kContact,
  kTripLatched,         // belief
};

inline constexpr std::size_t kFieldCount = 8;

constexpr bool field_is_numeric(Field f) {
  return f == Field::kDistance || f == Field::kSpeed ||
         f == Field::kTicksSinceTrip;
}

constexpr bool field_is_belief(Field f) {
  return f == Field::kTripLatched || f == Field::kTicksSinceTrip;
}

std::string_view field_name(Field f);
std::optional<Field> field_from_name(std::string_view name);

// ── Action ──────────────────────────────────────────────────────────────────
// What a rule commands. SetThrust carries per-side levels clamped to [-1, 1];
// the other kinds are resolved to thrust by the controller's act step.

struct Action {
  enum class Kind : std::uint8_t {
    kStop = 0,
    kReverse,
    kTurnAway,
    kHoldCourse,
    kSetThrust,
  };

  Kind kind = Kind::kHoldCourse;
  double left = 0.0;   // SetThrust only
  double right = 0.0;  // SetThrust only

  static Action stop() { return {Kind::kStop, 0.0, 0.0}; }
  static Action reverse() { return {Kind::kReverse, 0.0, 0.0}; }
  static Action turn_away() { return {Kind::kTurnAway, 0.0, 0.0}; }
  static Action hold_course() { return {Kind::kHoldCourse, 0.0, 0.0}; }
  static Action set_thrust(double left, double right);  // clamps to [-1, 1]

  bool operator==(const Action& o) const {
    return kind == o.kind && left == o.left && right == o.right;
  }

  std::string_view kind_name() const;   // "stop", "turn_away", ...
  std::string to_string() const;        // canonical rule-file form
};

std::optional<Action::Kind> action_kind_from_name(std::string_view name);

// ── Valuation ───────────────────────────────────────────────────────────────
// A total assignment to the vocabulary, the thing conditions are evaluated
// against. Unset fields read as 0 / false.

struct Valuation {
  std::array<double, kFieldCount> numeric{};
  std::array<bool, kFieldCount> flags{};

  double num(Field f) const { return numeric[static_cast<std::size_t>(f)]; }
  bool flag(Field f) const { return flags[static_cast<std::size_t>(f)]; }
  void set_num(Field f, double v) { numeric[static_cast<std::size_t>(f)] = v; }
  void set_flag(Field f, bool v) { flags[static_cast<std::size_t>(f)] = v; }
};

}  // namespace pondguard
