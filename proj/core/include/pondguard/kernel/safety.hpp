#pragma once

// Safety plumbing between the sensors and the propulsion power path:
//   - 1oo2 voter over the classifier and collision-sensor channels
//   - watchdog that escalates to the hard stop when avoidance stalls
//   - guard latch that cuts propeller power on contact or escalation
// Each state machine is a value transformed by a pure step function.

#include <cstdint>
#include <optional>

#include "pondguard/util/errors.hpp"

namespace pondguard::kernel {

struct ChannelReading {
  bool tripped = false;
  bool healthy = true;
  std::uint64_t tick = 0;
};

class TickMismatch : public Error {
 public:
  TickMismatch() : Error("voter fed readings from different ticks") {}
};

// Fail-safe 1-out-of-2 vote: either channel tripping, or either channel
// reporting unhealthy, demands the trip.
bool vote_1oo2(const ChannelReading& a, const ChannelReading& b);

// Token emitted when the watchdog deadline expires; routed to the guard.
struct GuardTripCommand {};

struct WatchdogState {
  bool armed = false;
  std::uint32_t ticks_remaining = 0;
  std::uint32_t deadline = 0;  // constant per scenario

  static WatchdogState idle(std::uint32_t deadline) {
    return WatchdogState{false, deadline, deadline};
  }

  bool operator==(const WatchdogState& o) const {
    return armed == o.armed && ticks_remaining == o.ticks_remaining &&
           deadline == o.deadline;
  }
};

struct WatchdogStepResult {
  WatchdogState state;
  std::optional<GuardTripCommand> escalation;
};

// A voted trip arms the countdown; hazard_cleared disarms it; expiry emits
// exactly one escalation for the arming cycle and disarms. A trip while
// already armed does not extend the deadline.
WatchdogStepResult watchdog_step(const WatchdogState& w, bool voted_trip,
                                 bool hazard_cleared);

struct GuardState {
  bool latched = false;
  std::uint64_t demand_count = 0;
  bool power_enabled = true;

  bool operator==(const GuardState& o) const {
    return latched == o.latched && demand_count == o.demand_count &&
           power_enabled == o.power_enabled;
  }
};

// Whisker contact or an escalation command opens the power relay. The latch
// holds until an operator reset arrives with the contact clear; a latch and a
// reset in the same tick leave the relay open. demand_count increments once
// per unlatched-to-latched transition.
GuardState guard_step(const GuardState& g, bool whisker_contact, bool trip_cmd,
                      bool reset_cmd);

}  // namespace pondguard::kernel
