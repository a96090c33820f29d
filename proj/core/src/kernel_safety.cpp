#include "pondguard/kernel/safety.hpp"

namespace pondguard::kernel {

bool vote_1oo2(const ChannelReading& a, const ChannelReading& b) {
  if (a.tick != b.tick) throw TickMismatch();
  return (a.tripped || !a.healthy) || (b.tripped || !b.healthy);
}

WatchdogStepResult watchdog_step(const WatchdogState& w, bool voted_trip,
                                 bool hazard_cleared) {
  WatchdogState next = w;
  if (!w.armed) {
    if (voted_trip) {
      next.armed = true;
      next.ticks_remaining = w.deadline;  // arming tick does not count down
    }
    return {next, std::nullopt};
  }
  if (hazard_cleared) {
    next.armed = false;
    next.ticks_remaining = w.deadline;
    return {next, std::nullopt};
  }
  next.ticks_remaining = w.ticks_remaining - 1;
  if (next.ticks_remaining == 0) {
    next.armed = false;
    next.ticks_remaining = w.deadline;
    return {next, GuardTripCommand{}};
  }
  return {next, std::nullopt};
}

GuardState guard_step(const GuardState& g, bool whisker_contact, bool trip_cmd,
                      bool reset_cmd) {
  GuardState next = g;
  if (whisker_contact || trip_cmd) {
    if (!g.latched) next.demand_count = g.demand_count + 1;
    next.latched = true;
  } else if (reset_cmd && g.latched) {
    next.latched = false;
  }
  next.power_enabled = !next.latched;
  return next;
}

}  // namespace pondguard::kernel
