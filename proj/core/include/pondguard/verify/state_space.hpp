#pragma once

// Explicit-state exploration of the closed loop (controller + voter +
// watchdog) against the environment abstraction. Successor states are
// computed by calling the real update_beliefs / deliberate / vote_1oo2 /
// watchdog_step implementations on each cell's representative percept; there
// is no re-implementation of the controller here.
//
// A ModelState is a between-ticks snapshot:
//   env_cell   the cell sensed this tick (controller response still pending)
//   beliefs    latch and counter after processing the previous cell
//   last_action  the effective action chosen on the previous tick, i.e. what
//                currently drives the plant (watchdog escalation reads stop)
//   wdt_elapsed  0 when unarmed, else ticks since arming
// This one-tick sensing-to-actuation offset is what makes next-step
// properties like G(contact -> X action=stop) meaningful.
//
// ticks_since_trip is capped: values past the watchdog deadline and every
// rule threshold are behaviourally equivalent, so the cap keeps the state
// space finite without changing any verdict.

#include <cstdint>
#include <vector>

#include "pondguard/dsl/ast.hpp"
#include "pondguard/rbr/engine.hpp"
#include "pondguard/verify/env.hpp"

namespace pondguard::verify {

struct ModelState {
  bool trip_latched = false;
  std::uint32_t ticks_since_trip = 0;  // capped
  Action last_action = Action::hold_course();
  std::uint32_t env_cell = 0;
  std::uint32_t wdt_elapsed = 0;

  bool operator==(const ModelState& o) const {
    return trip_latched == o.trip_latched &&
           ticks_since_trip == o.ticks_since_trip &&
           last_action == o.last_action && env_cell == o.env_cell &&
           wdt_elapsed == o.wdt_elapsed;
  }

  rbr::BeliefState beliefs() const {
    return rbr::BeliefState{last_action, trip_latched, ticks_since_trip};
  }
};

struct Limits {
  std::size_t max_states = 1'000'000;
  std::size_t max_depth = 1'000'000;
};

class StateGraph {
 public:
  enum class Truncation : std::uint8_t { kNone, kStates, kDepth };

  StateGraph(dsl::RuleSet rs, EnvAbstraction env, Limits limits);

  const dsl::RuleSet& ruleset() const { return rs_; }
  const EnvAbstraction& env() const { return env_; }
  const Limits& limits() const { return limits_; }

  std::size_t state_count() const { return states_.size(); }
  const ModelState& state(std::size_t i) const { return states_[i]; }
  const std::vector<std::uint32_t>& successors(std::size_t i) const {
    return succ_[i];
  }
  const std::vector<std::uint32_t>& initial_states() const { return initial_; }
  std::uint64_t transition_count() const { return transitions_; }

  Truncation truncation() const { return truncation_; }
  bool complete() const { return truncation_ == Truncation::kNone; }

  // States with index below this had their successors computed. On a
  // complete graph this equals state_count().
  std::size_t expanded_count() const { return expanded_; }

  // The cap applied to ticks_since_trip inside model states.
  std::uint32_t ticks_cap() const { return ticks_cap_; }

  // One closed-loop tick from `s` under next cell `cell`: the percept of the
  // current cell goes through the real engine and kernel. Exposed so replays
  // and the exploration share one definition.
  struct TickOutput {
    ModelState next;
    rbr::AgentStep step;    // the controller's decision this tick
    bool escalated = false;  // watchdog expired; effective action forced stop
  };
  TickOutput tick(const ModelState& s, std::size_t next_cell) const;

  ModelState initial_state(std::size_t cell) const;

 private:
  friend StateGraph build_state_space(const dsl::RuleSet&,
                                      const EnvAbstraction&, const Limits&);

  dsl::RuleSet rs_;
  EnvAbstraction env_;
  Limits limits_;
  std::uint32_t ticks_cap_;

  std::vector<ModelState> states_;
  std::vector<std::vector<std::uint32_t>> succ_;
  std::vector<std::uint32_t> initial_;
  std::uint64_t transitions_ = 0;
  Truncation truncation_ = Truncation::kNone;
  std::size_t expanded_ = 0;
};

// Breadth-first exploration from the abstraction's initial cells. Exploration
// order is canonical (cells ascending, successors ascending), so repeated
// runs produce identical graphs. Hitting a limit stops exploration and marks
// the graph truncated rather than failing.
StateGraph build_state_space(const dsl::RuleSet& rs, const EnvAbstraction& env,
                             const Limits& limits = {});

}  // namespace pondguard::verify
