#pragma once

// Property evaluation over a built state graph, with replayable
// counterexamples.
//
// Atom semantics at a state: contact / voted_trip read the state's cell,
// trip_latched / wdt read the state's belief and watchdog fields, action=
// reads last_action (the effective command chosen on the previous tick).
// X φ holds when φ holds in every successor.
//
// G(φ): holds iff φ holds in every reachable state; a violation returns the
// BFS-shortest path from an initial state to a violating state (plus one
// witness successor when the violation is about an X subformula).
// G(φ -> F<=k ψ): every path from a φ-state reaches ψ within k transitions,
// counting the φ-state itself; a violation path ends with k+1 consecutive
// ¬ψ states starting at the trigger.
//
// On a truncated graph only violations are trusted; everything else comes
// back Inconclusive.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pondguard/rbr/engine.hpp"
#include "pondguard/verify/property.hpp"
#include "pondguard/verify/state_space.hpp"

namespace pondguard::verify {

struct TraceStep {
  ModelState state;
  rbr::Percept percept;  // representative percept of state.env_cell
  rbr::AgentStep step;   // the controller's decision at this state

  bool operator==(const TraceStep& o) const {
    return state == o.state && step == o.step;
  }
};

struct Counterexample {
  std::vector<TraceStep> path;   // initial state first
  std::size_t violation_index;   // violating state (G) or trigger (bounded)
  Property property;
  // Replay context, copied from the graph that produced the trace.
  double clear_threshold = 3.0;
  std::uint32_t wdt_deadline = 8;
  std::uint32_t ticks_cap = 9;
};

struct Verdict {
  enum class Outcome : std::uint8_t { kHolds, kViolated, kInconclusive };

  Outcome outcome = Outcome::kInconclusive;
  std::optional<Counterexample> counterexample;
  std::uint64_t states_explored = 0;
  std::uint64_t transitions = 0;

  bool holds() const { return outcome == Outcome::kHolds; }
};

Verdict check(const StateGraph& graph, const Property& prop);

// Evaluates an X-free expression at one state. Exposed for the test oracles.
bool eval_state_expr(const StateGraph& graph, std::size_t state,
                     const Expr& expr);

struct ReplayReport {
  bool valid = false;
  std::size_t mismatch_index = 0;  // meaningful when !valid
  std::string detail;
};

// Feeds the trace's percepts through a fresh engine and kernel instance and
// checks that every step, belief, watchdog count and effective action
// reproduces, and that the final states exhibit the claimed violation. A
// mismatch signals a checker bug.
ReplayReport replay(const Counterexample& ce, const dsl::RuleSet& rs);

// JSON report for a batch of checked properties, stable key order.
std::string report_json(
    const std::vector<std::pair<Property, Verdict>>& results,
    const StateGraph& graph);

}  // namespace pondguard::verify
