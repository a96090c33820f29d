#include <algorithm>
#include <sstream>

#include "pondguard/kernel/safety.hpp"
#include "pondguard/verify/checker.hpp"

namespace pondguard::verify {

namespace {

// Path-semantics evaluation over the replayed trace: X reads the next trace
// element. Atoms read the replayed states directly.
struct PathCtx {
  const std::vector<ModelState>& states;
  const std::vector<rbr::Percept>& percepts;
};

bool eval_on_path(const PathCtx& ctx, std::size_t i, const Expr& e) {
  switch (e.kind()) {
    case Expr::Kind::kActionIs:
      return ctx.states[i].last_action.kind == e.action();
    case Expr::Kind::kContact:
      return ctx.percepts[i].contact;
    case Expr::Kind::kVotedTrip:
      return ctx.percepts[i].voted_trip;
    case Expr::Kind::kTripLatched:
      return ctx.states[i].trip_latched;
    case Expr::Kind::kWdtGreater:
      return ctx.states[i].wdt_elapsed > e.wdt_bound();
    case Expr::Kind::kNot:
      return !eval_on_path(ctx, i, *e.lhs());
    case Expr::Kind::kAnd:
      return eval_on_path(ctx, i, *e.lhs()) && eval_on_path(ctx, i, *e.rhs());
    case Expr::Kind::kOr:
      return eval_on_path(ctx, i, *e.lhs()) || eval_on_path(ctx, i, *e.rhs());
    case Expr::Kind::kImplies:
      return !eval_on_path(ctx, i, *e.lhs()) ||
             eval_on_path(ctx, i, *e.rhs());
    case Expr::Kind::kNext:
      if (i + 1 >= ctx.states.size()) return true;  // no witness beyond path
      return eval_on_path(ctx, i + 1, *e.lhs());
  }
  return false;
}

ReplayReport mismatch(std::size_t index, const std::string& what) {
  return ReplayReport{false, index, what};
}

}  // namespace

ReplayReport replay(const Counterexample& ce, const dsl::RuleSet& rs) {
  if (ce.path.empty()) return mismatch(0, "empty counterexample trace");

  std::vector<ModelState> states;
  std::vector<rbr::Percept> percepts;
  states.reserve(ce.path.size());
  percepts.reserve(ce.path.size());

  // Fresh controller and kernel, driven only by the trace's percepts.
  rbr::BeliefState beliefs;
  kernel::WatchdogState wdt = kernel::WatchdogState::idle(ce.wdt_deadline);
  Action effective = Action::hold_course();
  std::uint32_t wdt_elapsed = 0;

  for (std::size_t i = 0; i < ce.path.size(); ++i) {
    const TraceStep& expect = ce.path[i];
    ModelState replayed;
    replayed.trip_latched = beliefs.trip_latched;
    replayed.ticks_since_trip = static_cast<std::uint32_t>(
        std::min<std::uint64_t>(beliefs.ticks_since_trip, ce.ticks_cap));
    replayed.last_action = effective;
    replayed.env_cell = expect.state.env_cell;  // cells come from the trace
    replayed.wdt_elapsed = wdt_elapsed;

    if (!(replayed == expect.state)) {
      return mismatch(i, "replayed state diverges from trace at step " +
                             std::to_string(i));
    }

    const rbr::Percept& p = expect.percept;
    if (!p.well_formed()) return mismatch(i, "malformed percept in trace");

    rbr::BeliefState updated =
        rbr::update_beliefs(rbr::BeliefState{beliefs.last_action,
                                             replayed.trip_latched,
                                             replayed.ticks_since_trip},
                            p, ce.clear_threshold);
    const rbr::AgentStep step = rbr::deliberate(updated, p, rs);
    if (!(step == expect.step)) {
      return mismatch(i, "engine step diverges from trace at step " +
                             std::to_string(i));
    }

    const bool hazard_cleared = p.distance > ce.clear_threshold;
    const auto wdt_out = kernel::watchdog_step(wdt, p.voted_trip, hazard_cleared);
    wdt = wdt_out.state;
    wdt_elapsed =
        wdt.armed ? wdt.deadline - wdt.ticks_remaining + 1 : 0;
    effective = wdt_out.escalation ? Action::stop() : step.action;
    beliefs = step.beliefs_after;

    states.push_back(replayed);
    percepts.push_back(p);
  }

  // The trace must actually exhibit the claimed violation.
  const Property& prop = ce.property;
  const PathCtx ctx{states, percepts};
  if (ce.violation_index >= states.size()) {
    return mismatch(ce.violation_index, "violation index outside trace");
  }
  if (prop.kind == Property::Kind::kGlobally) {
    if (eval_on_path(ctx, ce.violation_index, *prop.body)) {
      return mismatch(ce.violation_index,
                      "final state does not violate the property");
    }
  } else {
    if (!eval_on_path(ctx, ce.violation_index, *prop.trigger)) {
      return mismatch(ce.violation_index, "trigger does not hold at witness");
    }
    if (ce.violation_index + prop.bound >= states.size()) {
      return mismatch(states.size() - 1, "trace shorter than response bound");
    }
    for (std::size_t j = ce.violation_index;
         j <= ce.violation_index + prop.bound; ++j) {
      if (eval_on_path(ctx, j, *prop.response)) {
        return mismatch(j, "response holds inside the violation window");
      }
    }
  }
  return ReplayReport{true, 0, ""};
}

}  // namespace pondguard::verify
