#include "pondguard/verify/state_space.hpp"

#include <bit>
#include <cmath>
#include <deque>
#include <unordered_map>

#include "pondguard/kernel/safety.hpp"

namespace pondguard::verify {

namespace {

struct ModelStateHash {
  std::size_t operator()(const ModelState& s) const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto mix = [&h](std::uint64_t v) {
      h ^= v;
      h *= 0x100000001b3ULL;
    };
    mix(s.trip_latched ? 1 : 0);
    mix(s.ticks_since_trip);
    mix(static_cast<std::uint64_t>(s.last_action.kind));
    mix(std::bit_cast<std::uint64_t>(s.last_action.left));
    mix(std::bit_cast<std::uint64_t>(s.last_action.right));
    mix(s.env_cell);
    mix(s.wdt_elapsed);
    return static_cast<std::size_t>(h);
  }
};

// Largest integral rule threshold on ticks_since_trip, so the cap never
// blurs a comparison a rule could make.
std::uint32_t max_ticks_threshold(const dsl::RuleSet& rs) {
  std::vector<bool> seen(kFieldCount, false);
  std::array<std::vector<double>, kFieldCount> thresholds;
  for (const dsl::Rule& r : rs.rules()) {
    r.condition->collect_refs(seen, thresholds);
  }
  double max_t = 0.0;
  for (double t :
       thresholds[static_cast<std::size_t>(Field::kTicksSinceTrip)]) {
    max_t = std::max(max_t, t);
  }
  return static_cast<std::uint32_t>(std::ceil(std::max(0.0, max_t)));
}

}  // namespace

StateGraph::StateGraph(dsl::RuleSet rs, EnvAbstraction env, Limits limits)
    : rs_(std::move(rs)), env_(std::move(env)), limits_(limits) {
  ticks_cap_ =
      std::max(env_.options().wdt_deadline, max_ticks_threshold(rs_)) + 1;
}

ModelState StateGraph::initial_state(std::size_t cell) const {
  ModelState s;
  s.env_cell = static_cast<std::uint32_t>(cell);
  return s;
}

StateGraph::TickOutput StateGraph::tick(const ModelState& s,
                                        std::size_t next_cell) const {
  const rbr::Percept p = env_.percept_for_cell(s.env_cell);

  rbr::BeliefState beliefs = s.beliefs();
  beliefs = rbr::update_beliefs(beliefs, p, env_.options().clear_threshold);
  const rbr::AgentStep step = rbr::deliberate(beliefs, p, rs_);

  // Watchdog clearing in the abstraction is distance-only; there is no speed
  // signal to certify that the vehicle stopped closing, so the conservative
  // reading keeps the countdown running.
  const bool hazard_cleared = p.distance > env_.options().clear_threshold;
  kernel::WatchdogState w =
      kernel::WatchdogState::idle(env_.options().wdt_deadline);
  if (s.wdt_elapsed > 0) {
    w.armed = true;
    w.ticks_remaining = w.deadline - (s.wdt_elapsed - 1);
  }
  const auto wdt = kernel::watchdog_step(w, p.voted_trip, hazard_cleared);

  TickOutput out;
  out.step = step;
  out.escalated = wdt.escalation.has_value();
  out.next.trip_latched = step.beliefs_after.trip_latched;
  out.next.ticks_since_trip = static_cast<std::uint32_t>(
      std::min<std::uint64_t>(step.beliefs_after.ticks_since_trip, ticks_cap_));
  out.next.last_action = out.escalated ? Action::stop() : step.action;
  out.next.env_cell = static_cast<std::uint32_t>(next_cell);
  out.next.wdt_elapsed =
      wdt.state.armed ? wdt.state.deadline - wdt.state.ticks_remaining + 1 : 0;
  return out;
}

StateGraph build_state_space(const dsl::RuleSet& rs, const EnvAbstraction& env,
                             const Limits& limits) {
  StateGraph graph(rs, env, limits);

  std::unordered_map<ModelState, std::uint32_t, ModelStateHash> index;
  std::deque<std::uint32_t> frontier;
  std::vector<std::size_t> depth;

  auto intern = [&](const ModelState& s,
                    std::size_t d) -> std::optional<std::uint32_t> {
    auto it = index.find(s);
    if (it != index.end()) return it->second;
    if (graph.states_.size() >= limits.max_states) {
      graph.truncation_ = StateGraph::Truncation::kStates;
      return std::nullopt;
    }
    const auto id = static_cast<std::uint32_t>(graph.states_.size());
    graph.states_.push_back(s);
    graph.succ_.emplace_back();
    depth.push_back(d);
    index.emplace(s, id);
    frontier.push_back(id);
    return id;
  };

  for (std::size_t cell : env.initial_cells()) {
    const auto id = intern(graph.initial_state(cell), 0);
    if (!id) break;
    graph.initial_.push_back(*id);
  }

  while (!frontier.empty() &&
         graph.truncation_ == StateGraph::Truncation::kNone) {
    const std::uint32_t cur = frontier.front();
    frontier.pop_front();
    if (depth[cur] >= limits.max_depth) {
      graph.truncation_ = StateGraph::Truncation::kDepth;
      break;
    }
    const ModelState state = graph.states_[cur];
    for (std::size_t next_cell : env.successors(state.env_cell)) {
      const auto out = graph.tick(state, next_cell);
      const auto id = intern(out.next, depth[cur] + 1);
      if (!id) break;
      graph.succ_[cur].push_back(*id);
      ++graph.transitions_;
    }
    if (graph.truncation_ == StateGraph::Truncation::kNone) {
      graph.expanded_ = cur + 1;
    }
  }

  return graph;
}

}  // namespace pondguard::verify
