#include "pondguard/verify/checker.hpp"

#include <algorithm>
#include <deque>
#include <json.hpp>

#include "pondguard/kernel/safety.hpp"

namespace pondguard::verify {

namespace {

// Evaluation with an explicit handler for X subformulas. `next_value` is the
// truth of the (single) X child: universal over successors during checking,
// the path successor during replays.
bool eval_expr(const StateGraph& graph, std::size_t state, const Expr& expr,
               const std::optional<bool>& next_value) {
  switch (expr.kind()) {
    case Expr::Kind::kActionIs:
      return graph.state(state).last_action.kind == expr.action();
    case Expr::Kind::kContact:
      return graph.env().cell_contact(graph.state(state).env_cell);
    case Expr::Kind::kVotedTrip:
      return graph.env().cell_voted(graph.state(state).env_cell);
    case Expr::Kind::kTripLatched:
      return graph.state(state).trip_latched;
    case Expr::Kind::kWdtGreater:
      return graph.state(state).wdt_elapsed > expr.wdt_bound();
    case Expr::Kind::kNot:
      return !eval_expr(graph, state, *expr.lhs(), next_value);
    case Expr::Kind::kAnd:
      return eval_expr(graph, state, *expr.lhs(), next_value) &&
             eval_expr(graph, state, *expr.rhs(), next_value);
    case Expr::Kind::kOr:
      return eval_expr(graph, state, *expr.lhs(), next_value) ||
             eval_expr(graph, state, *expr.rhs(), next_value);
    case Expr::Kind::kImplies:
      return !eval_expr(graph, state, *expr.lhs(), next_value) ||
             eval_expr(graph, state, *expr.rhs(), next_value);
    case Expr::Kind::kNext: {
      if (next_value) return *next_value;
      // Universal next over the explored successors.
      for (std::uint32_t succ : graph.successors(state)) {
        if (!eval_expr(graph, succ, *expr.lhs(), std::nullopt)) return false;
      }
      return true;
    }
  }
  return false;
}

// BFS parents over the explored graph, for shortest counterexample prefixes.
struct Bfs {
  std::vector<std::int64_t> parent;
  std::vector<std::uint32_t> order;

  explicit Bfs(const StateGraph& graph)
      : parent(graph.state_count(), -2) {
    std::deque<std::uint32_t> queue;
    for (std::uint32_t init : graph.initial_states()) {
      if (parent[init] == -2) {
        parent[init] = -1;
        queue.push_back(init);
      }
    }
    while (!queue.empty()) {
      const std::uint32_t cur = queue.front();
      queue.pop_front();
      order.push_back(cur);
      for (std::uint32_t next : graph.successors(cur)) {
        if (parent[next] == -2) {
          parent[next] = cur;
          queue.push_back(next);
        }
      }
    }
  }

  std::vector<std::uint32_t> path_to(std::uint32_t target) const {
    std::vector<std::uint32_t> path;
    std::int64_t cur = target;
    while (cur >= 0) {
      path.push_back(static_cast<std::uint32_t>(cur));
      cur = parent[static_cast<std::size_t>(cur)];
    }
    std::reverse(path.begin(), path.end());
    return path;
  }
};

TraceStep make_trace_step(const StateGraph& graph, std::uint32_t state) {
  TraceStep out;
  out.state = graph.state(state);
  out.percept = graph.env().percept_for_cell(out.state.env_cell);
  // The decision taken at this state; any successor cell reproduces it.
  const std::size_t cell = graph.env().successors(out.state.env_cell).front();
  out.step = graph.tick(out.state, cell).step;
  return out;
}

Counterexample make_counterexample(const StateGraph& graph,
                                   const std::vector<std::uint32_t>& states,
                                   std::size_t violation_index,
                                   const Property& prop) {
  Counterexample ce;
  ce.violation_index = violation_index;
  ce.property = prop;
  ce.clear_threshold = graph.env().options().clear_threshold;
  ce.wdt_deadline = graph.env().options().wdt_deadline;
  ce.ticks_cap = graph.ticks_cap();
  ce.path.reserve(states.size());
  for (std::uint32_t s : states) ce.path.push_back(make_trace_step(graph, s));
  return ce;
}

Verdict check_globally(const StateGraph& graph, const Property& prop) {
  Verdict v;
  v.states_explored = graph.state_count();
  v.transitions = graph.transition_count();

  const bool has_next = prop.body->contains_next();
  const Bfs bfs(graph);

  for (std::uint32_t state : bfs.order) {
    // X needs successors, so skip unexpanded rim states on truncated graphs;
    // a violation there cannot be certified.
    if (has_next && state >= graph.expanded_count()) continue;
    if (eval_expr(graph, state, *prop.body, std::nullopt)) continue;

    auto states = bfs.path_to(state);
    const std::size_t violation_index = states.size() - 1;
    if (has_next) {
      // Append one successor witnessing the violated X subformula: a
      // successor under which the body, path-evaluated, is still false.
      for (std::uint32_t succ : graph.successors(state)) {
        bool child = true;
        // Value of the X child at this successor.
        const Expr* x_node = nullptr;
        std::vector<const Expr*> stack{prop.body.get()};
        while (!stack.empty()) {
          const Expr* e = stack.back();
          stack.pop_back();
          if (e->kind() == Expr::Kind::kNext) {
            x_node = e;
            break;
          }
          if (e->lhs()) stack.push_back(e->lhs().get());
          if (e->rhs()) stack.push_back(e->rhs().get());
        }
        if (x_node != nullptr) {
          child = eval_expr(graph, succ, *x_node->lhs(), std::nullopt);
        }
        if (!eval_expr(graph, state, *prop.body, child)) {
          states.push_back(succ);
          break;
        }
      }
    }
    v.outcome = Verdict::Outcome::kViolated;
    v.counterexample = make_counterexample(graph, states, violation_index, prop);
    return v;
  }

  v.outcome = graph.complete() ? Verdict::Outcome::kHolds
                               : Verdict::Outcome::kInconclusive;
  return v;
}

Verdict check_bounded_response(const StateGraph& graph, const Property& prop) {
  Verdict v;
  v.states_explored = graph.state_count();
  v.transitions = graph.transition_count();

  const std::size_t n = graph.state_count();
  std::vector<bool> not_response(n);
  for (std::size_t i = 0; i < n; ++i) {
    not_response[i] = !eval_expr(graph, i, *prop.response, std::nullopt);
  }

  // run[i] true when some path of `steps` further transitions stays in
  // ¬response starting from i. Only expanded states may extend a run.
  std::vector<bool> run = not_response;
  std::vector<std::vector<bool>> layers;
  layers.push_back(run);
  for (std::uint32_t step = 0; step < prop.bound; ++step) {
    std::vector<bool> next_run(n, false);
    for (std::size_t i = 0; i < std::min(n, graph.expanded_count()); ++i) {
      if (!not_response[i]) continue;
      for (std::uint32_t succ : graph.successors(i)) {
        if (run[succ]) {
          next_run[i] = true;
          break;
        }
      }
    }
    run = std::move(next_run);
    layers.push_back(run);
  }

  const Bfs bfs(graph);
  for (std::uint32_t state : bfs.order) {
    if (!run[state]) continue;
    if (!eval_expr(graph, state, *prop.trigger, std::nullopt)) continue;

    auto states = bfs.path_to(state);
    const std::size_t violation_index = states.size() - 1;
    // Extend with the k-step ¬response suffix, walking down the layers.
    std::uint32_t cur = state;
    for (std::uint32_t remaining = prop.bound; remaining > 0; --remaining) {
      for (std::uint32_t succ : graph.successors(cur)) {
        if (layers[remaining - 1][succ]) {
          states.push_back(succ);
          cur = succ;
          break;
        }
      }
    }
    v.outcome = Verdict::Outcome::kViolated;
    v.counterexample = make_counterexample(graph, states, violation_index, prop);
    return v;
  }

  v.outcome = graph.complete() ? Verdict::Outcome::kHolds
                               : Verdict::Outcome::kInconclusive;
  return v;
}

}  // namespace

bool eval_state_expr(const StateGraph& graph, std::size_t state,
                     const Expr& expr) {
  return eval_expr(graph, state, expr, std::nullopt);
}

Verdict check(const StateGraph& graph, const Property& prop) {
  if (prop.kind == Property::Kind::kGlobally) {
    return check_globally(graph, prop);
  }
  return check_bounded_response(graph, prop);
}

}  // namespace pondguard::verify
