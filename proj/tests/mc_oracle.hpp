#pragma once

// Brute-force property evaluator used as the model checker's test oracle.
// Everything here is re-derived from the documented semantics: atoms are
// re-implemented against the raw state fields, G is a full state scan with an
// explicit successor scan for X, and bounded response is top-down path
// enumeration (memoized on (state, remaining-steps)). No checker code paths
// are reused.

#include <map>
#include <utility>

#include "pondguard/verify/property.hpp"
#include "pondguard/verify/state_space.hpp"

namespace mc_oracle {

namespace vf = pondguard::verify;

inline bool atom(const vf::StateGraph& g, std::size_t s, const vf::Expr& e) {
  const vf::ModelState& st = g.state(s);
  const auto percept = g.env().percept_for_cell(st.env_cell);
  using K = vf::Expr::Kind;
  switch (e.kind()) {
    case K::kActionIs: return st.last_action.kind == e.action();
    case K::kContact: return percept.contact;
    case K::kVotedTrip: return percept.voted_trip;
    case K::kTripLatched: return st.trip_latched;
    case K::kWdtGreater: return st.wdt_elapsed > e.wdt_bound();
    default: return false;
  }
}

inline bool eval(const vf::StateGraph& g, std::size_t s, const vf::Expr& e) {
  using K = vf::Expr::Kind;
  switch (e.kind()) {
    case K::kNot: return !eval(g, s, *e.lhs());
    case K::kAnd: return eval(g, s, *e.lhs()) && eval(g, s, *e.rhs());
    case K::kOr: return eval(g, s, *e.lhs()) || eval(g, s, *e.rhs());
    case K::kImplies: return !eval(g, s, *e.lhs()) || eval(g, s, *e.rhs());
    case K::kNext: {
      for (auto succ : g.successors(s)) {
        if (!eval(g, succ, *e.lhs())) return false;
      }
      return true;
    }
    default: return atom(g, s, e);
  }
}

inline bool globally_holds(const vf::StateGraph& g, const vf::Property& p) {
  for (std::size_t s = 0; s < g.state_count(); ++s) {
    if (!eval(g, s, *p.body)) return false;
  }
  return true;
}

using RunMemo = std::map<std::pair<std::size_t, std::uint32_t>, bool>;

// Exists a path of `depth` further transitions staying in !response from s.
inline bool bad_run(const vf::StateGraph& g, const vf::Property& p,
                    std::size_t s, std::uint32_t depth, RunMemo& memo) {
  if (eval(g, s, *p.response)) return false;
  if (depth == 0) return true;
  const auto key = std::make_pair(s, depth);
  if (const auto it = memo.find(key); it != memo.end()) return it->second;
  bool found = false;
  for (auto succ : g.successors(s)) {
    if (bad_run(g, p, succ, depth - 1, memo)) {
      found = true;
      break;
    }
  }
  memo[key] = found;
  return found;
}

inline bool bounded_holds(const vf::StateGraph& g, const vf::Property& p) {
  RunMemo memo;
  for (std::size_t s = 0; s < g.state_count(); ++s) {
    if (!eval(g, s, *p.trigger)) continue;
    if (bad_run(g, p, s, p.bound, memo)) return false;
  }
  return true;
}

inline bool holds(const vf::StateGraph& g, const vf::Property& p) {
  return p.kind == vf::Property::Kind::kGlobally ? globally_holds(g, p)
                                                 : bounded_holds(g, p);
}

}  // namespace mc_oracle
