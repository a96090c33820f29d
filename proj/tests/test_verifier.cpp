#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <set>

#include "pondguard/dsl/parser.hpp"
#include "pondguard/verify/checker.hpp"
#include "mc_oracle.hpp"
#include "test_util.hpp"

using namespace pondguard;
using namespace testutil;
namespace vf = pondguard::verify;

namespace {

vf::EnvOptions small_env_options() {
  vf::EnvOptions opts;
  opts.wdt_deadline = 3;
  opts.include_fault_dims = false;
  return opts;
}

dsl::RuleSet baseline() {
  return dsl::parse_file(std::string(PONDGUARD_FIXTURES) +
                         "/rules/baseline.rbr");
}

}  // namespace

TEST_CASE("property parser handles the grammar") {
  const auto props = vf::parse_properties(
      "# comment\n"
      "a : G( voted_trip -> F<=2 ( action=stop | action=turn_away ) )\n"
      "\n"
      "b : G( contact -> X action=stop )\n"
      "c : G( !(wdt>5) & (trip_latched -> voted_trip) )\n");
  REQUIRE(props.size() == 3);
  CHECK(props[0].kind == vf::Property::Kind::kBoundedResponse);
  CHECK(props[0].bound == 2);
  CHECK(props[1].kind == vf::Property::Kind::kGlobally);
  CHECK(props[1].body->contains_next());
  CHECK(props[2].kind == vf::Property::Kind::kGlobally);
}

TEST_CASE("property parser reports the offending line") {
  try {
    vf::parse_properties("ok : G( contact )\nbroken : G( voted_trip ->\n");
    FAIL("expected PropertyParseError");
  } catch (const vf::PropertyParseError& e) {
    CHECK(e.line() == 2);
  }
}

TEST_CASE("property parser rejects malformed forms") {
  CHECK_THROWS_AS(vf::parse_properties("a : G( action=fly )\n"),
                  vf::PropertyParseError);
  CHECK_THROWS_AS(vf::parse_properties("a : G( contact -> F<=0 contact )\n"),
                  vf::PropertyParseError);
  CHECK_THROWS_AS(
      vf::parse_properties("a : G( contact -> F<=2 X contact )\n"),
      vf::PropertyParseError);
  CHECK_THROWS_AS(vf::parse_properties("a : G( X X contact )\n"),
                  vf::PropertyParseError);
  CHECK_THROWS_AS(
      vf::parse_properties("a : G( (X contact) & (X voted_trip) )\n"),
      vf::PropertyParseError);
}

TEST_CASE("property parser survives mutated input without crashing") {
  const std::string base =
      "a : G( voted_trip -> F<=2 ( action=stop | action=turn_away ) )\n"
      "b : G( contact -> X action=stop )\n";
  util::Rng rng(777);
  const char charset[] = "abcGFX_<>=!&|->() 0123456789\n";
  for (int round = 0; round < 500; ++round) {
    std::string mutated = base;
    for (int e = 0; e < 3; ++e) {
      mutated[rng.next() % mutated.size()] =
          charset[rng.next() % (sizeof(charset) - 1)];
    }
    try {
      const auto props = vf::parse_properties(mutated);
      for (const auto& p : props) {
        CHECK(!p.name.empty());
      }
    } catch (const vf::PropertyParseError&) {
      // Expected for most mutations.
    }
  }
}

TEST_CASE("catch-all ruleset over a single-cell environment is a fixed point") {
  const auto rs = dsl::parse("rule only: when always do hold_course\n");
  auto env = vf::EnvAbstraction::from_dims({}, small_env_options());
  REQUIRE(env.cell_count() == 1);
  const auto graph = vf::build_state_space(rs, env);
  CHECK(graph.state_count() == 1);
  CHECK(graph.transition_count() == 1);
  CHECK(graph.complete());
}

TEST_CASE("state count matches an independent enumeration oracle") {
  // Two-rule contact/stop program over a 16-cell environment (one distance
  // threshold at 3.0 and the three free booleans). The oracle below
  // re-derives the reachable tuples with its own hand-rolled transition
  // function, written from the documented tick semantics.
  const auto rs = dsl::parse(
      "rule stop_on_contact: when contact do stop\n"
      "rule cruise: when always do hold_course\n");
  vf::EnvOptions opts = small_env_options();
  opts.distance_thresholds = std::vector<double>{3.0};
  const auto env = vf::EnvAbstraction::for_ruleset(rs, opts);
  REQUIRE(env.cell_count() ==
          2 * 2 * 2 * 2);  // distance x classifier x sonar x contact
  const auto graph = vf::build_state_space(rs, env);
  REQUIRE(graph.complete());

  // Oracle state: (cell, latched, ticks, action, wdt_elapsed) with action in
  // {hold_course=0, stop=1}. Reimplements the tick from the documented
  // semantics: distance rep of cell, voted = sonar|classifier, latch on
  // voted / clear above 3.0, first-match rules, watchdog with deadline 3.
  struct Tuple {
    std::size_t cell;
    bool latched;
    std::uint32_t ticks;
    int action;
    std::uint32_t wdt;
    auto operator<=>(const Tuple&) const = default;
  };
  const std::uint32_t deadline = 3;
  const std::uint32_t cap = deadline + 1;
  auto decode = [&](std::size_t cell) {
    // Dim order follows the env builder: distance, classifier, sonar, contact.
    struct Flags {
      bool far;
      bool clf;
      bool sonar;
      bool contact;
    };
    Flags f{};
    f.far = cell % 2 == 1;
    cell /= 2;
    f.clf = cell % 2 == 1;
    cell /= 2;
    f.sonar = cell % 2 == 1;
    cell /= 2;
    f.contact = cell % 2 == 1;
    return f;
  };
  auto tick = [&](const Tuple& t, std::size_t next_cell) {
    const auto f = decode(t.cell);
    const double distance = f.far ? 4.0 : 2.0;  // reps of [3,inf) and (-inf,3)
    const bool voted = f.clf || f.sonar;
    bool latched = t.latched;
    if (voted) {
      latched = true;
    } else if (latched && distance > 3.0) {
      latched = false;
    }
    const std::uint32_t ticks =
        latched ? std::min(t.ticks + 1, cap) : 0;
    const int action = f.contact ? 1 : 0;
    std::uint32_t wdt = t.wdt;
    bool escalated = false;
    const bool cleared = distance > 3.0;
    if (wdt == 0) {
      if (voted) wdt = 1;
    } else if (cleared) {
      wdt = 0;
    } else if (wdt == deadline) {
      wdt = 0;
      escalated = true;
    } else {
      ++wdt;
    }
    return Tuple{next_cell, latched, ticks, escalated ? 1 : action, wdt};
  };
  auto successors_of_cell = [&](std::size_t) {
    // Distance moves at most one interval per tick; with only two intervals
    // every coordinate is adjacent, and the booleans are free, so every cell
    // can follow every cell.
    std::vector<std::size_t> out;
    for (int far = 0; far < 2; ++far) {
      for (int clf = 0; clf < 2; ++clf) {
        for (int sonar = 0; sonar < 2; ++sonar) {
          for (int contact = 0; contact < 2; ++contact) {
            out.push_back(static_cast<std::size_t>(far) +
                          2 * (static_cast<std::size_t>(clf) +
                               2 * (static_cast<std::size_t>(sonar) +
                                    2 * static_cast<std::size_t>(contact))));
          }
        }
      }
    }
    return out;
  };

  std::set<Tuple> reachable;
  std::vector<Tuple> frontier;
  for (std::size_t cell = 0; cell < env.cell_count(); ++cell) {
    const Tuple init{cell, false, 0, 0, 0};
    if (reachable.insert(init).second) frontier.push_back(init);
  }
  while (!frontier.empty()) {
    const Tuple cur = frontier.back();
    frontier.pop_back();
    for (std::size_t next_cell : successors_of_cell(cur.cell)) {
      const Tuple next = tick(cur, next_cell);
      if (reachable.insert(next).second) frontier.push_back(next);
    }
  }
  CHECK(graph.state_count() == reachable.size());
}

TEST_CASE("state limit reports truncation") {
  const auto rs = dsl::parse(
      "rule stop_on_contact: when contact do stop\n"
      "rule cruise: when always do hold_course\n");
  const auto env = vf::EnvAbstraction::for_ruleset(rs, small_env_options());
  vf::Limits limits;
  limits.max_states = 1;
  const auto graph = vf::build_state_space(rs, env, limits);
  CHECK(graph.truncation() == vf::StateGraph::Truncation::kStates);
  CHECK(graph.state_count() == 1);
}

TEST_CASE("depth limit reports truncation") {
  const auto rs = dsl::parse(
      "rule stop_on_contact: when contact do stop\n"
      "rule cruise: when always do hold_course\n");
  const auto env = vf::EnvAbstraction::for_ruleset(rs, small_env_options());
  vf::Limits limits;
  limits.max_depth = 1;
  const auto graph = vf::build_state_space(rs, env, limits);
  CHECK(graph.truncation() == vf::StateGraph::Truncation::kDepth);
}

TEST_CASE("single-state system: holds and 1-state counterexample") {
  const auto rs = dsl::parse("rule only: when always do hold_course\n");
  const auto env = vf::EnvAbstraction::from_dims({}, small_env_options());
  const auto graph = vf::build_state_space(rs, env);

  const auto holds =
      vf::check(graph, vf::parse_properties("p : G( action=hold_course )\n")[0]);
  CHECK(holds.holds());

  const auto fails =
      vf::check(graph, vf::parse_properties("q : G( action=stop )\n")[0]);
  CHECK(fails.outcome == vf::Verdict::Outcome::kViolated);
  REQUIRE(fails.counterexample.has_value());
  CHECK(fails.counterexample->path.size() == 1);
  CHECK(fails.counterexample->violation_index == 0);
  const auto rep = vf::replay(*fails.counterexample, rs);
  CHECK(rep.valid);
}

TEST_CASE("bounded-response mutation flips the verdict with a replayable trace") {
  const auto props = vf::parse_properties(
      "avoid : G( voted_trip -> F<=2 ( action=stop | action=reverse | "
      "action=turn_away ) )\n");
  const auto rs_good = baseline();
  const auto rs_bad = dsl::parse_file(std::string(PONDGUARD_FIXTURES) +
                                      "/rules/mutant_no_avoid.rbr");

  const auto env_good = vf::EnvAbstraction::for_ruleset(rs_good, {});
  const auto good = vf::check(vf::build_state_space(rs_good, env_good), props[0]);
  CHECK(good.holds());

  const auto env_bad = vf::EnvAbstraction::for_ruleset(rs_bad, {});
  const auto graph_bad = vf::build_state_space(rs_bad, env_bad);
  const auto bad = vf::check(graph_bad, props[0]);
  CHECK(bad.outcome == vf::Verdict::Outcome::kViolated);
  REQUIRE(bad.counterexample.has_value());
  const auto rep = vf::replay(*bad.counterexample, rs_bad);
  CHECK(rep.valid);

  // Same trace against a different program must not replay.
  const auto cross = vf::replay(*bad.counterexample, rs_good);
  CHECK_FALSE(cross.valid);
}

TEST_CASE("empty counterexample fails replay at step zero") {
  vf::Counterexample ce;
  ce.property = vf::parse_properties("p : G( contact )\n")[0];
  const auto rep = vf::replay(ce, baseline());
  CHECK_FALSE(rep.valid);
  CHECK(rep.mismatch_index == 0);
}

TEST_CASE("checker matches the brute-force oracle on small fixtures") {
  struct Fixture {
    const char* rules;
    vf::EnvOptions opts;
  };
  std::vector<Fixture> fixtures;
  {
    vf::EnvOptions base = small_env_options();
    fixtures.push_back({"rule stop_on_contact: when contact do stop\n"
                        "rule cruise: when always do hold_course\n",
                        base});
    vf::EnvOptions faults = base;
    faults.include_fault_dims = true;
    faults.wdt_deadline = 2;
    fixtures.push_back({"rule avoid: when voted_trip do turn_away\n"
                        "rule cruise: when always do hold_course\n",
                        faults});
    vf::EnvOptions quiet = base;
    quiet.initial = vf::EnvOptions::Initial::kQuiet;
    fixtures.push_back({"rule hold: when always do hold_course\n", quiet});
    vf::EnvOptions free_num = base;
    free_num.free_numeric_transitions = true;
    fixtures.push_back(
        {"rule back: when trip_latched and distance < 1.0 do reverse\n"
         "rule avoid: when voted_trip do turn_away\n"
         "rule cruise: when always do hold_course\n",
         free_num});
  }

  const auto props = vf::parse_properties(
      "g1 : G( contact -> X action=stop )\n"
      "g2 : G( action=stop -> trip_latched )\n"
      "g3 : G( !(wdt>3) )\n"
      "g4 : G( !(X action=stop) )\n"  // X under negation
      "b1 : G( voted_trip -> F<=2 ( action=turn_away | action=stop | "
      "action=reverse ) )\n"
      "b2 : G( contact -> F<=1 action=stop )\n"
      "b3 : G( trip_latched -> F<=3 action=hold_course )\n");

  int checked = 0;
  for (const auto& fixture : fixtures) {
    const auto rs = dsl::parse(fixture.rules);
    const auto env = vf::EnvAbstraction::for_ruleset(rs, fixture.opts);
    const auto graph = vf::build_state_space(rs, env);
    REQUIRE(graph.complete());
    REQUIRE(graph.state_count() <= 5000);
    for (const auto& prop : props) {
      const auto verdict = vf::check(graph, prop);
      const bool expected = mc_oracle::holds(graph, prop);
      CHECK(verdict.holds() == expected);
      if (verdict.counterexample) {
        const auto rep = vf::replay(*verdict.counterexample, rs);
        CHECK(rep.valid);
      }
      ++checked;
    }
  }
  CHECK(checked == 28);
}

TEST_CASE("environment config file drives the abstraction") {
  const auto opts = vf::EnvOptions::from_file(
      std::string(PONDGUARD_FIXTURES) + "/env/small_env.json");
  CHECK(opts.wdt_deadline == 3);
  CHECK_FALSE(opts.include_fault_dims);
  CHECK(opts.initial == vf::EnvOptions::Initial::kQuiet);
  REQUIRE(opts.distance_thresholds.has_value());
  CHECK(opts.distance_thresholds->size() == 2);

  const auto rs = baseline();
  const auto env = vf::EnvAbstraction::for_ruleset(rs, opts);
  // distance(3 intervals) x classifier x sonar x contact, quiet start.
  CHECK(env.cell_count() == 3 * 2 * 2 * 2);
  REQUIRE(env.initial_cells().size() == 1);
  const auto percept = env.percept_for_cell(env.initial_cells()[0]);
  CHECK_FALSE(percept.contact);
  CHECK_FALSE(percept.voted_trip);
  CHECK(percept.distance == 4.0);  // top interval representative

  CHECK_THROWS_AS(vf::EnvOptions::from_json_text("{ \"wdt\": 1 }"),
                  ConfigError);
  CHECK_THROWS_AS(vf::EnvOptions::from_json_text("{ \"wdt_deadline\": 0 }"),
                  ConfigError);
}

TEST_CASE("counterexamples for plain G properties are BFS-minimal") {
  const auto rs = dsl::parse_file(std::string(PONDGUARD_FIXTURES) +
                                  "/rules/mutant_no_avoid.rbr");
  const auto env = vf::EnvAbstraction::for_ruleset(rs, small_env_options());
  const auto graph = vf::build_state_space(rs, env);
  const auto props = vf::parse_properties(
      "p1 : G( !trip_latched )\n"
      "p2 : G( !(action=stop) )\n"
      "p3 : G( !voted_trip | !contact )\n");
  for (const auto& prop : props) {
    const auto verdict = vf::check(graph, prop);
    if (verdict.holds()) continue;
    REQUIRE(verdict.counterexample.has_value());
    // Independent BFS distance to the nearest violating state.
    std::vector<int> dist(graph.state_count(), -1);
    std::vector<std::uint32_t> queue;
    for (auto init : graph.initial_states()) {
      if (dist[init] < 0) {
        dist[init] = 0;
        queue.push_back(init);
      }
    }
    std::size_t best = SIZE_MAX;
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
      const auto s = queue[qi];
      if (!mc_oracle::eval(graph, s, *prop.body)) {
        best = static_cast<std::size_t>(dist[s]);
        break;
      }
      for (auto succ : graph.successors(s)) {
        if (dist[succ] < 0) {
          dist[succ] = dist[s] + 1;
          queue.push_back(succ);
        }
      }
    }
    REQUIRE(best != SIZE_MAX);
    CHECK(verdict.counterexample->violation_index == best);
    CHECK(verdict.counterexample->path.size() == best + 1);
  }
}

TEST_CASE("exploration is deterministic across repeated builds") {
  const auto rs = baseline();
  const auto env = vf::EnvAbstraction::for_ruleset(rs, {});
  const auto a = vf::build_state_space(rs, env);
  const auto b = vf::build_state_space(rs, env);
  REQUIRE(a.state_count() == b.state_count());
  CHECK(a.transition_count() == b.transition_count());
  for (std::size_t i = 0; i < a.state_count(); ++i) {
    CHECK(a.state(i) == b.state(i));
  }
  const auto prop = vf::parse_properties("p : G( !(action=reverse) )\n")[0];
  const auto va = vf::check(a, prop);
  const auto vb = vf::check(b, prop);
  CHECK(va.holds() == vb.holds());
  if (va.counterexample && vb.counterexample) {
    CHECK(va.counterexample->path.size() == vb.counterexample->path.size());
    for (std::size_t i = 0; i < va.counterexample->path.size(); ++i) {
      CHECK(va.counterexample->path[i] == vb.counterexample->path[i]);
    }
  }
}

TEST_CASE("inconclusive on truncated graphs unless violated") {
  const auto rs = baseline();
  const auto env = vf::EnvAbstraction::for_ruleset(rs, {});
  vf::Limits limits;
  limits.max_states = 50;
  const auto graph = vf::build_state_space(rs, env, limits);
  REQUIRE_FALSE(graph.complete());
  const auto prop =
      vf::parse_properties("p : G( action=hold_course | action=turn_away | "
                           "action=stop | action=reverse )\n")[0];
  const auto verdict = vf::check(graph, prop);
  CHECK(verdict.outcome == vf::Verdict::Outcome::kInconclusive);
}
