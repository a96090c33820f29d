#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pondguard/dsl/decision_tree.hpp"
#include "pondguard/dsl/parser.hpp"
#include "pondguard/rbr/engine.hpp"
#include "test_util.hpp"

using namespace pondguard;
using namespace testutil;

TEST_CASE("update_beliefs latches on a voted trip") {
  rbr::BeliefState b;
  rbr::Percept p;
  p.voted_trip = true;
  p.distance = 1.0;
  const auto next = rbr::update_beliefs(b, p, 3.0);
  CHECK(next.trip_latched);
  CHECK(next.ticks_since_trip == 1);
}

TEST_CASE("update_beliefs clears once the range opens") {
  rbr::BeliefState b;
  b.trip_latched = true;
  b.ticks_since_trip = 4;
  rbr::Percept p;
  p.distance = 5.0;
  const auto next = rbr::update_beliefs(b, p, 3.0);
  CHECK_FALSE(next.trip_latched);
  CHECK(next.ticks_since_trip == 0);
}

TEST_CASE("update_beliefs holds the latch while close") {
  rbr::BeliefState b;
  b.trip_latched = true;
  b.ticks_since_trip = 4;
  rbr::Percept p;
  p.distance = 1.0;
  const auto next = rbr::update_beliefs(b, p, 3.0);
  CHECK(next.trip_latched);
  CHECK(next.ticks_since_trip == 5);
}

TEST_CASE("ticks_since_trip is zero exactly when unlatched") {
  util::Rng rng(99);
  rbr::BeliefState b;
  for (int i = 0; i < 5000; ++i) {
    rbr::Percept p;
    p.voted_trip = rng.next() % 4 == 0;
    p.distance = rng.uniform01() * 6.0;
    b = rbr::update_beliefs(b, p, 3.0);
    CHECK((b.ticks_since_trip == 0) == !b.trip_latched);
  }
}

TEST_CASE("deliberate takes the first matching rule") {
  const auto rs = dsl::parse(
      "rule stop_on_contact: when contact do stop\n"
      "rule cruise: when always do hold_course\n");
  rbr::Percept p;
  p.contact = true;
  const auto step = rbr::deliberate(rbr::BeliefState{}, p, rs);
  CHECK(step.action == Action::stop());
  CHECK(step.fired_rule == "stop_on_contact");
  CHECK(step.beliefs_after.last_action == Action::stop());
}

TEST_CASE("deliberate evaluates numeric guards") {
  const auto rs = dsl::parse(
      "rule r1: when distance < 1.5 and not contact do turn_away\n"
      "rule fallback: when always do hold_course\n");
  rbr::Percept p;
  p.distance = 1.0;
  CHECK(rbr::deliberate(rbr::BeliefState{}, p, rs).action ==
        Action::turn_away());
  p.contact = true;
  CHECK(rbr::deliberate(rbr::BeliefState{}, p, rs).action ==
        Action::hold_course());
}

TEST_CASE("deliberate falls through to the catch-all") {
  const auto rs = dsl::parse(
      "rule r1: when voted_trip do stop\n"
      "rule fallback: when always do hold_course\n");
  const auto step = rbr::deliberate(rbr::BeliefState{}, rbr::Percept{}, rs);
  CHECK(step.action == Action::hold_course());
  CHECK(step.fired_rule == "fallback");
}

TEST_CASE("deliberate is deterministic") {
  const auto rs = generate_ruleset(17);
  rbr::Percept p;
  p.distance = 2.0;
  p.voted_trip = true;
  rbr::BeliefState b;
  b.trip_latched = true;
  b.ticks_since_trip = 2;
  const auto first = rbr::deliberate(b, p, rs);
  for (int i = 0; i < 20; ++i) {
    const auto again = rbr::deliberate(b, p, rs);
    CHECK(first == again);
  }
}

TEST_CASE("act maps actions to thrust") {
  rbr::ControlParams params;
  params.reverse_thrust = 0.5;
  params.cruise_thrust = 0.4;
  params.turn_thrust = 0.5;

  const auto stop = rbr::act(Action::stop(), params);
  CHECK(stop.left == 0.0);
  CHECK(stop.right == 0.0);

  const auto rev = rbr::act(Action::reverse(), params);
  CHECK(rev.left == -0.5);
  CHECK(rev.right == -0.5);

  const auto cruise = rbr::act(Action::hold_course(), params);
  CHECK(cruise.left == 0.4);
  CHECK(cruise.right == 0.4);

  params.turn_to_port = true;
  const auto port = rbr::act(Action::turn_away(), params);
  CHECK(port.left == -0.5);
  CHECK(port.right == 0.5);
  params.turn_to_port = false;
  const auto starboard = rbr::act(Action::turn_away(), params);
  CHECK(starboard.left == 0.5);
  CHECK(starboard.right == -0.5);

  const auto thrust = rbr::act(Action::set_thrust(2.0, -3.0), params);
  CHECK(thrust.left == 1.0);
  CHECK(thrust.right == -1.0);
}

TEST_CASE("deliberate agrees with the compiled decision tree") {
  const auto rs = dsl::parse(
      "rule a: when trip_latched and distance < 3.0 do turn_away\n"
      "rule b: when voted_trip or contact do stop\n"
      "rule c: when ticks_since_trip > 2 do reverse\n"
      "rule fallback: when always do hold_course\n");
  const auto cells = dsl::CellSpace::from_ruleset(rs);
  const auto tree = dsl::DecisionTree::compile(rs);
  for (std::size_t cell = 0; cell < cells.cell_count(); ++cell) {
    const auto v = cells.representative(cell);
    const auto step = rbr::deliberate(beliefs_from(v), percept_from(v), rs);
    CHECK(step.action == tree.evaluate(v));
  }
}
