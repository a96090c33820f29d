#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "pondguard/dsl/decision_tree.hpp"
#include "pondguard/dsl/parser.hpp"
#include "pondguard/dsl/partition.hpp"
#include "pondguard/dsl/validate.hpp"
#include "test_util.hpp"

using namespace pondguard;
using namespace testutil;

namespace {

const char* kTwoRule =
    "rule stop_on_contact: when contact do stop\n"
    "rule cruise: when always do hold_course\n";

}  // namespace

TEST_CASE("parse minimal two-rule program") {
  const auto rs = dsl::parse(kTwoRule);
  REQUIRE(rs.rules().size() == 2);
  CHECK(rs.rules()[0].id == "stop_on_contact");
  CHECK(rs.rules()[0].action == Action::stop());
  CHECK(rs.rules()[1].condition->kind() == dsl::Cond::Kind::kAlways);
  CHECK(rs.source_hash() != 0);
}

TEST_CASE("parse builds the expected condition tree") {
  const auto rs = dsl::parse(
      "rule r1: when distance < 1.5 and not contact do turn_away\n"
      "rule fallback: when always do hold_course\n");
  const auto& cond = *rs.rules()[0].condition;
  REQUIRE(cond.kind() == dsl::Cond::Kind::kAnd);
  REQUIRE(cond.lhs()->kind() == dsl::Cond::Kind::kCompare);
  CHECK(cond.lhs()->field() == Field::kDistance);
  CHECK(cond.lhs()->op() == dsl::CmpOp::kLt);
  CHECK(cond.lhs()->literal() == 1.5);
  REQUIRE(cond.rhs()->kind() == dsl::Cond::Kind::kNot);
  CHECK(cond.rhs()->lhs()->kind() == dsl::Cond::Kind::kAtom);
  CHECK(cond.rhs()->lhs()->field() == Field::kContact);
}

TEST_CASE("unknown percept field is rejected") {
  try {
    dsl::parse("rule r1: when depth < 2 do stop\n");
    FAIL("expected ParseError");
  } catch (const dsl::ParseError& e) {
    CHECK(e.kind() == dsl::ParseError::Kind::kUnknownField);
    CHECK(std::string(e.what()).find("depth") != std::string::npos);
  }
}

TEST_CASE("duplicate rule ids are rejected") {
  try {
    dsl::parse(
        "rule a: when contact do stop\n"
        "rule a: when always do hold_course\n");
    FAIL("expected ParseError");
  } catch (const dsl::ParseError& e) {
    CHECK(e.kind() == dsl::ParseError::Kind::kDuplicateRuleId);
  }
}

TEST_CASE("syntax error carries position and expectations") {
  try {
    dsl::parse("rule r1 when contact do stop\n");
    FAIL("expected ParseError");
  } catch (const dsl::ParseError& e) {
    CHECK(e.kind() == dsl::ParseError::Kind::kSyntax);
    CHECK(e.pos().line == 1);
    CHECK(!e.expected().empty());
  }
}

TEST_CASE("type misuse of fields is rejected") {
  CHECK_THROWS_AS(dsl::parse("rule r: when contact < 1 do stop\n"),
                  dsl::ParseError);
  CHECK_THROWS_AS(dsl::parse("rule r: when distance do stop\n"),
                  dsl::ParseError);
}

TEST_CASE("set_thrust parses and clamps") {
  const auto rs = dsl::parse(
      "rule r: when contact do set_thrust(2.0, -3.0)\n"
      "rule fallback: when always do hold_course\n");
  CHECK(rs.rules()[0].action.kind == Action::Kind::kSetThrust);
  CHECK(rs.rules()[0].action.left == 1.0);
  CHECK(rs.rules()[0].action.right == -1.0);
}

TEST_CASE("comments and blank lines are ignored") {
  const auto rs = dsl::parse(
      "# header comment\n"
      "\n"
      "rule a: when contact do stop  # trailing comment\n"
      "\n"
      "rule fallback: when always do hold_course\n");
  CHECK(rs.rules().size() == 2);
}

TEST_CASE("canonical round trip is structurally stable") {
  const std::vector<std::string> corpus = {
      kTwoRule,
      "rule r1: when distance < 1.5 and not contact do turn_away\n"
      "rule r2: when voted_trip or (contact and speed > 0.25) do reverse\n"
      "rule r3: when not (voted_trip or trip_latched) do set_thrust(0.5, "
      "-0.25)\n"
      "rule fallback: when always do hold_course\n",
      "rule a: when ticks_since_trip >= 3 and distance <= 2 do stop\n"
      "rule b: when not not contact do reverse\n"
      "rule fallback: when always do hold_course\n",
      // Extreme literals print in exponent form and must still reparse.
      "rule far: when distance > 1000000000 do stop\n"
      "rule near: when distance < 0.0001 do reverse\n"
      "rule fallback: when always do hold_course\n",
  };
  for (const auto& text : corpus) {
    const auto first = dsl::parse(text);
    const auto second = dsl::parse(first.pretty_print());
    CHECK(first.structurally_equal(second));
    CHECK(first.source_hash() == second.source_hash());
    CHECK(second.pretty_print() == first.pretty_print());
  }
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const auto rs = generate_ruleset(seed);
    const auto reparsed = dsl::parse(rs.pretty_print());
    CHECK(rs.structurally_equal(reparsed));
    CHECK(rs.source_hash() == reparsed.source_hash());
  }
}

TEST_CASE("parser survives mutated input without crashing") {
  const std::string base =
      "rule r1: when distance < 1.5 and not contact do turn_away\n"
      "rule r2: when voted_trip or trip_latched do reverse\n"
      "rule fallback: when always do hold_course\n";
  util::Rng rng(4242);
  const char charset[] = "abcdefgz_<>=().,0123456789 \n#";
  for (int round = 0; round < 500; ++round) {
    std::string mutated = base;
    const int edits = 1 + static_cast<int>(rng.next() % 4);
    for (int e = 0; e < edits; ++e) {
      const auto pos = rng.next() % mutated.size();
      mutated[pos] = charset[rng.next() % (sizeof(charset) - 1)];
    }
    try {
      const auto rs = dsl::parse(mutated);
      // Still-valid mutants must round-trip like any other program.
      CHECK(dsl::parse(rs.pretty_print()).structurally_equal(rs));
    } catch (const dsl::ParseError&) {
      // Expected for most mutations.
    }
  }
}

TEST_CASE("validate flags a missing catch-all") {
  const auto rs = dsl::parse("rule a: when contact do stop\n");
  const auto diags = dsl::validate(rs);
  REQUIRE(diags.size() == 1);
  CHECK(diags[0].severity == dsl::Diagnostic::Severity::kError);
  CHECK(diags[0].code == dsl::Diagnostic::Code::kMissingCatchAll);
}

TEST_CASE("validate flags shadowed rules over the cell partition") {
  const auto rs = dsl::parse(
      "rule first: when contact do stop\n"
      "rule second: when contact do reverse\n"
      "rule fallback: when always do hold_course\n");
  const auto diags = dsl::validate(rs);
  REQUIRE(diags.size() == 1);
  CHECK(diags[0].code == dsl::Diagnostic::Code::kShadowedRule);
  CHECK(diags[0].severity == dsl::Diagnostic::Severity::kWarn);
  CHECK(diags[0].rule_index == 1);  // "rule 2" in 1-based message terms
  CHECK(diags[0].rule_id == "second");
  CHECK(diags[0].message.find("rule 2") != std::string::npos);
}

TEST_CASE("validate passes the clean two-rule program") {
  CHECK(dsl::validate(dsl::parse(kTwoRule)).empty());
}

TEST_CASE("validate is pure and deterministic") {
  for (std::uint64_t seed = 50; seed < 60; ++seed) {
    const auto rs = generate_ruleset(seed);
    const auto a = dsl::validate(rs);
    const auto b = dsl::validate(rs);
    CHECK(a == b);
  }
}

TEST_CASE("shadowed rules never fire under first-match evaluation") {
  for (std::uint64_t seed = 100; seed < 140; ++seed) {
    const auto rs = generate_ruleset(seed);
    const auto diags = dsl::validate(rs);
    std::set<std::size_t> shadowed;
    for (const auto& d : diags) {
      if (d.code == dsl::Diagnostic::Code::kShadowedRule) {
        shadowed.insert(d.rule_index);
      }
    }
    const auto cells = dsl::CellSpace::from_ruleset(rs);
    for (std::size_t cell = 0; cell < cells.cell_count(); ++cell) {
      const auto v = cells.representative(cell);
      const auto step =
          rbr::deliberate(beliefs_from(v), percept_from(v), rs);
      for (std::size_t idx : shadowed) {
        CHECK(rs.rules()[idx].id != step.fired_rule);
      }
    }
  }
}

TEST_CASE("partition cell counts match the threshold structure") {
  const auto one_threshold = dsl::parse(
      "rule a: when distance < 1.5 and contact do stop\n"
      "rule fallback: when always do hold_course\n");
  CHECK(dsl::CellSpace::from_ruleset(one_threshold).cell_count() == 4);

  const auto two_thresholds = dsl::parse(
      "rule a: when distance < 1.5 and contact do stop\n"
      "rule b: when distance < 3.0 and voted_trip do turn_away\n"
      "rule fallback: when always do hold_course\n");
  CHECK(dsl::CellSpace::from_ruleset(two_thresholds).cell_count() == 12);

  const auto one_boolean = dsl::parse(kTwoRule);
  CHECK(dsl::CellSpace::from_ruleset(one_boolean).cell_count() == 2);
}

TEST_CASE("partition representatives follow the interval convention") {
  const auto rs = dsl::parse(
      "rule a: when distance < 1.5 do stop\n"
      "rule b: when distance >= 3.0 do reverse\n"
      "rule fallback: when always do hold_course\n");
  const auto cells = dsl::CellSpace::from_ruleset(rs);
  REQUIRE(cells.dims().size() == 1);
  REQUIRE(cells.dims()[0].thresholds == std::vector<double>{1.5, 3.0});
  CHECK(cells.numeric_rep(0, 0) == 0.5);   // (-inf, 1.5) -> 1.5 - 1
  CHECK(cells.numeric_rep(0, 1) == 2.25);  // [1.5, 3.0) -> midpoint
  CHECK(cells.numeric_rep(0, 2) == 4.0);   // [3.0, inf) -> 3.0 + 1
}

TEST_CASE("partition soundness: conditions constant within a cell") {
  util::Rng rng(7);
  for (std::uint64_t seed = 200; seed < 220; ++seed) {
    const auto rs = generate_ruleset(seed);
    const auto cells = dsl::CellSpace::from_ruleset(rs);
    if (cells.cell_count() > 2000) continue;
    for (std::size_t cell = 0; cell < cells.cell_count(); ++cell) {
      const auto rep = cells.representative(cell);
      const auto coords = cells.coords(cell);
      for (int sample = 0; sample < 3; ++sample) {
        Valuation v = rep;
        for (std::size_t d = 0; d < cells.dims().size(); ++d) {
          const auto& dim = cells.dims()[d];
          if (dim.boolean) continue;
          const auto [lo, hi] = cells.interval(d, coords[d]);
          const double u = rng.uniform01();
          double x;
          if (std::isinf(lo) && std::isinf(hi)) {
            x = (u - 0.5) * 20.0;
          } else if (std::isinf(lo)) {
            x = hi - 1e-9 - u * 10.0;
          } else if (std::isinf(hi)) {
            x = lo + 1e-9 + u * 10.0;
          } else {
            x = lo + 1e-9 + u * (hi - lo - 2e-9);
          }
          v.set_num(dim.field, x);
        }
        for (const auto& rule : rs.rules()) {
          CHECK(rule.condition->eval(rep) == rule.condition->eval(v));
        }
      }
    }
  }
}

TEST_CASE("decision tree: boolean split example") {
  const auto rs = dsl::parse(kTwoRule);
  const auto tree = dsl::DecisionTree::compile(rs);
  Valuation contact_on;
  contact_on.set_flag(Field::kContact, true);
  Valuation contact_off;
  CHECK(tree.evaluate(contact_on) == Action::stop());
  CHECK(tree.evaluate(contact_off) == Action::hold_course());
}

TEST_CASE("decision tree: degenerate catch-all program is a single leaf") {
  const auto rs = dsl::parse("rule only: when always do turn_away\n");
  const auto tree = dsl::DecisionTree::compile(rs);
  CHECK(tree.node_count() == 0);
  CHECK(tree.leaf_count() == 1);
  CHECK(tree.evaluate(Valuation{}) == Action::turn_away());
}

TEST_CASE("decision tree compile rejects invalid rule sets") {
  const auto rs = dsl::parse("rule a: when contact do stop\n");
  CHECK_THROWS_AS(dsl::DecisionTree::compile(rs), dsl::ValidationFailed);
}

TEST_CASE("decision tree agrees with first-match on every cell") {
  const auto rs = dsl::parse(
      "rule a: when distance < 1.5 and contact do stop\n"
      "rule b: when distance < 3.0 and voted_trip do turn_away\n"
      "rule fallback: when always do hold_course\n");
  const auto cells = dsl::CellSpace::from_ruleset(rs);
  REQUIRE(cells.cell_count() == 12);
  const auto tree = dsl::DecisionTree::compile(rs);
  for (std::size_t cell = 0; cell < cells.cell_count(); ++cell) {
    const auto v = cells.representative(cell);
    const auto step = rbr::deliberate(beliefs_from(v), percept_from(v), rs);
    CHECK(tree.evaluate(v) == step.action);
  }
}

TEST_CASE("decision tree equivalence over generated rule sets") {
  for (std::uint64_t seed = 300; seed < 320; ++seed) {
    const auto rs = generate_ruleset(seed);
    const auto cells = dsl::CellSpace::from_ruleset(rs);
    REQUIRE(cells.cell_count() <= 10000);
    const auto tree = dsl::DecisionTree::compile(rs);
    for (std::size_t cell = 0; cell < cells.cell_count(); ++cell) {
      const auto v = cells.representative(cell);
      const auto step = rbr::deliberate(beliefs_from(v), percept_from(v), rs);
      REQUIRE(tree.evaluate(v) == step.action);
    }
  }
}
