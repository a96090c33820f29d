#pragma once

// Temporal safety properties over the explored state graph.
//
// File format (.prop, one property per line, '#' comments):
//   name : G( expr )
//   name : G( expr -> F<=k expr )
//
// expr atoms: action=stop|reverse|turn_away|hold_course, contact, voted_trip,
// trip_latched, wdt>n; operators ! & | -> and parentheses. A plain G body may
// additionally contain one X (next) operator over an X-free subformula, which
// is evaluated universally over successors. Bounded-response sides are
// propositional and k >= 1. Wall-clock deadlines map to step bounds as
// k = ceil(deadline / dt); unbounded eventualities are not expressible, which
// keeps every counterexample a finite path.

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "pondguard/util/errors.hpp"
#include "pondguard/vocab.hpp"

namespace pondguard::verify {

class PropertyParseError : public Error {
 public:
  PropertyParseError(int line, const std::string& message)
      : Error("property line " + std::to_string(line) + ": " + message),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

class Expr;
using ExprPtr = std::shared_ptr<const Expr>;

class Expr {
 public:
  enum class Kind : std::uint8_t {
    kActionIs,
    kContact,
    kVotedTrip,
    kTripLatched,
    kWdtGreater,
    kNot,
    kAnd,
    kOr,
    kImplies,
    kNext,
  };

  static ExprPtr action_is(Action::Kind kind);
  static ExprPtr contact();
  static ExprPtr voted_trip();
  static ExprPtr trip_latched();
  static ExprPtr wdt_greater(std::uint32_t n);
  static ExprPtr negate(ExprPtr child);
  static ExprPtr conj(ExprPtr lhs, ExprPtr rhs);
  static ExprPtr disj(ExprPtr lhs, ExprPtr rhs);
  static ExprPtr implies(ExprPtr lhs, ExprPtr rhs);
  static ExprPtr next(ExprPtr child);

  Kind kind() const { return kind_; }
  Action::Kind action() const { return action_; }
  std::uint32_t wdt_bound() const { return wdt_bound_; }
  const ExprPtr& lhs() const { return lhs_; }
  const ExprPtr& rhs() const { return rhs_; }

  bool contains_next() const;
  std::string to_string() const;

  // Construct through the factories; members have no setters.
  Expr() = default;

 private:
  Kind kind_ = Kind::kContact;
  Action::Kind action_ = Action::Kind::kStop;
  std::uint32_t wdt_bound_ = 0;
  ExprPtr lhs_;
  ExprPtr rhs_;
};

struct Property {
  enum class Kind : std::uint8_t { kGlobally, kBoundedResponse };

  std::string name;
  Kind kind = Kind::kGlobally;
  ExprPtr body;                 // kGlobally
  ExprPtr trigger;              // kBoundedResponse
  ExprPtr response;             // kBoundedResponse
  std::uint32_t bound = 1;      // kBoundedResponse, >= 1

  std::string to_string() const;
};

// Parses a whole .prop file. Throws PropertyParseError with the 1-based line.
std::vector<Property> parse_properties(std::string_view text);
std::vector<Property> parse_properties_file(const std::string& path);

}  // namespace pondguard::verify
