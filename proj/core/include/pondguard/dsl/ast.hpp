#pragma once

// Rule programs: ordered guarded-action rules over the percept vocabulary.
// Conditions compare fields against literal constants only, so the set of
// thresholds appearing in a program induces a finite partition of the percept
// space (see partition.hpp). Everything here is immutable after construction
// and safe to share across threads.

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "pondguard/vocab.hpp"

namespace pondguard::dsl {

enum class CmpOp : std::uint8_t { kLt, kLe, kGt, kGe };

std::string_view cmp_symbol(CmpOp op);
bool cmp_eval(double lhs, CmpOp op, double rhs);

class Cond;
using CondPtr = std::shared_ptr<const Cond>;

// Condition AST node. Nodes are shared immutable values; Not uses lhs only.
class Cond {
 public:
  enum class Kind : std::uint8_t { kAlways, kAtom, kCompare, kNot, kAnd, kOr };

  static CondPtr always();
  static CondPtr atom(Field field);                             // boolean field
  static CondPtr compare(Field field, CmpOp op, double literal);  // numeric field
  static CondPtr negate(CondPtr child);
  static CondPtr conj(CondPtr lhs, CondPtr rhs);
  static CondPtr disj(CondPtr lhs, CondPtr rhs);

  Kind kind() const { return kind_; }
  Field field() const { return field_; }
  CmpOp op() const { return op_; }
  double literal() const { return literal_; }
  const CondPtr& lhs() const { return lhs_; }
  const CondPtr& rhs() const { return rhs_; }

  bool eval(const Valuation& v) const;
  bool structurally_equal(const Cond& other) const;

  // Collects referenced fields and, for numeric fields, the literal
  // thresholds used against them.
  void collect_refs(std::vector<bool>& fields_seen,
                    std::array<std::vector<double>, kFieldCount>& thresholds) const;

  // Canonical text with minimal parentheses (or < and < not).
  std::string to_string() const;

 private:
  Cond() = default;

  Kind kind_ = Kind::kAlways;
  Field field_ = Field::kDistance;
  CmpOp op_ = CmpOp::kLt;
  double literal_ = 0.0;
  CondPtr lhs_;
  CondPtr rhs_;
};

struct Rule {
  std::string id;
  CondPtr condition;
  Action action;

  bool structurally_equal(const Rule& other) const;
};

// Validation diagnostics. Warnings do not block compilation; errors do.
struct Diagnostic {
  enum class Severity : std::uint8_t { kError, kWarn };
  enum class Code : std::uint8_t { kMissingCatchAll, kShadowedRule };

  Severity severity;
  Code code;
  std::size_t rule_index;  // 0-based; messages render it 1-based
  std::string rule_id;
  std::string message;

  bool operator==(const Diagnostic& o) const {
    return severity == o.severity && code == o.code &&
           rule_index == o.rule_index && rule_id == o.rule_id &&
           message == o.message;
  }
};

class RuleSet {
 public:
  // Computes the canonical text and its 64-bit content hash up front.
  RuleSet(std::string name, std::vector<Rule> rules);

  const std::string& name() const { return name_; }
  std::span<const Rule> rules() const { return rules_; }
  std::uint64_t source_hash() const { return source_hash_; }

  // Canonical text: one rule per line, canonical expression and number
  // formatting. Reparsing it yields a structurally identical rule set.
  const std::string& pretty_print() const { return canonical_text_; }

  bool structurally_equal(const RuleSet& other) const;

 private:
  std::string name_;
  std::vector<Rule> rules_;
  std::string canonical_text_;
  std::uint64_t source_hash_ = 0;
};

}  // namespace pondguard::dsl
