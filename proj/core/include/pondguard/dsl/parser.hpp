#pragma once

// Concrete syntax for rule programs (.rbr, UTF-8, LF):
//
//   program   := rule+
//   rule      := "rule" IDENT ":" "when" expr "do" action NEWLINE
//   expr      := term ("or" term)*
//   term      := factor ("and" factor)*
//   factor    := "not" factor | "(" expr ")" | IDENT | IDENT CMP NUMBER | "always"
//   CMP       := "<" | "<=" | ">" | ">="
//   action    := "stop" | "reverse" | "turn_away" | "hold_course"
//              | "set_thrust" "(" NUMBER "," NUMBER ")"
//
// "#" starts a comment running to end of line. IDENT is [a-z_][a-z0-9_]*,
// NUMBER a decimal literal with optional sign, fraction and exponent (the
// exponent keeps canonical shortest-form printing reparseable).

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "pondguard/dsl/ast.hpp"
#include "pondguard/util/errors.hpp"

namespace pondguard::dsl {

struct SourcePos {
  int line = 1;
  int column = 1;
};

class ParseError : public Error {
 public:
  enum class Kind : std::uint8_t {
    kSyntax,
    kUnknownField,
    kDuplicateRuleId,
    kTypeMismatch,  // boolean field compared, or numeric field used bare
  };

  ParseError(Kind kind, SourcePos pos, const std::string& message,
             std::vector<std::string> expected = {});

  Kind kind() const { return kind_; }
  SourcePos pos() const { return pos_; }
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  Kind kind_;
  SourcePos pos_;
  std::vector<std::string> expected_;
};

RuleSet parse(std::string_view text, std::string name = "main");

// Parses a rule file; the rule set is named after the file stem.
RuleSet parse_file(const std::filesystem::path& path);

}  // namespace pondguard::dsl
