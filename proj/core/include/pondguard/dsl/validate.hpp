#pragma once

#include <vector>

#include "pondguard/dsl/ast.hpp"

namespace pondguard::dsl {

// Static checks on a parsed rule set:
//   ERROR MissingCatchAll  last rule's condition is not the literal `always`
//   WARN  ShadowedRule     a rule that can never fire under first-match
//                          evaluation, decided over the cell partition
// Diagnostics are ordered by rule index, then check. Pure: equal inputs give
// the identical list.
std::vector<Diagnostic> validate(const RuleSet& rs);

inline bool has_errors(const std::vector<Diagnostic>& diags) {
  for (const auto& d : diags) {
    if (d.severity == Diagnostic::Severity::kError) return true;
  }
  return false;
}

// First rule whose condition holds, evaluated at `v`. The index into
// rs.rules(), or rules().size() when nothing matches (no catch-all).
std::size_t first_match(const RuleSet& rs, const Valuation& v);

}  // namespace pondguard::dsl
