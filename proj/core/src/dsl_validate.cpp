#include "pondguard/dsl/validate.hpp"

#include <algorithm>

#include "pondguard/dsl/partition.hpp"

namespace pondguard::dsl {

std::size_t first_match(const RuleSet& rs, const Valuation& v) {
  const auto rules = rs.rules();
  for (std::size_t i = 0; i < rules.size(); ++i) {
    if (rules[i].condition->eval(v)) return i;
  }
  return rules.size();
}

std::vector<Diagnostic> validate(const RuleSet& rs) {
  std::vector<Diagnostic> diags;
  const auto rules = rs.rules();

  // Which rules ever win under first-match, over the whole cell partition.
  const CellSpace cells = CellSpace::from_ruleset(rs);
  std::vector<bool> fires(rules.size(), false);
  for (std::size_t cell = 0; cell < cells.cell_count(); ++cell) {
    const std::size_t winner = first_match(rs, cells.representative(cell));
    if (winner < rules.size()) fires[winner] = true;
  }

  for (std::size_t i = 0; i < rules.size(); ++i) {
    if (!fires[i]) {
      diags.push_back(Diagnostic{
          Diagnostic::Severity::kWarn, Diagnostic::Code::kShadowedRule, i,
          rules[i].id,
          "rule '" + rules[i].id + "' (rule " + std::to_string(i + 1) +
              ") can never fire: its condition region is covered by earlier "
              "rules"});
    }
  }

  if (rules.empty() || rules.back().condition->kind() != Cond::Kind::kAlways) {
    const std::size_t idx = rules.empty() ? 0 : rules.size() - 1;
    const std::string id = rules.empty() ? std::string() : rules.back().id;
    diags.push_back(Diagnostic{
        Diagnostic::Severity::kError, Diagnostic::Code::kMissingCatchAll, idx,
        id, "final rule's condition must be the literal 'always'"});
  }

  // Order: rule index first, then error-before-warning within a rule.
  std::stable_sort(diags.begin(), diags.end(),
                   [](const Diagnostic& a, const Diagnostic& b) {
                     if (a.rule_index != b.rule_index) {
                       return a.rule_index < b.rule_index;
                     }
                     return static_cast<int>(a.severity) <
                            static_cast<int>(b.severity);
                   });
  return diags;
}

}  // namespace pondguard::dsl
