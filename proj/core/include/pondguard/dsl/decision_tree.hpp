#pragma once

// Compiles a rule set into an equivalent decision tree. Internal nodes test
// one boolean field or one (field < threshold) split; leaves carry the action
// the first matching rule would produce. Every root-to-leaf path tests each
// (field, threshold) pair at most once and the tree is total over the percept
// space. Used as the equivalence oracle for first-match evaluation.

#include <cstdint>
#include <vector>

#include "pondguard/dsl/ast.hpp"
#include "pondguard/util/errors.hpp"

namespace pondguard::dsl {

// Raised when compiling a rule set that still has ERROR diagnostics.
class ValidationFailed : public Error {
 public:
  explicit ValidationFailed(std::vector<Diagnostic> diags);
  const std::vector<Diagnostic>& diagnostics() const { return diags_; }

 private:
  std::vector<Diagnostic> diags_;
};

class DecisionTree {
 public:
  struct Node {
    Field field;
    bool boolean_test;   // true: branch on flag; false: branch on num < threshold
    double threshold;    // numeric tests only
    std::int32_t low;    // false / below branch
    std::int32_t high;   // true / at-or-above branch
  };

  static DecisionTree compile(const RuleSet& rs);

  const Action& evaluate(const Valuation& v) const;

  std::size_t node_count() const { return nodes_.size(); }
  std::size_t leaf_count() const { return leaves_.size(); }

 private:
  // Child links: values >= 0 index nodes_, negative values encode leaves
  // as -(leaf_index + 1).
  std::vector<Node> nodes_;
  std::vector<Action> leaves_;
  std::int32_t root_ = 0;
};

}  // namespace pondguard::dsl
