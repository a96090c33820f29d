#include "pondguard/dsl/decision_tree.hpp"

#include <string>

#include "pondguard/dsl/partition.hpp"
#include "pondguard/dsl/validate.hpp"

namespace pondguard::dsl {

ValidationFailed::ValidationFailed(std::vector<Diagnostic> diags)
    : Error("rule set failed validation"), diags_(std::move(diags)) {}

namespace {

struct Builder {
  const RuleSet& rs;
  const CellSpace& cells;
  std::vector<DecisionTree::Node>& nodes;
  std::vector<Action>& leaves;

  // Recursively splits the per-dimension coordinate ranges [lo, hi] until a
  // single cell remains, then labels the leaf with the first-match action at
  // that cell's representative.
  std::int32_t build(std::vector<std::size_t> lo, std::vector<std::size_t> hi) {
    for (std::size_t d = 0; d < lo.size(); ++d) {
      if (lo[d] == hi[d]) continue;
      const CellDim& dim = cells.dims()[d];
      DecisionTree::Node node;
      node.field = dim.field;
      if (dim.boolean) {
        node.boolean_test = true;
        node.threshold = 0.0;
        auto lo_false = lo, hi_false = hi;
        hi_false[d] = 0;
        auto lo_true = lo, hi_true = hi;
        lo_true[d] = 1;
        const std::int32_t idx = alloc(node);
        const std::int32_t low = build(std::move(lo_false), std::move(hi_false));
        const std::int32_t high = build(std::move(lo_true), std::move(hi_true));
        nodes[static_cast<std::size_t>(idx)].low = low;
        nodes[static_cast<std::size_t>(idx)].high = high;
        return idx;
      }
      // Numeric: interval coordinates <= m sit strictly below thresholds[m].
      const std::size_t mid = (lo[d] + hi[d] - 1) / 2;
      node.boolean_test = false;
      node.threshold = dim.thresholds[mid];
      auto lo_below = lo, hi_below = hi;
      hi_below[d] = mid;
      auto lo_above = lo, hi_above = hi;
      lo_above[d] = mid + 1;
      const std::int32_t idx = alloc(node);
      const std::int32_t low = build(std::move(lo_below), std::move(hi_below));
      const std::int32_t high = build(std::move(lo_above), std::move(hi_above));
      nodes[static_cast<std::size_t>(idx)].low = low;
      nodes[static_cast<std::size_t>(idx)].high = high;
      return idx;
    }
    // All coordinates pinned: one cell.
    const std::size_t cell = cells.cell_of(lo);
    const std::size_t winner = first_match(rs, cells.representative(cell));
    leaves.push_back(rs.rules()[winner].action);
    return -static_cast<std::int32_t>(leaves.size());
  }

  std::int32_t alloc(const DecisionTree::Node& node) {
    nodes.push_back(node);
    return static_cast<std::int32_t>(nodes.size() - 1);
  }
};

}  // namespace

DecisionTree DecisionTree::compile(const RuleSet& rs) {
  auto diags = validate(rs);
  if (has_errors(diags)) {
    throw ValidationFailed(std::move(diags));
  }

  const CellSpace cells = CellSpace::from_ruleset(rs);
  DecisionTree tree;
  std::vector<std::size_t> lo(cells.dims().size(), 0);
  std::vector<std::size_t> hi(cells.dims().size());
  for (std::size_t d = 0; d < cells.dims().size(); ++d) {
    hi[d] = cells.dims()[d].size() - 1;
  }
  Builder builder{rs, cells, tree.nodes_, tree.leaves_};
  tree.root_ = builder.build(std::move(lo), std::move(hi));
  return tree;
}

const Action& DecisionTree::evaluate(const Valuation& v) const {
  std::int32_t cur = root_;
  while (cur >= 0) {
    const Node& n = nodes_[static_cast<std::size_t>(cur)];
    const bool go_high =
        n.boolean_test ? v.flag(n.field) : !(v.num(n.field) < n.threshold);
    cur = go_high ? n.high : n.low;
  }
  return leaves_[static_cast<std::size_t>(-cur - 1)];
}

}  // namespace pondguard::dsl
