#pragma once

// Finite partition of the percept space induced by a rule program. For each
// numeric field the literal thresholds t1 < ... < tk split the line into
// (-inf, t1), [t1, t2), ..., [tk, +inf); boolean fields contribute
// {false, true}. The cross product is an enumerable cell space with one
// canonical representative per cell:
//   (-inf, t)  -> t - 1
//   [a, b)     -> (a + b) / 2
//   [t, +inf)  -> t + 1
// Representatives are what the equivalence and shadowing oracles evaluate.

#include <cstdint>
#include <utility>
#include <vector>

#include "pondguard/dsl/ast.hpp"

namespace pondguard::dsl {

struct CellDim {
  Field field;
  bool boolean = false;
  std::vector<double> thresholds;  // sorted, unique; empty for boolean dims

  std::size_t size() const {
    return boolean ? 2 : thresholds.size() + 1;
  }
};

class CellSpace {
 public:
  CellSpace() = default;
  explicit CellSpace(std::vector<CellDim> dims);

  // Dimensions for every field referenced by the rule set, in Field order.
  static CellSpace from_ruleset(const RuleSet& rs);

  const std::vector<CellDim>& dims() const { return dims_; }
  std::size_t cell_count() const { return cell_count_; }

  // Mixed-radix decode of a cell index into per-dimension coordinates.
  std::vector<std::size_t> coords(std::size_t cell) const;
  std::size_t cell_of(const std::vector<std::size_t>& coords) const;

  // The cell's canonical representative point.
  Valuation representative(std::size_t cell) const;

  // Interval bounds of a numeric coordinate; +/-infinity at the ends.
  std::pair<double, double> interval(std::size_t dim, std::size_t coord) const;

  // Representative value of one numeric coordinate.
  double numeric_rep(std::size_t dim, std::size_t coord) const;

 private:
  std::vector<CellDim> dims_;
  std::size_t cell_count_ = 1;
};

}  // namespace pondguard::dsl
