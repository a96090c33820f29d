#include "pondguard/dsl/partition.hpp"

#include <algorithm>
#include <cassert>
#include <limits>

namespace pondguard::dsl {

CellSpace::CellSpace(std::vector<CellDim> dims) : dims_(std::move(dims)) {
  for (auto& dim : dims_) {
    std::sort(dim.thresholds.begin(), dim.thresholds.end());
    dim.thresholds.erase(
        std::unique(dim.thresholds.begin(), dim.thresholds.end()),
        dim.thresholds.end());
  }
  cell_count_ = 1;
  for (const auto& dim : dims_) cell_count_ *= dim.size();
}

CellSpace CellSpace::from_ruleset(const RuleSet& rs) {
  std::vector<bool> seen(kFieldCount, false);
  std::array<std::vector<double>, kFieldCount> thresholds;
  for (const Rule& r : rs.rules()) {
    r.condition->collect_refs(seen, thresholds);
  }
  std::vector<CellDim> dims;
  for (std::size_t i = 0; i < kFieldCount; ++i) {
    if (!seen[i]) continue;
    const Field f = static_cast<Field>(i);
    CellDim dim;
    dim.field = f;
    dim.boolean = !field_is_numeric(f);
    dim.thresholds = std::move(thresholds[i]);
    dims.push_back(std::move(dim));
  }
  return CellSpace(std::move(dims));
}

std::vector<std::size_t> CellSpace::coords(std::size_t cell) const {
  assert(cell < cell_count_);
  std::vector<std::size_t> out(dims_.size());
  for (std::size_t i = 0; i < dims_.size(); ++i) {
    const std::size_t radix = dims_[i].size();
    out[i] = cell % radix;
    cell /= radix;
  }
  return out;
}

std::size_t CellSpace::cell_of(const std::vector<std::size_t>& coords) const {
  assert(coords.size() == dims_.size());
  std::size_t cell = 0;
  for (std::size_t i = dims_.size(); i-- > 0;) {
    cell = cell * dims_[i].size() + coords[i];
  }
  return cell;
}

std::pair<double, double> CellSpace::interval(std::size_t dim,
                                              std::size_t coord) const {
  const auto& t = dims_[dim].thresholds;
  const double lo = coord == 0 ? -std::numeric_limits<double>::infinity()
                               : t[coord - 1];
  const double hi = coord == t.size()
                        ? std::numeric_limits<double>::infinity()
                        : t[coord];
  return {lo, hi};
}

double CellSpace::numeric_rep(std::size_t dim, std::size_t coord) const {
  const auto& t = dims_[dim].thresholds;
  if (t.empty()) return 0.0;          // unconstrained field, single cell
  if (coord == 0) return t.front() - 1.0;
  if (coord == t.size()) return t.back() + 1.0;
  return (t[coord - 1] + t[coord]) * 0.5;
}

Valuation CellSpace::representative(std::size_t cell) const {
  const auto c = coords(cell);
  Valuation v;
  for (std::size_t i = 0; i < dims_.size(); ++i) {
    if (dims_[i].boolean) {
      v.set_flag(dims_[i].field, c[i] == 1);
    } else {
      v.set_num(dims_[i].field, numeric_rep(i, c[i]));
    }
  }
  return v;
}

}  // namespace pondguard::dsl
