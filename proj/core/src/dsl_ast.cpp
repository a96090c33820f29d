#include "pondguard/dsl/ast.hpp"

#include <algorithm>
#include <charconv>

#include "pondguard/util/hash.hpp"

namespace pondguard::dsl {

namespace {

std::string format_number(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, end);
}

// Precedence used for minimal-parenthesis printing.
int precedence(Cond::Kind k) {
  switch (k) {
    case Cond::Kind::kOr: return 1;
    case Cond::Kind::kAnd: return 2;
    case Cond::Kind::kNot: return 3;
    default: return 4;
  }
}

void print_cond(const Cond& c, int parent_prec, std::string& out) {
  const int prec = precedence(c.kind());
  const bool parens = prec < parent_prec;
  if (parens) out.push_back('(');
  switch (c.kind()) {
    case Cond::Kind::kAlways:
      out += "always";
      break;
    case Cond::Kind::kAtom:
      out += field_name(c.field());
      break;
    case Cond::Kind::kCompare:
      out += field_name(c.field());
      out.push_back(' ');
      out += cmp_symbol(c.op());
      out.push_back(' ');
      out += format_number(c.literal());
      break;
    case Cond::Kind::kNot:
      out += "not ";
      print_cond(*c.lhs(), precedence(Cond::Kind::kNot), out);
      break;
    case Cond::Kind::kAnd:
      print_cond(*c.lhs(), prec, out);
      out += " and ";
      print_cond(*c.rhs(), prec + 1, out);
      break;
    case Cond::Kind::kOr:
      print_cond(*c.lhs(), prec, out);
      out += " or ";
      print_cond(*c.rhs(), prec + 1, out);
      break;
  }
  if (parens) out.push_back(')');
}

}  // namespace

std::string_view cmp_symbol(CmpOp op) {
  switch (op) {
    case CmpOp::kLt: return "<";
    case CmpOp::kLe: return "<=";
    case CmpOp::kGt: return ">";
    case CmpOp::kGe: return ">=";
  }
  return "<";
}

bool cmp_eval(double lhs, CmpOp op, double rhs) {
  switch (op) {
    case CmpOp::kLt: return lhs < rhs;
    case CmpOp::kLe: return lhs <= rhs;
    case CmpOp::kGt: return lhs > rhs;
    case CmpOp::kGe: return lhs >= rhs;
  }
  return false;
}

CondPtr Cond::always() {
  auto c = std::shared_ptr<Cond>(new Cond());
  c->kind_ = Kind::kAlways;
  return c;
}

CondPtr Cond::atom(Field field) {
  auto c = std::shared_ptr<Cond>(new Cond());
  c->kind_ = Kind::kAtom;
  c->field_ = field;
  return c;
}

CondPtr Cond::compare(Field field, CmpOp op, double literal) {
  auto c = std::shared_ptr<Cond>(new Cond());
  c->kind_ = Kind::kCompare;
  c->field_ = field;
  c->op_ = op;
  c->literal_ = literal;
  return c;
}

CondPtr Cond::negate(CondPtr child) {
  auto c = std::shared_ptr<Cond>(new Cond());
  c->kind_ = Kind::kNot;
  c->lhs_ = std::move(child);
  return c;
}

CondPtr Cond::conj(CondPtr lhs, CondPtr rhs) {
  auto c = std::shared_ptr<Cond>(new Cond());
  c->kind_ = Kind::kAnd;
  c->lhs_ = std::move(lhs);
  c->rhs_ = std::move(rhs);
  return c;
}

CondPtr Cond::disj(CondPtr lhs, CondPtr rhs) {
  auto c = std::shared_ptr<Cond>(new Cond());
  c->kind_ = Kind::kOr;
  c->lhs_ = std::move(lhs);
  c->rhs_ = std::move(rhs);
  return c;
}

bool Cond::eval(const Valuation& v) const {
  switch (kind_) {
    case Kind::kAlways: return true;
    case Kind::kAtom: return v.flag(field_);
    case Kind::kCompare: return cmp_eval(v.num(field_), op_, literal_);
    case Kind::kNot: return !lhs_->eval(v);
    case Kind::kAnd: return lhs_->eval(v) && rhs_->eval(v);
    case Kind::kOr: return lhs_->eval(v) || rhs_->eval(v);
  }
  return false;
}

bool Cond::structurally_equal(const Cond& other) const {
  if (kind_ != other.kind_) return false;
  switch (kind_) {
    case Kind::kAlways: return true;
    case Kind::kAtom: return field_ == other.field_;
    case Kind::kCompare:
      return field_ == other.field_ && op_ == other.op_ &&
             literal_ == other.literal_;
    case Kind::kNot: return lhs_->structurally_equal(*other.lhs_);
    case Kind::kAnd:
    case Kind::kOr:
      return lhs_->structurally_equal(*other.lhs_) &&
             rhs_->structurally_equal(*other.rhs_);
  }
  return false;
}

void Cond::collect_refs(
    std::vector<bool>& fields_seen,
    std::array<std::vector<double>, kFieldCount>& thresholds) const {
  switch (kind_) {
    case Kind::kAlways:
      break;
    case Kind::kAtom:
      fields_seen[static_cast<std::size_t>(field_)] = true;
      break;
    case Kind::kCompare:
      fields_seen[static_cast<std::size_t>(field_)] = true;
      thresholds[static_cast<std::size_t>(field_)].push_back(literal_);
      break;
    case Kind::kNot:
      lhs_->collect_refs(fields_seen, thresholds);
      break;
    case Kind::kAnd:
    case Kind::kOr:
      lhs_->collect_refs(fields_seen, thresholds);
      rhs_->collect_refs(fields_seen, thresholds);
      break;
  }
}

std::string Cond::to_string() const {
  std::string out;
  print_cond(*this, 0, out);
  return out;
}

bool Rule::structurally_equal(const Rule& other) const {
  return id == other.id && action == other.action &&
         condition->structurally_equal(*other.condition);
}

RuleSet::RuleSet(std::string name, std::vector<Rule> rules)
    : name_(std::move(name)), rules_(std::move(rules)) {
  std::string text;
  for (const Rule& r : rules_) {
    text += "rule ";
    text += r.id;
    text += ": when ";
    text += r.condition->to_string();
    text += " do ";
    text += r.action.to_string();
    text.push_back('\n');
  }
  canonical_text_ = std::move(text);
  source_hash_ = util::fnv1a64(canonical_text_);
}

bool RuleSet::structurally_equal(const RuleSet& other) const {
  if (rules_.size() != other.rules_.size()) return false;
  for (std::size_t i = 0; i < rules_.size(); ++i) {
    if (!rules_[i].structurally_equal(other.rules_[i])) return false;
  }
  return true;
}

}  // namespace pondguard::dsl
