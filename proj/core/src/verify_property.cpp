#include "pondguard/verify/property.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace pondguard::verify {

// Node construction goes through the static factories, so Expr values are
// immutable once handed out.
static std::shared_ptr<Expr> new_node() { return std::make_shared<Expr>(); }

ExprPtr Expr::action_is(Action::Kind kind) {
  auto e = new_node();
  e->kind_ = Kind::kActionIs;
  e->action_ = kind;
  return e;
}
ExprPtr Expr::contact() {
  auto e = new_node();
  e->kind_ = Kind::kContact;
  return e;
}
ExprPtr Expr::voted_trip() {
  auto e = new_node();
  e->kind_ = Kind::kVotedTrip;
  return e;
}
ExprPtr Expr::trip_latched() {
  auto e = new_node();
  e->kind_ = Kind::kTripLatched;
  return e;
}
ExprPtr Expr::wdt_greater(std::uint32_t n) {
  auto e = new_node();
  e->kind_ = Kind::kWdtGreater;
  e->wdt_bound_ = n;
  return e;
}
ExprPtr Expr::negate(ExprPtr child) {
  auto e = new_node();
  e->kind_ = Kind::kNot;
  e->lhs_ = std::move(child);
  return e;
}
ExprPtr Expr::conj(ExprPtr lhs, ExprPtr rhs) {
  auto e = new_node();
  e->kind_ = Kind::kAnd;
  e->lhs_ = std::move(lhs);
  e->rhs_ = std::move(rhs);
  return e;
}
ExprPtr Expr::disj(ExprPtr lhs, ExprPtr rhs) {
  auto e = new_node();
  e->kind_ = Kind::kOr;
  e->lhs_ = std::move(lhs);
  e->rhs_ = std::move(rhs);
  return e;
}
ExprPtr Expr::implies(ExprPtr lhs, ExprPtr rhs) {
  auto e = new_node();
  e->kind_ = Kind::kImplies;
  e->lhs_ = std::move(lhs);
  e->rhs_ = std::move(rhs);
  return e;
}
ExprPtr Expr::next(ExprPtr child) {
  auto e = new_node();
  e->kind_ = Kind::kNext;
  e->lhs_ = std::move(child);
  return e;
}

bool Expr::contains_next() const {
  if (kind_ == Kind::kNext) return true;
  if (lhs_ && lhs_->contains_next()) return true;
  if (rhs_ && rhs_->contains_next()) return true;
  return false;
}

std::string Expr::to_string() const {
  switch (kind_) {
    case Kind::kActionIs: {
      Action a;
      a.kind = action_;
      return "action=" + std::string(a.kind_name());
    }
    case Kind::kContact: return "contact";
    case Kind::kVotedTrip: return "voted_trip";
    case Kind::kTripLatched: return "trip_latched";
    case Kind::kWdtGreater: return "wdt>" + std::to_string(wdt_bound_);
    case Kind::kNot: return "!" + lhs_->to_string();
    case Kind::kAnd: return "(" + lhs_->to_string() + " & " + rhs_->to_string() + ")";
    case Kind::kOr: return "(" + lhs_->to_string() + " | " + rhs_->to_string() + ")";
    case Kind::kImplies:
      return "(" + lhs_->to_string() + " -> " + rhs_->to_string() + ")";
    case Kind::kNext: return "X " + lhs_->to_string();
  }
  return "?";
}

std::string Property::to_string() const {
  if (kind == Kind::kGlobally) {
    return name + " : G( " + body->to_string() + " )";
  }
  return name + " : G( " + trigger->to_string() + " -> F<=" +
         std::to_string(bound) + " " + response->to_string() + " )";
}

namespace {

// Line-local tokenizer and recursive-descent parser for the property grammar.
class LineParser {
 public:
  LineParser(std::string_view text, int line) : text_(text), line_(line) {}

  Property parse() {
    Property prop;
    prop.name = expect_ident("property name");
    expect(':');
    const std::string g = expect_ident("'G'");
    if (g != "G") fail("expected 'G', found '" + g + "'");
    expect('(');
    ExprPtr first = parse_expr();
    skip_ws();
    if (match_arrow_f()) {
      prop.kind = Property::Kind::kBoundedResponse;
      prop.trigger = std::move(first);
      expect('<');
      expect('=');
      prop.bound = parse_uint("response bound");
      if (prop.bound < 1) fail("response bound must be >= 1");
      prop.response = parse_expr();
      if (prop.trigger->contains_next() || prop.response->contains_next()) {
        fail("X is not allowed inside bounded-response properties");
      }
    } else {
      prop.kind = Property::Kind::kGlobally;
      prop.body = std::move(first);
      if (count_next(*prop.body) > 1) {
        fail("at most one X operator per property");
      }
    }
    expect(')');
    skip_ws();
    if (!at_end()) fail("trailing input after property");
    return prop;
  }

 private:
  [[noreturn]] void fail(const std::string& message) const {
    throw PropertyParseError(line_, message);
  }

  bool at_end() {
    skip_ws();
    return pos_ >= text_.size();
  }

  void skip_ws() {
    while (pos_ < text_.size() &&
           (text_[pos_] == ' ' || text_[pos_] == '\t')) {
      ++pos_;
    }
  }

  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  bool consume(char c) {
    if (peek() == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!consume(c)) {
      fail(std::string("expected '") + c + "'");
    }
  }

  // Matches "-> F" without committing to a plain implication.
  bool match_arrow_f() {
    skip_ws();
    const std::size_t save = pos_;
    if (pos_ + 1 < text_.size() && text_[pos_] == '-' &&
        text_[pos_ + 1] == '>') {
      pos_ += 2;
      skip_ws();
      if (pos_ < text_.size() && text_[pos_] == 'F') {
        ++pos_;
        return true;
      }
    }
    pos_ = save;
    return false;
  }

  std::string expect_ident(const char* what) {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
            text_[pos_] == '_')) {
      ++pos_;
    }
    if (start == pos_) fail(std::string("expected ") + what);
    return std::string(text_.substr(start, pos_ - start));
  }

  std::uint32_t parse_uint(const char* what) {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
    if (start == pos_) fail(std::string("expected ") + what);
    return static_cast<std::uint32_t>(
        std::stoul(std::string(text_.substr(start, pos_ - start))));
  }

  static int count_next(const Expr& e) {
    int n = e.kind() == Expr::Kind::kNext ? 1 : 0;
    if (e.lhs()) n += count_next(*e.lhs());
    if (e.rhs()) n += count_next(*e.rhs());
    return n;
  }

  // implies (right assoc, lowest) > or > and > unary.
  ExprPtr parse_expr() {
    ExprPtr lhs = parse_or();
    skip_ws();
    // Do not swallow "-> F": that belongs to the bounded-response form.
    const std::size_t save = pos_;
    if (pos_ + 1 < text_.size() && text_[pos_] == '-' &&
        text_[pos_ + 1] == '>') {
      pos_ += 2;
      skip_ws();
      if (pos_ < text_.size() && text_[pos_] == 'F') {
        pos_ = save;
        return lhs;
      }
      return Expr::implies(std::move(lhs), parse_expr());
    }
    return lhs;
  }

  ExprPtr parse_or() {
    ExprPtr lhs = parse_and();
    while (consume('|')) {
      lhs = Expr::disj(std::move(lhs), parse_and());
    }
    return lhs;
  }

  ExprPtr parse_and() {
    ExprPtr lhs = parse_unary();
    while (consume('&')) {
      lhs = Expr::conj(std::move(lhs), parse_unary());
    }
    return lhs;
  }

  ExprPtr parse_unary() {
    skip_ws();
    if (consume('!')) return Expr::negate(parse_unary());
    if (pos_ < text_.size() && text_[pos_] == 'X' &&
        (pos_ + 1 >= text_.size() ||
         !(std::isalnum(static_cast<unsigned char>(text_[pos_ + 1])) ||
           text_[pos_ + 1] == '_'))) {
      ++pos_;
      ExprPtr child = parse_unary();
      if (child->contains_next()) fail("X cannot be nested");
      return Expr::next(std::move(child));
    }
    if (consume('(')) {
      ExprPtr inner = parse_expr();
      expect(')');
      return inner;
    }
    return parse_atom();
  }

  ExprPtr parse_atom() {
    const std::string ident = expect_ident("an atom");
    if (ident == "contact") return Expr::contact();
    if (ident == "voted_trip") return Expr::voted_trip();
    if (ident == "trip_latched") return Expr::trip_latched();
    if (ident == "action") {
      expect('=');
      const std::string name = expect_ident("action name");
      const auto kind = action_kind_from_name(name);
      if (!kind || *kind == Action::Kind::kSetThrust) {
        fail("unknown action '" + name + "' in action= atom");
      }
      return Expr::action_is(*kind);
    }
    if (ident == "wdt") {
      expect('>');
      return Expr::wdt_greater(parse_uint("watchdog bound"));
    }
    fail("unknown atom '" + ident + "'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_;
};

}  // namespace

std::vector<Property> parse_properties(std::string_view text) {
  std::vector<Property> out;
  int line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    ++line_no;
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;

    // Strip comments and skip blank lines.
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    bool blank = true;
    for (char c : line) {
      if (c != ' ' && c != '\t' && c != '\r') {
        blank = false;
        break;
      }
    }
    if (blank) {
      if (end == text.size()) break;
      continue;
    }
    out.push_back(LineParser(line, line_no).parse());
    if (end == text.size()) break;
  }
  return out;
}

std::vector<Property> parse_properties_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open property file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_properties(buffer.str());
}

}  // namespace pondguard::verify
