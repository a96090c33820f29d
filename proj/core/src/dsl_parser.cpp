#include "pondguard/dsl/parser.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_set>

namespace pondguard::dsl {

namespace {

enum class Tok : std::uint8_t {
  kRule, kWhen, kDo, kAnd, kOr, kNot, kAlways,
  kIdent, kNumber,
  kColon, kComma, kLParen, kRParen,
  kLt, kLe, kGt, kGe,
  kNewline, kEnd,
};

std::string_view tok_name(Tok t) {
  switch (t) {
    case Tok::kRule: return "'rule'";
    case Tok::kWhen: return "'when'";
    case Tok::kDo: return "'do'";
    case Tok::kAnd: return "'and'";
    case Tok::kOr: return "'or'";
    case Tok::kNot: return "'not'";
    case Tok::kAlways: return "'always'";
    case Tok::kIdent: return "identifier";
    case Tok::kNumber: return "number";
    case Tok::kColon: return "':'";
    case Tok::kComma: return "','";
    case Tok::kLParen: return "'('";
    case Tok::kRParen: return "')'";
    case Tok::kLt: return "'<'";
    case Tok::kLe: return "'<='";
    case Tok::kGt: return "'>'";
    case Tok::kGe: return "'>='";
    case Tok::kNewline: return "end of line";
    case Tok::kEnd: return "end of input";
  }
  return "?";
}

struct Token {
  Tok kind;
  std::string_view text;
  double number = 0.0;
  SourcePos pos;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Token next() {
    skip_blanks();
    const SourcePos pos{line_, col_};
    if (at_end()) return {Tok::kEnd, {}, 0.0, pos};

    const char c = peek();
    if (c == '\n') {
      advance();
      return {Tok::kNewline, "\n", 0.0, pos};
    }
    if (c == ':') { advance(); return {Tok::kColon, ":", 0.0, pos}; }
    if (c == ',') { advance(); return {Tok::kComma, ",", 0.0, pos}; }
    if (c == '(') { advance(); return {Tok::kLParen, "(", 0.0, pos}; }
    if (c == ')') { advance(); return {Tok::kRParen, ")", 0.0, pos}; }
    if (c == '<' || c == '>') {
      advance();
      const bool eq = !at_end() && peek() == '=';
      if (eq) advance();
      if (c == '<') return {eq ? Tok::kLe : Tok::kLt, eq ? "<=" : "<", 0.0, pos};
      return {eq ? Tok::kGe : Tok::kGt, eq ? ">=" : ">", 0.0, pos};
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '.') {
      return lex_number(pos);
    }
    if (std::islower(static_cast<unsigned char>(c)) || c == '_') {
      return lex_ident(pos);
    }
    throw ParseError(ParseError::Kind::kSyntax, pos,
                     std::string("unexpected character '") + c + "'");
  }

 private:
  bool at_end() const { return offset_ >= src_.size(); }
  char peek() const { return src_[offset_]; }

  void advance() {
    if (src_[offset_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++offset_;
  }

  void skip_blanks() {
    while (!at_end()) {
      const char c = peek();
      if (c == ' ' || c == '\t' || c == '\r') {
        advance();
      } else if (c == '#') {
        while (!at_end() && peek() != '\n') advance();
      } else {
        break;
      }
    }
  }

  Token lex_number(SourcePos pos) {
    const std::size_t start = offset_;
    if (peek() == '-') advance();
    bool digits = false;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) {
      advance();
      digits = true;
    }
    if (!at_end() && peek() == '.') {
      advance();
      while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) {
        advance();
        digits = true;
      }
    }
    // Exponent suffix, so every canonical shortest-form literal reparses.
    if (digits && !at_end() && (peek() == 'e' || peek() == 'E')) {
      advance();
      if (!at_end() && (peek() == '+' || peek() == '-')) advance();
      bool exp_digits = false;
      while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) {
        advance();
        exp_digits = true;
      }
      if (!exp_digits) digits = false;
    }
    const std::string_view text = src_.substr(start, offset_ - start);
    double value = 0.0;
    const auto [ptr, ec] =
        std::from_chars(text.data(), text.data() + text.size(), value);
    if (!digits || ec != std::errc{} || ptr != text.data() + text.size()) {
      throw ParseError(ParseError::Kind::kSyntax, pos,
                       "malformed number '" + std::string(text) + "'");
    }
    return {Tok::kNumber, text, value, pos};
  }

  Token lex_ident(SourcePos pos) {
    const std::size_t start = offset_;
    while (!at_end()) {
      const char c = peek();
      if (std::islower(static_cast<unsigned char>(c)) ||
          std::isdigit(static_cast<unsigned char>(c)) || c == '_') {
        advance();
      } else {
        break;
      }
    }
    const std::string_view text = src_.substr(start, offset_ - start);
    if (text == "rule") return {Tok::kRule, text, 0.0, pos};
    if (text == "when") return {Tok::kWhen, text, 0.0, pos};
    if (text == "do") return {Tok::kDo, text, 0.0, pos};
    if (text == "and") return {Tok::kAnd, text, 0.0, pos};
    if (text == "or") return {Tok::kOr, text, 0.0, pos};
    if (text == "not") return {Tok::kNot, text, 0.0, pos};
    if (text == "always") return {Tok::kAlways, text, 0.0, pos};
    return {Tok::kIdent, text, 0.0, pos};
  }

  std::string_view src_;
  std::size_t offset_ = 0;
  int line_ = 1;
  int col_ = 1;
};

class Parser {
 public:
  explicit Parser(std::string_view src) : lexer_(src) { shift(); }

  std::vector<Rule> parse_program() {
    std::vector<Rule> rules;
    std::unordered_set<std::string> seen_ids;
    skip_newlines();
    while (cur_.kind != Tok::kEnd) {
      Rule r = parse_rule();
      if (!seen_ids.insert(r.id).second) {
        throw ParseError(ParseError::Kind::kDuplicateRuleId, rule_id_pos_,
                         "duplicate rule id '" + r.id + "'");
      }
      rules.push_back(std::move(r));
      skip_newlines();
    }
    if (rules.empty()) {
      throw ParseError(ParseError::Kind::kSyntax, cur_.pos,
                       "empty program, at least one rule required",
                       {std::string(tok_name(Tok::kRule))});
    }
    return rules;
  }

 private:
  void shift() { cur_ = lexer_.next(); }

  void skip_newlines() {
    while (cur_.kind == Tok::kNewline) shift();
  }

  Token expect(Tok kind) {
    if (cur_.kind != kind) {
      throw ParseError(ParseError::Kind::kSyntax, cur_.pos,
                       "expected " + std::string(tok_name(kind)) + ", found " +
                           std::string(tok_name(cur_.kind)),
                       {std::string(tok_name(kind))});
    }
    Token t = cur_;
    shift();
    return t;
  }

  Rule parse_rule() {
    expect(Tok::kRule);
    rule_id_pos_ = cur_.pos;
    const Token id = expect(Tok::kIdent);
    expect(Tok::kColon);
    expect(Tok::kWhen);
    CondPtr cond = parse_expr();
    expect(Tok::kDo);
    Action action = parse_action();
    if (cur_.kind != Tok::kNewline && cur_.kind != Tok::kEnd) {
      throw ParseError(ParseError::Kind::kSyntax, cur_.pos,
                       "expected end of line after action, found " +
                           std::string(tok_name(cur_.kind)),
                       {std::string(tok_name(Tok::kNewline))});
    }
    if (cur_.kind == Tok::kNewline) shift();
    return Rule{std::string(id.text), std::move(cond), action};
  }

  CondPtr parse_expr() {
    CondPtr lhs = parse_term();
    while (cur_.kind == Tok::kOr) {
      shift();
      lhs = Cond::disj(std::move(lhs), parse_term());
    }
    return lhs;
  }

  CondPtr parse_term() {
    CondPtr lhs = parse_factor();
    while (cur_.kind == Tok::kAnd) {
      shift();
      lhs = Cond::conj(std::move(lhs), parse_factor());
    }
    return lhs;
  }

  CondPtr parse_factor() {
    switch (cur_.kind) {
      case Tok::kNot: {
        shift();
        return Cond::negate(parse_factor());
      }
      case Tok::kLParen: {
        shift();
        CondPtr inner = parse_expr();
        expect(Tok::kRParen);
        return inner;
      }
      case Tok::kAlways: {
        shift();
        return Cond::always();
      }
      case Tok::kIdent: {
        const Token ident = cur_;
        shift();
        const auto field = field_from_name(ident.text);
        if (!field) {
          throw ParseError(ParseError::Kind::kUnknownField, ident.pos,
                           "unknown percept field '" + std::string(ident.text) +
                               "'");
        }
        if (cur_.kind == Tok::kLt || cur_.kind == Tok::kLe ||
            cur_.kind == Tok::kGt || cur_.kind == Tok::kGe) {
          const Tok op_tok = cur_.kind;
          const SourcePos op_pos = cur_.pos;
          shift();
          const Token num = expect(Tok::kNumber);
          if (!field_is_numeric(*field)) {
            throw ParseError(ParseError::Kind::kTypeMismatch, op_pos,
                             "boolean field '" + std::string(ident.text) +
                                 "' cannot be compared to a number");
          }
          if (!std::isfinite(num.number)) {
            throw ParseError(ParseError::Kind::kSyntax, num.pos,
                             "comparison literal must be finite");
          }
          CmpOp op = CmpOp::kLt;
          if (op_tok == Tok::kLe) op = CmpOp::kLe;
          if (op_tok == Tok::kGt) op = CmpOp::kGt;
          if (op_tok == Tok::kGe) op = CmpOp::kGe;
          return Cond::compare(*field, op, num.number);
        }
        if (field_is_numeric(*field)) {
          throw ParseError(ParseError::Kind::kTypeMismatch, ident.pos,
                           "numeric field '" + std::string(ident.text) +
                               "' needs a comparison");
        }
        return Cond::atom(*field);
      }
      default:
        throw ParseError(
            ParseError::Kind::kSyntax, cur_.pos,
            "expected a condition, found " + std::string(tok_name(cur_.kind)),
            {"'not'", "'('", "'always'", "identifier"});
    }
  }

  Action parse_action() {
    const Token name = expect(Tok::kIdent);
    const auto kind = action_kind_from_name(name.text);
    if (!kind) {
      throw ParseError(ParseError::Kind::kSyntax, name.pos,
                       "unknown action '" + std::string(name.text) + "'",
                       {"'stop'", "'reverse'", "'turn_away'", "'hold_course'",
                        "'set_thrust'"});
    }
    if (*kind != Action::Kind::kSetThrust) {
      Action a;
      a.kind = *kind;
      return a;
    }
    expect(Tok::kLParen);
    const Token left = expect(Tok::kNumber);
    expect(Tok::kComma);
    const Token right = expect(Tok::kNumber);
    expect(Tok::kRParen);
    return Action::set_thrust(left.number, right.number);
  }

  Lexer lexer_;
  Token cur_{Tok::kEnd, {}, 0.0, {}};
  SourcePos rule_id_pos_{};
};

}  // namespace

ParseError::ParseError(Kind kind, SourcePos pos, const std::string& message,
                       std::vector<std::string> expected)
    : Error("line " + std::to_string(pos.line) + ":" +
            std::to_string(pos.column) + ": " + message),
      kind_(kind),
      pos_(pos),
      expected_(std::move(expected)) {}

RuleSet parse(std::string_view text, std::string name) {
  Parser parser(text);
  return RuleSet(std::move(name), parser.parse_program());
}

RuleSet parse_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigError("cannot open rule file: " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str(), path.stem().string());
}

}  // namespace pondguard::dsl
