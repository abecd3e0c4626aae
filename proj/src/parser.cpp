// Copyright 2025 The FACPL Workbench authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cctype>
#include <charconv>
#include <stdexcept>

#include "facpl/parser.hpp"

namespace facpl {

std::string ParseDiagnostic::to_string() const {
  return span.file + ":" + std::to_string(span.start_line) + ":" +
         std::to_string(span.start_col) + ": " +
         (severity == Severity::Error ? "error: " : "warning: ") + message;
}

namespace {

enum class Tok {
  LBrace,
  RBrace,
  LParen,
  RParen,
  LBrack,
  RBrack,
  Comma,
  Colon,
  Slash,
  Ident,
  String,
  Number,
  DateLit,
  End,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;  // identifier text or decoded string contents
  double number = 0;
  Date date;
  SourceSpan span;
};

struct Failure {
  SourceSpan span;
  std::string message;
};

bool ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' ||
         c == '-';
}
bool digit(char c) { return c >= '0' && c <= '9'; }

class Lexer {
 public:
  Lexer(std::string_view text, std::string_view file)
      : text_(text), file_(file) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      Token t = next();
      out.push_back(t);
      if (t.kind == Tok::End) break;
    }
    return out;
  }

 private:
  SourceSpan here() const {
    return {file_, line_, col_, line_, col_};
  }

  char peek(std::size_t k = 0) const {
    return pos_ + k < text_.size() ? text_[pos_ + k] : '\0';
  }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else if ((static_cast<unsigned char>(text_[pos_]) & 0xC0) != 0x80) {
      ++col_;
    }
    ++pos_;
  }

  void skip_space() {
    for (;;) {
      while (pos_ < text_.size() &&
             std::isspace(static_cast<unsigned char>(peek())))
        advance();
      if (peek() == '/' && peek(1) == '/') {
        while (pos_ < text_.size() && peek() != '\n') advance();
        continue;
      }
      break;
    }
  }

  [[noreturn]] void fail(SourceSpan span, std::string msg) const {
    throw Failure{std::move(span), std::move(msg)};
  }

  void finish(Token& t) const {
    t.span.end_line = line_;
    t.span.end_col = col_;
  }

  Token next() {
    Token t;
    t.span = here();
    if (pos_ >= text_.size()) {
      t.kind = Tok::End;
      return t;
    }
    char c = peek();
    auto single = [&](Tok k) {
      advance();
      t.kind = k;
      finish(t);
      return t;
    };
    switch (c) {
      case '{': return single(Tok::LBrace);
      case '}': return single(Tok::RBrace);
      case '(': return single(Tok::LParen);
      case ')': return single(Tok::RParen);
      case '[': return single(Tok::LBrack);
      case ']': return single(Tok::RBrack);
      case ',': return single(Tok::Comma);
      case ':': return single(Tok::Colon);
      case '/': return single(Tok::Slash);
      default: break;
    }
    if (c == '"') return lex_string(t);
    if (digit(c) || ((c == '-' || c == '+') && digit(peek(1))))
      return lex_number(t);
    if (ident_start(c)) {
      std::size_t start = pos_;
      while (pos_ < text_.size() && ident_char(peek())) advance();
      t.kind = Tok::Ident;
      t.text = std::string(text_.substr(start, pos_ - start));
      finish(t);
      return t;
    }
    SourceSpan s = here();
    advance();
    s.end_col = col_;
    fail(s, std::string("unexpected character '") + c + "'");
  }

  Token lex_string(Token& t) {
    advance();
    std::string out;
    for (;;) {
      if (pos_ >= text_.size()) fail(t.span, "unterminated string literal");
      char c = peek();
      if (c == '"') {
        advance();
        break;
      }
      if (c == '\\') {
        char n = peek(1);
        if (n != '"' && n != '\\') {
          SourceSpan s = here();
          s.end_col = col_ + 2;
          fail(s, "invalid escape sequence in string literal");
        }
        out += n;
        advance();
        advance();
        continue;
      }
      out += c;
      advance();
    }
    t.kind = Tok::String;
    t.text = std::move(out);
    finish(t);
    return t;
  }

  Token lex_number(Token& t) {
    std::size_t start = pos_;
    // Dates: YYYY-MM-DD[THH:MM:SS]
    if (pos_ + 10 <= text_.size() && digit(peek()) && digit(peek(1)) &&
        digit(peek(2)) && digit(peek(3)) && peek(4) == '-' &&
        digit(peek(5))) {
      std::size_t len = 10;
      if (pos_ + 19 <= text_.size() && peek(10) == 'T') len = 19;
      auto d = Date::parse(text_.substr(pos_, len));
      for (std::size_t i = 0; i < len; ++i) advance();
      if (!d) {
        finish(t);
        fail(t.span, "invalid date literal '" +
                         std::string(text_.substr(start, len)) + "'");
      }
      t.kind = Tok::DateLit;
      t.date = *d;
      finish(t);
      return t;
    }
    if (peek() == '-' || peek() == '+') advance();
    while (digit(peek())) advance();
    if (peek() == '.' && digit(peek(1))) {
      advance();
      while (digit(peek())) advance();
    }
    if ((peek() == 'e' || peek() == 'E') &&
        (digit(peek(1)) ||
         ((peek(1) == '-' || peek(1) == '+') && digit(peek(2))))) {
      advance();
      if (peek() == '-' || peek() == '+') advance();
      while (digit(peek())) advance();
    }
    std::string_view lit = text_.substr(start, pos_ - start);
    if (!lit.empty() && lit[0] == '+') lit.remove_prefix(1);
    double v = 0;
    auto res = std::from_chars(lit.data(), lit.data() + lit.size(), v);
    finish(t);
    if (res.ec != std::errc() || res.ptr != lit.data() + lit.size())
      fail(t.span, "invalid number literal '" + std::string(lit) + "'");
    if (ident_start(peek()))
      fail(here(), "unexpected character after number literal");
    t.kind = Tok::Number;
    t.number = v;
    return t;
  }

  std::string_view text_;
  std::string file_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

std::string_view tok_name(Tok k) {
  switch (k) {
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBrack: return "'['";
    case Tok::RBrack: return "']'";
    case Tok::Comma: return "','";
    case Tok::Colon: return "':'";
    case Tok::Slash: return "'/'";
    case Tok::Ident: return "identifier";
    case Tok::String: return "string literal";
    case Tok::Number: return "number literal";
    case Tok::DateLit: return "date literal";
    case Tok::End: return "end of input";
  }
  return "?";
}

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  PolicyDocument document() {
    PolicyDocument doc = is_pas_start() ? PolicyDocument(pas())
                                        : PolicyDocument(policy());
    expect_end();
    return doc;
  }

  Policy policy_only() {
    Policy p = policy();
    expect_end();
    return p;
  }

  Pas pas_only() {
    Pas p = pas();
    expect_end();
    return p;
  }

  Expr expr_only() {
    Expr e = expr();
    expect_end();
    return e;
  }

  SyntacticRequest request() {
    SyntacticRequest r;
    if (peek().kind == Tok::End) fail(peek().span, "empty request");
    while (peek().kind != Tok::End) {
      expect(Tok::LParen, "'(' to start a request attribute");
      AttributeName n = attribute_name();
      expect(Tok::Comma, "',' between attribute name and value");
      Value v = literal_value();
      expect(Tok::RParen, "')' to close a request attribute");
      r.push_back({std::move(n), std::move(v)});
    }
    return r;
  }

 private:
  const Token& peek(std::size_t k = 0) const {
    std::size_t i = std::min(pos_ + k, toks_.size() - 1);
    return toks_[i];
  }
  const Token& take() {
    const Token& t = toks_[pos_];
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
  }

  [[noreturn]] void fail(const SourceSpan& s, std::string msg) const {
    throw Failure{s, std::move(msg)};
  }

  [[noreturn]] void unexpected(std::string_view wanted) const {
    const Token& t = peek();
    std::string got(tok_name(t.kind));
    if (t.kind == Tok::Ident) got += " '" + t.text + "'";
    fail(t.span, "expected " + std::string(wanted) + ", found " + got);
  }

  const Token& expect(Tok k, std::string_view wanted) {
    if (peek().kind != k) unexpected(wanted);
    return take();
  }

  void expect_end() {
    if (peek().kind != Tok::End) unexpected("end of input");
  }

  bool at_ident(std::string_view word, std::size_t k = 0) const {
    return peek(k).kind == Tok::Ident && peek(k).text == word;
  }

  bool at_keyword(std::string_view word) const {
    return at_ident(word) && peek(1).kind == Tok::Colon;
  }

  void keyword(std::string_view word) {
    if (!at_keyword(word)) unexpected("'" + std::string(word) + ":'");
    take();
    take();
  }

  bool is_pas_start() const {
    return peek().kind == Tok::LBrace && at_ident("pep", 1) &&
           peek(2).kind == Tok::Colon;
  }

  Pas pas() {
    expect(Tok::LBrace, "'{'");
    keyword("pep");
    const Token& t = expect(Tok::Ident, "enforcement algorithm");
    Pas out;
    if (t.text == "base") {
      out.enf = EnfAlg::Base;
    } else if (t.text == "deny-biased") {
      out.enf = EnfAlg::DenyBiased;
    } else if (t.text == "permit-biased") {
      out.enf = EnfAlg::PermitBiased;
    } else {
      fail(t.span, "unknown enforcement algorithm '" + t.text + "'");
    }
    keyword("pdp");
    out.pdp = pdp();
    expect(Tok::RBrace, "'}' to close the authorisation system");
    return out;
  }

  Pdp pdp() {
    // `{ Alg policies: p+ }` is the combinator form; anything carrying a
    // target or obligations is a single policy set.
    if (peek().kind == Tok::LBrace && peek(1).kind == Tok::Ident &&
        peek(2).kind == Tok::Ident && peek(2).text == "policies" &&
        peek(3).kind == Tok::Colon) {
      std::size_t save = pos_;
      PolicySet s = policy_set();
      if (s.obl_permit.empty() && s.obl_deny.empty()) {
        return Pdp{Pdp::Combined{s.alg, s.strategy, std::move(s.policies)}};
      }
      pos_ = save;
    }
    return Pdp{policy()};
  }

  Policy policy() {
    if (peek().kind == Tok::LParen) return rule();
    if (peek().kind == Tok::LBrace) return policy_set();
    unexpected("a rule '(' or a policy set '{'");
  }

  Rule rule() {
    expect(Tok::LParen, "'('");
    Rule r;
    const Token& t = expect(Tok::Ident, "rule effect");
    if (t.text == "permit") {
      r.effect = Effect::Permit;
    } else if (t.text == "deny") {
      r.effect = Effect::Deny;
    } else {
      fail(t.span, "unknown rule effect '" + t.text + "'");
    }
    if (at_keyword("target")) {
      keyword("target");
      r.target = expr();
    }
    if (at_keyword("obl")) {
      keyword("obl");
      r.obligations = obligations();
    }
    expect(Tok::RParen, "')' to close the rule");
    return r;
  }

  void algorithm(PolicySet& s) {
    const Token& t = expect(Tok::Ident, "combining algorithm");
    auto us = t.text.rfind('_');
    std::string base = us == std::string::npos ? t.text : t.text.substr(0, us);
    std::string strat = us == std::string::npos ? "" : t.text.substr(us + 1);
    auto alg = alg_from_name(base);
    if (!alg) fail(t.span, "unknown combining algorithm '" + t.text + "'");
    if (strat == "all") {
      s.strategy = Strategy::All;
    } else if (strat == "greedy") {
      s.strategy = Strategy::Greedy;
    } else {
      fail(t.span, "combining algorithm '" + t.text +
                       "' needs a strategy suffix _all or _greedy");
    }
    s.alg = *alg;
    if (peek().kind == Tok::Ident && peek(1).kind != Tok::Colon) {
      const auto& n = peek().text;
      auto u = n.rfind('_');
      if (alg_from_name(u == std::string::npos ? n : n.substr(0, u)))
        fail(peek().span, "duplicate algorithm annotation '" + n + "'");
    }
  }

  PolicySet policy_set() {
    expect(Tok::LBrace, "'{'");
    PolicySet s;
    algorithm(s);
    if (at_keyword("target")) {
      keyword("target");
      s.target = expr();
    }
    keyword("policies");
    while (peek().kind == Tok::LParen || peek().kind == Tok::LBrace)
      s.policies.push_back(policy());
    if (s.policies.empty())
      fail(peek().span, "a policy set needs at least one policy");
    if (at_keyword("obl-p")) {
      keyword("obl-p");
      s.obl_permit = obligations();
    }
    if (at_keyword("obl-d")) {
      keyword("obl-d");
      s.obl_deny = obligations();
    }
    expect(Tok::RBrace, "'}' to close the policy set");
    return s;
  }

  std::vector<Obligation> obligations() {
    std::vector<Obligation> out;
    while (peek().kind == Tok::LBrack) {
      take();
      Obligation o;
      const Token& t = expect(Tok::Ident, "obligation type 'm' or 'o'");
      if (t.text == "m") {
        o.type = ObType::Mandatory;
      } else if (t.text == "o") {
        o.type = ObType::Optional;
      } else {
        fail(t.span, "obligation type must be 'm' or 'o', found '" + t.text +
                         "'");
      }
      o.action = expect(Tok::Ident, "action identifier").text;
      expect(Tok::LParen, "'(' after the action identifier");
      if (peek().kind != Tok::RParen) {
        o.args.push_back(expr());
        while (peek().kind == Tok::Comma) {
          take();
          o.args.push_back(expr());
        }
      }
      expect(Tok::RParen, "')' to close the argument list");
      expect(Tok::RBrack, "']' to close the obligation");
      out.push_back(std::move(o));
    }
    return out;
  }

  Expr expr() {
    Expr lhs = and_expr();
    while (at_ident("or") && peek(1).kind != Tok::Slash) {
      take();
      lhs = Expr::binary(ExprOp::Or, lhs, and_expr());
    }
    return lhs;
  }

  Expr and_expr() {
    Expr lhs = primary();
    while (at_ident("and") && peek(1).kind != Tok::Slash) {
      take();
      lhs = Expr::binary(ExprOp::And, lhs, primary());
    }
    return lhs;
  }

  AttributeName attribute_name() {
    const Token& cat = expect(Tok::Ident, "attribute name");
    expect(Tok::Slash, "'/' in attribute name");
    const Token& attr = expect(Tok::Ident, "attribute identifier after '/'");
    return {cat.text, attr.text};
  }

  Value literal_value() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::String: return Value(take().text);
      case Tok::Number: return Value(take().number);
      case Tok::DateLit: return Value(take().date);
      case Tok::Ident:
        if (t.text == "true" && peek(1).kind != Tok::Slash) {
          take();
          return Value(true);
        }
        if (t.text == "false" && peek(1).kind != Tok::Slash) {
          take();
          return Value(false);
        }
        break;
      default: break;
    }
    unexpected("literal value");
  }

  Expr primary() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::String:
      case Tok::Number:
      case Tok::DateLit: return Expr::literal(literal_value());
      case Tok::LParen: {
        take();
        Expr e = expr();
        expect(Tok::RParen, "')' to close the parenthesised expression");
        return e;
      }
      case Tok::Ident: break;
      default: unexpected("expression");
    }
    if (peek(1).kind == Tok::Slash) return Expr::name(attribute_name());
    if (t.text == "true" || t.text == "false")
      return Expr::literal(literal_value());
    if (peek(1).kind == Tok::LParen) {
      const Token& f = take();
      take();
      if (f.text == "not") {
        Expr a = expr();
        expect(Tok::RParen, "')' after the operand of not");
        return Expr::negation(a);
      }
      auto op = expr_op_from_name(f.text);
      if (!op) fail(f.span, "unknown function '" + f.text + "'");
      Expr a = expr();
      expect(Tok::Comma, "',' between operands of " + f.text);
      Expr b = expr();
      expect(Tok::RParen, "')' after the operands of " + f.text);
      return Expr::binary(*op, a, b);
    }
    unexpected("expression");
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

template <typename T, typename F>
ParseResult<T> run(std::string_view text, std::string_view file, F body) {
  ParseResult<T> out;
  try {
    Parser p(Lexer(text, file).run());
    out.value = body(p);
  } catch (const Failure& f) {
    out.diagnostics.push_back(
        {ParseDiagnostic::Severity::Error, f.span, f.message});
  }
  return out;
}

}  // namespace

ParseResult<PolicyDocument> parse_document(std::string_view text,
                                           std::string_view file) {
  return run<PolicyDocument>(text, file,
                             [](Parser& p) { return p.document(); });
}

ParseResult<Policy> parse_policy(std::string_view text,
                                 std::string_view file) {
  return run<Policy>(text, file, [](Parser& p) { return p.policy_only(); });
}

ParseResult<Pas> parse_pas(std::string_view text, std::string_view file) {
  return run<Pas>(text, file, [](Parser& p) { return p.pas_only(); });
}

ParseResult<Expr> parse_expr(std::string_view text, std::string_view file) {
  return run<Expr>(text, file, [](Parser& p) { return p.expr_only(); });
}

ParseResult<SyntacticRequest> parse_request(std::string_view text,
                                            std::string_view file) {
  return run<SyntacticRequest>(text, file,
                               [](Parser& p) { return p.request(); });
}

Pdp document_pdp(const PolicyDocument& doc) {
  if (const auto* pas = std::get_if<Pas>(&doc)) return pas->pdp;
  return Pdp{std::get<Policy>(doc)};
}

}  // namespace facpl
