#pragma once

#include <charconv>
#include <string>
#include <string_view>
#include <vector>

#include "skic/lexer.hpp"
#include "skic/term.hpp"

namespace skic {

namespace detail {

// Recursive-descent parser for the source language:
//   program := (def ";")* expr?
//   def     := ident ":=" expr
//   expr    := "\" ident+ "." expr | app
//   app     := atom+
//   atom    := ident | integer | true | false | "#"prim | "(" expr ")"
class SourceParser {
 public:
  explicit SourceParser(std::string_view src) : src_(src), toks_(tokenize(src, Dialect::Source).tokens) {}

  Program program() {
    Program prog;
    while (at_definition()) {
      const Token& name = next();
      expect(":=");
      if (prog.find(name.lexeme) != nullptr) throw DuplicateDefinition(name.lexeme);
      TermPtr body = expr();
      expect(";");
      prog.defs.push_back(Definition{name.lexeme, std::move(body)});
      globals_.push_back(name.lexeme);
    }
    if (!done()) prog.main = expr();
    if (!done()) fail("unexpected '" + peek().lexeme + "'");
    return prog;
  }

 private:
  bool done() const { return pos_ >= toks_.size(); }
  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_++]; }

  bool at_definition() const {
    return pos_ + 1 < toks_.size() && toks_[pos_].cls == TokenClass::Identifier && toks_[pos_ + 1].is_punct(":=");
  }

  [[noreturn]] void fail(const std::string& msg) const {
    if (done()) {
      std::size_t line = 1;
      std::size_t col = 1;
      for (char c : src_) {
        if (c == '\n') {
          ++line;
          col = 1;
        } else {
          ++col;
        }
      }
      throw SyntaxError(msg, line, col);
    }
    throw SyntaxError(msg, peek().line, peek().column);
  }

  void expect(std::string_view punct) {
    if (done() || !peek().is_punct(punct)) {
      fail("expected '" + std::string(punct) + "'" + (done() ? " at end of input" : ", found '" + peek().lexeme + "'"));
    }
    ++pos_;
  }

  bool at_atom() const {
    if (done()) return false;
    const Token& t = peek();
    return t.cls == TokenClass::Identifier || t.cls == TokenClass::Integer || t.cls == TokenClass::Keyword ||
           t.cls == TokenClass::Primitive || t.is_punct("(");
  }

  TermPtr expr() {
    if (!done() && peek().is_punct("\\")) {
      ++pos_;
      std::vector<std::string> params;
      while (!done() && peek().cls == TokenClass::Identifier) params.push_back(next().lexeme);
      if (params.empty()) fail("expected parameter after '\\'");
      expect(".");
      for (const auto& p : params) bound_.push_back(p);
      TermPtr body = expr();
      bound_.resize(bound_.size() - params.size());
      return lams(params, std::move(body));
    }
    if (!at_atom()) fail(done() ? "unexpected end of input" : "unexpected '" + peek().lexeme + "'");
    TermPtr t = atom();
    while (at_atom()) t = app(std::move(t), atom());
    return t;
  }

  TermPtr atom() {
    const Token& t = next();
    switch (t.cls) {
      case TokenClass::Identifier: {
        bool known = std::find(bound_.begin(), bound_.end(), t.lexeme) != bound_.end() ||
                     std::find(globals_.begin(), globals_.end(), t.lexeme) != globals_.end();
        if (!known) throw UnboundIdentifier(t.lexeme, t.line, t.column);
        return var(t.lexeme);
      }
      case TokenClass::Integer: {
        std::int64_t v = 0;
        const char* first = t.lexeme.data();
        const char* last = first + t.lexeme.size();
        auto [ptr, ec] = std::from_chars(first, last, v);
        if (ec != std::errc() || ptr != last) {
          throw SyntaxError("integer literal out of 64-bit range: " + t.lexeme, t.line, t.column);
        }
        return int_lit(v);
      }
      case TokenClass::Keyword: return bool_lit(t.lexeme == "true");
      case TokenClass::Primitive: return prim(*prim_from_name(std::string_view(t.lexeme).substr(1)));
      default: break;
    }
    TermPtr inner = expr();
    expect(")");
    return inner;
  }

  std::string_view src_;
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::vector<std::string> bound_;
  std::vector<std::string> globals_;
};

}  // namespace detail

inline Program parse_program(std::string_view source) { return detail::SourceParser(source).program(); }

// Parses a single closed expression with no definitions.
inline TermPtr parse_term(std::string_view source) {
  Program p = parse_program(source);
  if (!p.defs.empty() || !p.main) throw SyntaxError("expected a single expression", 1, 1);
  return p.main;
}

}  // namespace skic
