#pragma once

#include <charconv>
#include <string>
#include <string_view>
#include <vector>

#include "skic/lexer.hpp"
#include "skic/ski.hpp"

namespace skic {

struct GaelDef {
  std::string name;
  SkiPtr body;
};

// A compressed program: named combinator definitions plus an optional main term.
struct GaelProgram {
  std::vector<GaelDef> defs;
  SkiPtr main;

  const GaelDef* find(const std::string& name) const {
    for (const auto& d : defs) {
      if (d.name == name) return &d;
    }
    return nullptr;
  }
};

inline std::string gael_print(const GaelProgram& p) {
  std::string out;
  for (const auto& d : p.defs) out += d.name + " := " + gael_print(*d.body) + ";\n";
  if (p.main) out += gael_print(*p.main) + "\n";
  return out;
}

// Definition bodies with every earlier definition substituted in.
inline std::vector<SkiPtr> closed_definitions(const GaelProgram& p) {
  std::vector<SkiPtr> closed;
  for (std::size_t i = 0; i < p.defs.size(); ++i) {
    SkiPtr body = p.defs[i].body;
    for (std::size_t j = i; j-- > 0;) body = ski_substitute(body, p.defs[j].name, closed[j]);
    closed.push_back(body);
  }
  return closed;
}

inline SkiPtr close_over(const GaelProgram& p, const std::vector<SkiPtr>& closed, SkiPtr t, std::size_t upto) {
  for (std::size_t j = upto; j-- > 0;) t = ski_substitute(t, p.defs[j].name, closed[j]);
  return t;
}

inline SkiPtr inline_main(const GaelProgram& p) {
  if (!p.main) return nullptr;
  return close_over(p, closed_definitions(p), p.main, p.defs.size());
}

namespace detail {

//   gprogram := (ident ":=" gterm ";")* gterm?
//   gterm    := gatom+
//   gatom    := S | K | I | integer | true | false | "#"prim | ident | "(" gterm ")"
class GaelParser {
 public:
  explicit GaelParser(std::string_view src) : toks_(tokenize(src, Dialect::Gael).tokens) {}

  GaelProgram program() {
    GaelProgram prog;
    while (pos_ + 1 < toks_.size() && toks_[pos_].cls == TokenClass::Identifier && toks_[pos_ + 1].is_punct(":=")) {
      std::string name = toks_[pos_].lexeme;
      pos_ += 2;
      if (prog.find(name) != nullptr) throw DuplicateDefinition(name);
      SkiPtr body = term();
      expect(";");
      prog.defs.push_back(GaelDef{std::move(name), std::move(body)});
    }
    if (pos_ < toks_.size()) prog.main = term();
    if (pos_ < toks_.size()) fail("unexpected '" + toks_[pos_].lexeme + "'");
    return prog;
  }

  SkiPtr single_term() {
    SkiPtr t = term();
    if (pos_ < toks_.size()) fail("unexpected '" + toks_[pos_].lexeme + "'");
    return t;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    if (pos_ < toks_.size()) throw SyntaxError(msg, toks_[pos_].line, toks_[pos_].column);
    throw SyntaxError(msg + " at end of input", toks_.empty() ? 1 : toks_.back().line,
                      toks_.empty() ? 1 : toks_.back().column + toks_.back().lexeme.size());
  }

  void expect(std::string_view punct) {
    if (pos_ >= toks_.size() || !toks_[pos_].is_punct(punct)) fail("expected '" + std::string(punct) + "'");
    ++pos_;
  }

  bool at_atom() const {
    if (pos_ >= toks_.size()) return false;
    const Token& t = toks_[pos_];
    return t.cls != TokenClass::Punct || t.lexeme == "(";
  }

  SkiPtr term() {
    if (!at_atom()) fail("expected a combinator term");
    SkiPtr t = atom();
    while (at_atom()) t = sapp(std::move(t), atom());
    return t;
  }

  SkiPtr atom() {
    const Token& t = toks_[pos_++];
    switch (t.cls) {
      case TokenClass::Combinator: return comb(t.lexeme == "S" ? Comb::S : t.lexeme == "K" ? Comb::K : Comb::I);
      case TokenClass::Identifier: return sfree(t.lexeme);
      case TokenClass::Keyword: return sbool(t.lexeme == "true");
      case TokenClass::Primitive: return sprim(*prim_from_name(std::string_view(t.lexeme).substr(1)));
      case TokenClass::Integer: {
        std::int64_t v = 0;
        auto [ptr, ec] = std::from_chars(t.lexeme.data(), t.lexeme.data() + t.lexeme.size(), v);
        if (ec != std::errc() || ptr != t.lexeme.data() + t.lexeme.size()) {
          throw SyntaxError("integer literal out of 64-bit range: " + t.lexeme, t.line, t.column);
        }
        return sint(v);
      }
      case TokenClass::Punct: break;
    }
    SkiPtr inner = term();
    expect(")");
    return inner;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline GaelProgram parse_gael_program(std::string_view src) { return detail::GaelParser(src).program(); }
inline SkiPtr parse_gael(std::string_view src) { return detail::GaelParser(src).single_term(); }

}  // namespace skic
