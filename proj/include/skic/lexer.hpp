#pragma once

#include <cctype>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "skic/errors.hpp"
#include "skic/prim.hpp"

namespace skic {

enum class Dialect { Source, Gael };

enum class TokenClass { Identifier, Integer, Combinator, Primitive, Punct, Keyword };

inline std::string_view token_class_name(TokenClass c) {
  switch (c) {
    case TokenClass::Identifier: return "identifier";
    case TokenClass::Integer: return "integer";
    case TokenClass::Combinator: return "combinator";
    case TokenClass::Primitive: return "primitive";
    case TokenClass::Punct: return "punct";
    case TokenClass::Keyword: return "keyword";
  }
  return "?";
}

struct Token {
  TokenClass cls;
  std::string lexeme;
  std::size_t offset = 0;
  std::size_t line = 1;
  std::size_t column = 1;

  bool is_punct(std::string_view p) const { return cls == TokenClass::Punct && lexeme == p; }
};

struct TokenSeq {
  std::vector<Token> tokens;
  std::size_t length() const { return tokens.size(); }
};

namespace detail {

inline bool ident_start(char c) { return c >= 'a' && c <= 'z'; }
inline bool ident_char(char c) { return ident_start(c) || (c >= '0' && c <= '9') || c == '_'; }
inline bool digit(char c) { return c >= '0' && c <= '9'; }

}  // namespace detail

// Whitespace and `--` comments separate tokens and are never counted.
inline TokenSeq tokenize(std::string_view src, Dialect dialect) {
  TokenSeq out;
  std::size_t i = 0;
  std::size_t line = 1;
  std::size_t line_start = 0;
  auto push = [&](TokenClass cls, std::size_t begin, std::size_t end) {
    out.tokens.push_back(Token{cls, std::string(src.substr(begin, end - begin)), begin, line, begin - line_start + 1});
  };
  while (i < src.size()) {
    char c = src[i];
    if (c == '\n') {
      ++i;
      ++line;
      line_start = i;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '-' && i + 1 < src.size() && src[i + 1] == '-') {
      while (i < src.size() && src[i] != '\n') ++i;
      continue;
    }
    std::size_t begin = i;
    if (detail::digit(c) || (c == '-' && i + 1 < src.size() && detail::digit(src[i + 1]))) {
      ++i;
      while (i < src.size() && detail::digit(src[i])) ++i;
      push(TokenClass::Integer, begin, i);
    } else if (detail::ident_start(c)) {
      while (i < src.size() && detail::ident_char(src[i])) ++i;
      std::string_view word = src.substr(begin, i - begin);
      push(word == "true" || word == "false" ? TokenClass::Keyword : TokenClass::Identifier, begin, i);
    } else if (c == '#') {
      ++i;
      while (i < src.size() && std::isalpha(static_cast<unsigned char>(src[i]))) ++i;
      if (!prim_from_name(src.substr(begin + 1, i - begin - 1))) {
        throw LexicalError("unknown primitive '" + std::string(src.substr(begin, i - begin)) + "'", begin);
      }
      push(TokenClass::Primitive, begin, i);
    } else if (c == ':' && i + 1 < src.size() && src[i + 1] == '=') {
      i += 2;
      push(TokenClass::Punct, begin, i);
    } else if (c == '(' || c == ')' || c == ';') {
      ++i;
      push(TokenClass::Punct, begin, i);
    } else if (dialect == Dialect::Source && (c == '\\' || c == '.')) {
      ++i;
      push(TokenClass::Punct, begin, i);
    } else if (dialect == Dialect::Gael && (c == 'S' || c == 'K' || c == 'I')) {
      ++i;
      if (i < src.size() && (std::isalnum(static_cast<unsigned char>(src[i])) || src[i] == '_')) {
        throw LexicalError("unexpected character after combinator", i);
      }
      push(TokenClass::Combinator, begin, i);
    } else {
      throw LexicalError(std::string("unexpected character '") + c + "'", begin);
    }
  }
  return out;
}

}  // namespace skic
