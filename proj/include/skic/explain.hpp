#pragma once

#include <charconv>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "skic/ski.hpp"

namespace skic {

// A position in a combinator term: the root spine is [], its head [0], its
// k-th argument [k], and so on inside argument spines.
using AnchorPath = std::vector<std::size_t>;

struct Sentence {
  std::string text;
  AnchorPath anchor;
};

struct ExplanationDoc {
  std::vector<Sentence> sentences;
};

class ExplanationError : public Error {
 public:
  ExplanationError(const std::string& what, std::size_t index)
      : Error("sentence " + std::to_string(index) + ": " + what), index_(index) {}

  std::size_t index() const { return index_; }

 private:
  std::size_t index_;
};

inline std::string path_text(const AnchorPath& p) {
  std::string out = "[";
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i > 0) out += '.';
    out += std::to_string(p[i]);
  }
  return out + "]";
}

namespace detail {

struct Phrase {
  std::string_view text;
  SkiPtr (*make)();
};

inline const std::vector<Phrase>& phrase_table() {
  static const std::vector<Phrase> table = {
      {"apply the first argument to the third and to the second applied to the third", [] { return S(); }},
      {"a constant function returning its first argument", [] { return K(); }},
      {"the identity function", [] { return I(); }},
      {"integer addition", [] { return sprim(PrimOp::AddZ); }},
      {"real addition", [] { return sprim(PrimOp::AddR); }},
      {"addition", [] { return sprim(PrimOp::Add); }},
      {"subtraction", [] { return sprim(PrimOp::Sub); }},
      {"multiplication", [] { return sprim(PrimOp::Mul); }},
      {"equality test", [] { return sprim(PrimOp::Eq); }},
      {"conditional choice", [] { return sprim(PrimOp::If); }},
      {"the boolean true", [] { return sbool(true); }},
      {"the boolean false", [] { return sbool(false); }},
  };
  return table;
}

inline constexpr std::string_view kApplied = " applied to ";
inline constexpr std::string_view kThen = ", then to ";
inline constexpr std::string_view kInteger = "the integer ";
inline constexpr std::string_view kSymbol = "the symbol ";
inline constexpr std::string_view kExpression = "the expression at ";

inline std::string leaf_phrase(const SkiTerm& t) {
  if (const auto* c = t.as<Comb>()) {
    return std::string(phrase_table()[*c == Comb::S ? 0 : *c == Comb::K ? 1 : 2].text);
  }
  if (const auto* p = t.as<Prim>()) {
    switch (p->op) {
      case PrimOp::AddZ: return "integer addition";
      case PrimOp::AddR: return "real addition";
      case PrimOp::Add: return "addition";
      case PrimOp::Sub: return "subtraction";
      case PrimOp::Mul: return "multiplication";
      case PrimOp::Eq: return "equality test";
      case PrimOp::If: return "conditional choice";
    }
  }
  if (const auto* i = t.as<IntLit>()) return std::string(kInteger) + std::to_string(i->value);
  if (const auto* b = t.as<BoolLit>()) return b->value ? "the boolean true" : "the boolean false";
  return std::string(kSymbol) + t.as<FreeVar>()->name;
}

inline void explain_into(const SkiPtr& t, AnchorPath path, ExplanationDoc& doc) {
  auto [head, args] = unwind(t);
  if (args.empty()) {
    doc.sentences.push_back({leaf_phrase(*t), std::move(path)});
    return;
  }
  std::string text = leaf_phrase(*head);
  for (std::size_t k = 0; k < args.size(); ++k) {
    text += k == 0 ? kApplied : kThen;
    AnchorPath child = path;
    child.push_back(k + 1);
    text += args[k]->is<SkiApp>() ? std::string(kExpression) + path_text(child) : leaf_phrase(*args[k]);
  }
  doc.sentences.push_back({std::move(text), path});
  AnchorPath head_path = path;
  head_path.push_back(0);
  doc.sentences.push_back({leaf_phrase(*head), std::move(head_path)});
  for (std::size_t k = 0; k < args.size(); ++k) {
    AnchorPath child = path;
    child.push_back(k + 1);
    explain_into(args[k], std::move(child), doc);
  }
}

}  // namespace detail

// One sentence per application spine, naming its head and arguments, followed
// by one sentence per leaf. Sentences appear in pre-order.
inline ExplanationDoc explain_term(const SkiPtr& s) {
  ExplanationDoc doc;
  detail::explain_into(s, {}, doc);
  return doc;
}

namespace detail {

// Reads one phrase at the front of `rest`, preferring the longest template.
class PhraseReader {
 public:
  PhraseReader(std::string_view text, std::size_t index) : rest_(text), index_(index) {}

  bool done() const { return rest_.empty(); }
  bool consume(std::string_view lit) {
    if (rest_.substr(0, lit.size()) != lit) return false;
    rest_.remove_prefix(lit.size());
    return true;
  }

  // A leaf phrase, or a reference to a compound argument.
  SkiPtr phrase(std::optional<AnchorPath>* reference = nullptr) {
    const Phrase* best = nullptr;
    for (const auto& p : phrase_table()) {
      if (rest_.substr(0, p.text.size()) == p.text && (best == nullptr || p.text.size() > best->text.size())) best = &p;
    }
    if (best != nullptr) {
      rest_.remove_prefix(best->text.size());
      return best->make();
    }
    if (consume(kInteger)) {
      std::size_t len = 0;
      if (len < rest_.size() && rest_[len] == '-') ++len;
      while (len < rest_.size() && rest_[len] >= '0' && rest_[len] <= '9') ++len;
      std::int64_t v = 0;
      auto [ptr, ec] = std::from_chars(rest_.data(), rest_.data() + len, v);
      if (ec != std::errc() || ptr != rest_.data() + len) fail("malformed integer");
      rest_.remove_prefix(len);
      return sint(v);
    }
    if (consume(kSymbol)) {
      std::size_t len = 0;
      while (len < rest_.size() && is_ident_char(rest_[len], len == 0)) ++len;
      if (len == 0) fail("missing symbol name");
      std::string name(rest_.substr(0, len));
      rest_.remove_prefix(len);
      return sfree(std::move(name));
    }
    if (reference != nullptr && consume(kExpression)) {
      const auto close = rest_.find(']');
      if (rest_.empty() || rest_[0] != '[' || close == std::string_view::npos) fail("malformed anchor");
      *reference = parse_path(rest_.substr(0, close + 1), index_);
      rest_.remove_prefix(close + 1);
      return nullptr;
    }
    fail("unknown phrase '" + std::string(rest_) + "'");
  }

  [[noreturn]] void fail(const std::string& what) const { throw ExplanationError(what, index_); }

  static AnchorPath parse_path(std::string_view text, std::size_t index) {
    if (text.size() < 2 || text.front() != '[' || text.back() != ']') throw ExplanationError("malformed anchor", index);
    text = text.substr(1, text.size() - 2);
    AnchorPath out;
    if (text.empty()) return out;
    for (;;) {
      std::size_t v = 0;
      auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
      if (ec != std::errc() || ptr == text.data()) throw ExplanationError("malformed anchor", index);
      out.push_back(v);
      text.remove_prefix(static_cast<std::size_t>(ptr - text.data()));
      if (text.empty()) return out;
      if (text.front() != '.') throw ExplanationError("malformed anchor", index);
      text.remove_prefix(1);
    }
  }

 private:
  static bool is_ident_char(char c, bool first) {
    return (c >= 'a' && c <= 'z') || (!first && ((c >= '0' && c <= '9') || c == '_'));
  }

  std::string_view rest_;
  std::size_t index_;
};

class DocReader {
 public:
  explicit DocReader(const ExplanationDoc& doc) : doc_(doc), used_(doc.sentences.size(), false) {
    for (std::size_t i = 0; i < doc.sentences.size(); ++i) {
      if (!by_path_.emplace(doc.sentences[i].anchor, i).second) {
        throw ExplanationError("duplicate anchor " + path_text(doc.sentences[i].anchor), i);
      }
    }
  }

  SkiPtr read() {
    if (doc_.sentences.empty()) throw ExplanationError("empty explanation", 0);
    SkiPtr t = node({}, 0);
    for (std::size_t i = 0; i < doc_.sentences.size(); ++i) {
      if (!used_[i]) throw ExplanationError("sentence not reachable from the root", i);
    }
    return t;
  }

 private:
  std::size_t lookup(const AnchorPath& p, std::size_t from) {
    auto it = by_path_.find(p);
    if (it == by_path_.end()) throw ExplanationError("no sentence for " + path_text(p), from);
    used_[it->second] = true;
    return it->second;
  }

  SkiPtr node(const AnchorPath& path, std::size_t from) {
    const std::size_t i = lookup(path, from);
    PhraseReader r(doc_.sentences[i].text, i);
    SkiPtr head = r.phrase();
    if (r.done()) return head;
    if (!r.consume(kApplied)) r.fail("expected 'applied to'");

    AnchorPath head_path = path;
    head_path.push_back(0);
    const std::size_t hi = lookup(head_path, i);
    PhraseReader hr(doc_.sentences[hi].text, hi);
    SkiPtr head_again = hr.phrase();
    if (!hr.done() || !(*head_again == *head)) hr.fail("head sentence disagrees with its spine");

    SkiPtr t = head;
    for (std::size_t k = 1;; ++k) {
      AnchorPath child = path;
      child.push_back(k);
      std::optional<AnchorPath> ref;
      SkiPtr arg = r.phrase(&ref);
      if (ref) {
        if (*ref != child) r.fail("argument anchor " + path_text(*ref) + " out of place");
        arg = node(child, i);
        if (!arg->is<SkiApp>()) r.fail("referenced expression is a single leaf");
      } else {
        SkiPtr again = node(child, i);
        if (!(*again == *arg)) r.fail("leaf sentence disagrees with its spine");
      }
      t = sapp(t, arg);
      if (r.done()) return t;
      if (!r.consume(kThen)) r.fail("expected ', then to'");
    }
  }

  const ExplanationDoc& doc_;
  std::map<AnchorPath, std::size_t> by_path_;
  std::vector<bool> used_;
};

}  // namespace detail

inline SkiPtr parse_explanation(const ExplanationDoc& doc) { return detail::DocReader(doc).read(); }

// Text form: one sentence per line, prefixed by its anchor, e.g. "[2.1] the integer 5".
inline std::string write_explanation(const ExplanationDoc& doc) {
  std::string out;
  for (const auto& s : doc.sentences) out += path_text(s.anchor) + " " + s.text + "\n";
  return out;
}

inline ExplanationDoc read_explanation(std::string_view text) {
  ExplanationDoc doc;
  std::size_t index = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    const auto close = line.find(']');
    if (close == std::string_view::npos || close + 1 >= line.size() || line[close + 1] != ' ') {
      throw ExplanationError("expected '[path] sentence'", index);
    }
    doc.sentences.push_back({std::string(line.substr(close + 2)),
                             detail::PhraseReader::parse_path(line.substr(0, close + 1), index)});
    ++index;
  }
  return doc;
}

}  // namespace skic
