#pragma once

// Random term generators shared by the unit and acceptance suites. All draw
// from SplitMix64 so failures reproduce from the seed alone.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "skic/random.hpp"
#include "skic/ski.hpp"
#include "skic/term.hpp"

namespace skic::testing {

struct SimpleType;
using TypeRef = std::shared_ptr<const SimpleType>;

struct SimpleType {
  enum class Kind { Int, Bool, Fun } kind;
  TypeRef from;
  TypeRef to;
};

inline TypeRef int_type() {
  static const TypeRef t = std::make_shared<const SimpleType>(SimpleType{SimpleType::Kind::Int, nullptr, nullptr});
  return t;
}
inline TypeRef bool_type() {
  static const TypeRef t = std::make_shared<const SimpleType>(SimpleType{SimpleType::Kind::Bool, nullptr, nullptr});
  return t;
}
inline TypeRef fun_type(TypeRef a, TypeRef b) {
  return std::make_shared<const SimpleType>(SimpleType{SimpleType::Kind::Fun, std::move(a), std::move(b)});
}

inline bool same_type(const TypeRef& a, const TypeRef& b) {
  if (a->kind != b->kind) return false;
  if (a->kind != SimpleType::Kind::Fun) return true;
  return same_type(a->from, b->from) && same_type(a->to, b->to);
}

// Generates closed, simply-typed terms. Simple typing guarantees termination, so
// every generated program has a normal form on integer probes.
class TypedTermGen {
 public:
  explicit TypedTermGen(std::uint64_t seed) : rng_(seed) {}

  // A closed term of type Int -> ... -> Int with `arity` parameters, nesting depth <= depth.
  TermPtr program(std::size_t arity, std::size_t depth) {
    TypeRef t = int_type();
    for (std::size_t i = 0; i < arity; ++i) t = fun_type(int_type(), t);
    env_.clear();
    return gen(t, depth);
  }

  SplitMix64& rng() { return rng_; }

 private:
  std::string name() {
    static const char* pool[] = {"a", "b", "c", "x", "y", "z", "f", "g"};
    return pool[rng_.below(8)];
  }

  TermPtr pick_var(const TypeRef& t) {
    std::vector<std::string> candidates;
    // Innermost binding of each name wins, so scan from the back.
    std::vector<std::string> seen;
    for (auto it = env_.rbegin(); it != env_.rend(); ++it) {
      if (std::find(seen.begin(), seen.end(), it->first) != seen.end()) continue;
      seen.push_back(it->first);
      if (same_type(it->second, t)) candidates.push_back(it->first);
    }
    if (candidates.empty()) return nullptr;
    return var(candidates[rng_.below(candidates.size())]);
  }

  TypeRef small_type() {
    switch (rng_.below(4)) {
      case 0: return bool_type();
      case 1: return fun_type(int_type(), int_type());
      default: return int_type();
    }
  }

  TermPtr leaf(const TypeRef& t, std::size_t depth) {
    if (rng_.below(3) != 0) {
      if (TermPtr v = pick_var(t)) return v;
    }
    switch (t->kind) {
      case SimpleType::Kind::Int: return int_lit(static_cast<std::int64_t>(rng_.below(7)) - 3);
      case SimpleType::Kind::Bool: return bool_lit(rng_.below(2) == 0);
      case SimpleType::Kind::Fun: return lambda(t, depth);
    }
    return nullptr;
  }

  TermPtr lambda(const TypeRef& t, std::size_t depth) {
    std::string v = name();
    env_.emplace_back(v, t->from);
    TermPtr body = gen(t->to, depth > 0 ? depth - 1 : 0);
    env_.pop_back();
    return lam(v, body);
  }

  TermPtr gen(const TypeRef& t, std::size_t depth) {
    if (depth <= 1) return leaf(t, depth);
    const std::size_t d = depth - 1;
    if (t->kind == SimpleType::Kind::Fun) {
      const bool binary_int = t->from->kind == SimpleType::Kind::Int && t->to->kind == SimpleType::Kind::Fun &&
                              t->to->from->kind == SimpleType::Kind::Int &&
                              t->to->to->kind == SimpleType::Kind::Int;
      const bool unary_int = t->from->kind == SimpleType::Kind::Int && t->to->kind == SimpleType::Kind::Int;
      switch (rng_.below(5)) {
        case 0:
          if (binary_int) return prim(rng_.below(2) == 0 ? PrimOp::Add : PrimOp::Sub);
          break;
        case 1:
          if (unary_int) return app(prim(PrimOp::Add), gen(int_type(), d));
          break;
        case 2:
          if (TermPtr v = pick_var(t)) return v;
          break;
        default: break;
      }
      return lambda(t, depth);
    }
    switch (rng_.below(t->kind == SimpleType::Kind::Int ? 6 : 4)) {
      case 0: return leaf(t, depth);
      case 1: {
        TypeRef a = small_type();
        return app(gen(fun_type(a, t), d), gen(a, d));
      }
      case 2: return apps(prim(PrimOp::If), {gen(bool_type(), d), gen(t, d), gen(t, d)});
      default: break;
    }
    if (t->kind == SimpleType::Kind::Bool) return apps(prim(PrimOp::Eq), {gen(int_type(), d), gen(int_type(), d)});
    static const PrimOp ops[] = {PrimOp::Add, PrimOp::Sub, PrimOp::Add, PrimOp::Mul};
    return apps(prim(ops[rng_.below(4)]), {gen(int_type(), d), gen(int_type(), d)});
  }

  SplitMix64 rng_;
  std::vector<std::pair<std::string, TypeRef>> env_;
};

// Untyped closed terms mixing every node kind, for syntax-level properties.
class UntypedTermGen {
 public:
  explicit UntypedTermGen(std::uint64_t seed) : rng_(seed) {}

  TermPtr closed(std::size_t depth) {
    bound_.clear();
    return gen(depth);
  }

 private:
  TermPtr gen(std::size_t depth) {
    const std::uint64_t pick = depth <= 1 ? rng_.below(4) : rng_.below(7);
    switch (pick) {
      case 0:
        if (!bound_.empty()) return var(bound_[rng_.below(bound_.size())]);
        return int_lit(static_cast<std::int64_t>(rng_.below(11)) - 5);
      case 1: return int_lit(static_cast<std::int64_t>(rng_.below(21)) - 10);
      case 2: return rng_.below(3) == 0 ? bool_lit(rng_.below(2) == 0) : prim(kAllPrims[rng_.below(kAllPrims.size())]);
      case 3:
      case 4: {
        static const char* pool[] = {"x", "y", "z", "f", "v1", "long_name"};
        std::string v = pool[rng_.below(6)];
        bound_.push_back(v);
        TermPtr body = gen(depth > 1 ? depth - 1 : 1);
        bound_.pop_back();
        return lam(v, body);
      }
      default: return app(gen(depth - 1), gen(depth - 1));
    }
  }

  SplitMix64 rng_;
  std::vector<std::string> bound_;
};

// Random lambda-free terms, optionally containing free symbols.
class SkiTermGen {
 public:
  explicit SkiTermGen(std::uint64_t seed, bool with_symbols = true) : rng_(seed), symbols_(with_symbols) {}

  SkiPtr term(std::size_t depth) {
    if (depth <= 1 || rng_.below(3) == 0) return leaf();
    return sapp(term(depth - 1), term(depth - 1));
  }

 private:
  SkiPtr leaf() {
    switch (rng_.below(symbols_ ? 8 : 6)) {
      case 0: return S();
      case 1: return K();
      case 2: return I();
      case 3: return sint(static_cast<std::int64_t>(rng_.below(9)) - 4);
      case 4: return rng_.below(2) == 0 ? sbool(rng_.below(2) == 0) : sprim(kAllPrims[rng_.below(kAllPrims.size())]);
      case 5: return I();
      default: {
        static const char* pool[] = {"p", "q", "r"};
        return sfree(pool[rng_.below(3)]);
      }
    }
  }

  SplitMix64 rng_;
  bool symbols_;
};

struct CorpusFile {
  std::string name;
  std::string text;
};

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// The bundled .lc programs in filename order.
inline std::vector<CorpusFile> corpus_files() {
  std::vector<std::filesystem::path> paths;
  for (const auto& e : std::filesystem::directory_iterator(std::filesystem::path(SKIC_SOURCE_DIR) / "corpus")) {
    if (e.path().extension() == ".lc") paths.push_back(e.path());
  }
  std::sort(paths.begin(), paths.end());
  std::vector<CorpusFile> out;
  for (const auto& p : paths) out.push_back({p.filename().string(), read_file(p)});
  return out;
}

}  // namespace skic::testing
