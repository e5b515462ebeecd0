#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "skic/prim.hpp"

namespace skic {

class Term;
using TermPtr = std::shared_ptr<const Term>;

struct Var {
  std::string name;
};

struct Lam {
  std::string param;
  TermPtr body;
};

struct App {
  TermPtr fun;
  TermPtr arg;
};

namespace detail {

inline std::uint64_t saturating_add(std::uint64_t a, std::uint64_t b) {
  return a > std::numeric_limits<std::uint64_t>::max() - b ? std::numeric_limits<std::uint64_t>::max()
                                                           : a + b;
}

}  // namespace detail

// Immutable lambda-calculus node. Subterms are shared, so the cached size is the
// size of the tree the node denotes, not of the DAG in memory.
class Term {
 public:
  using Node = std::variant<Var, Lam, App, IntLit, BoolLit, Prim>;

  explicit Term(Node node) : node_(std::move(node)) {
    if (const auto* l = std::get_if<Lam>(&node_)) {
      size_ = detail::saturating_add(1, l->body->size());
      depth_ = l->body->depth() + 1;
    } else if (const auto* a = std::get_if<App>(&node_)) {
      size_ = detail::saturating_add(1, detail::saturating_add(a->fun->size(), a->arg->size()));
      depth_ = std::max(a->fun->depth(), a->arg->depth()) + 1;
    }
  }

  const Node& node() const { return node_; }
  std::uint64_t size() const { return size_; }
  std::size_t depth() const { return depth_; }

  template <class T>
  const T* as() const {
    return std::get_if<T>(&node_);
  }

  template <class T>
  bool is() const {
    return std::holds_alternative<T>(node_);
  }

 private:
  Node node_;
  std::uint64_t size_ = 1;
  std::size_t depth_ = 1;
};

inline TermPtr var(std::string name) { return std::make_shared<const Term>(Var{std::move(name)}); }
inline TermPtr lam(std::string param, TermPtr body) {
  return std::make_shared<const Term>(Lam{std::move(param), std::move(body)});
}
inline TermPtr app(TermPtr fun, TermPtr arg) {
  return std::make_shared<const Term>(App{std::move(fun), std::move(arg)});
}
inline TermPtr int_lit(std::int64_t v) { return std::make_shared<const Term>(IntLit{v}); }
inline TermPtr bool_lit(bool v) { return std::make_shared<const Term>(BoolLit{v}); }
inline TermPtr prim(PrimOp op) { return std::make_shared<const Term>(Prim{op}); }

inline TermPtr lams(const std::vector<std::string>& params, TermPtr body) {
  for (auto it = params.rbegin(); it != params.rend(); ++it) body = lam(*it, std::move(body));
  return body;
}

inline TermPtr apps(TermPtr head, const std::vector<TermPtr>& args) {
  for (const auto& a : args) head = app(std::move(head), a);
  return head;
}

inline TermPtr literal_term(const Literal& lit) {
  return std::visit([](const auto& l) { return std::make_shared<const Term>(l); }, lit);
}

inline void collect_free_vars(const Term& t, std::vector<std::string>& bound, std::set<std::string>& out) {
  std::visit(
      [&](const auto& n) {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, Var>) {
          if (std::find(bound.begin(), bound.end(), n.name) == bound.end()) out.insert(n.name);
        } else if constexpr (std::is_same_v<N, Lam>) {
          bound.push_back(n.param);
          collect_free_vars(*n.body, bound, out);
          bound.pop_back();
        } else if constexpr (std::is_same_v<N, App>) {
          collect_free_vars(*n.fun, bound, out);
          collect_free_vars(*n.arg, bound, out);
        }
      },
      t.node());
}

inline std::set<std::string> free_vars(const Term& t) {
  std::set<std::string> out;
  std::vector<std::string> bound;
  collect_free_vars(t, bound, out);
  return out;
}

inline bool occurs_free(const Term& t, const std::string& name) {
  return std::visit(
      [&](const auto& n) -> bool {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, Var>) {
          return n.name == name;
        } else if constexpr (std::is_same_v<N, Lam>) {
          return n.param != name && occurs_free(*n.body, name);
        } else if constexpr (std::is_same_v<N, App>) {
          return occurs_free(*n.fun, name) || occurs_free(*n.arg, name);
        } else {
          return false;
        }
      },
      t.node());
}

inline std::size_t count_lams(const Term& t) {
  return std::visit(
      [](const auto& n) -> std::size_t {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, Lam>) {
          return 1 + count_lams(*n.body);
        } else if constexpr (std::is_same_v<N, App>) {
          return count_lams(*n.fun) + count_lams(*n.arg);
        } else {
          return 0;
        }
      },
      t.node());
}

inline std::size_t leading_lambdas(const Term& t) {
  std::size_t n = 0;
  for (const Term* cur = &t; const auto* l = cur->as<Lam>(); cur = l->body.get()) ++n;
  return n;
}

// Splits `f a b c` into head `f` and arguments [a, b, c].
inline std::pair<TermPtr, std::vector<TermPtr>> unwind(TermPtr t) {
  std::vector<TermPtr> args;
  while (const auto* a = t->as<App>()) {
    args.push_back(a->arg);
    t = a->fun;
  }
  std::reverse(args.begin(), args.end());
  return {std::move(t), std::move(args)};
}

namespace detail {

// Position of `name` counted from the innermost binder, i.e. its de Bruijn index.
inline std::optional<std::size_t> de_bruijn_index(const std::vector<const std::string*>& binders,
                                                  const std::string& name) {
  for (std::size_t i = binders.size(); i-- > 0;) {
    if (*binders[i] == name) return binders.size() - 1 - i;
  }
  return std::nullopt;
}

inline bool alpha_eq(const Term& a, const Term& b, std::vector<const std::string*>& ba,
                     std::vector<const std::string*>& bb) {
  if (&a == &b && ba.size() == bb.size()) {
    bool same_binders = true;
    for (std::size_t i = 0; i < ba.size() && same_binders; ++i) same_binders = *ba[i] == *bb[i];
    if (same_binders) return true;
  }
  if (a.node().index() != b.node().index()) return false;
  if (const auto* va = a.as<Var>()) {
    const auto* vb = b.as<Var>();
    auto ia = de_bruijn_index(ba, va->name);
    auto ib = de_bruijn_index(bb, vb->name);
    if (ia.has_value() != ib.has_value()) return false;
    return ia ? *ia == *ib : va->name == vb->name;
  }
  if (const auto* la = a.as<Lam>()) {
    const auto* lb = b.as<Lam>();
    ba.push_back(&la->param);
    bb.push_back(&lb->param);
    bool eq = alpha_eq(*la->body, *lb->body, ba, bb);
    ba.pop_back();
    bb.pop_back();
    return eq;
  }
  if (const auto* aa = a.as<App>()) {
    const auto* ab = b.as<App>();
    return alpha_eq(*aa->fun, *ab->fun, ba, bb) && alpha_eq(*aa->arg, *ab->arg, ba, bb);
  }
  if (const auto* ia = a.as<IntLit>()) return *ia == *b.as<IntLit>();
  if (const auto* bla = a.as<BoolLit>()) return *bla == *b.as<BoolLit>();
  return *a.as<Prim>() == *b.as<Prim>();
}

}  // namespace detail

// Identity up to consistent renaming of bound variables; free variables compare by name.
inline bool alpha_equivalent(const Term& a, const Term& b) {
  std::vector<const std::string*> ba;
  std::vector<const std::string*> bb;
  return detail::alpha_eq(a, b, ba, bb);
}

// Contracts every `\x. M x` with x not free in M, bottom-up.
inline TermPtr eta_normalize(const TermPtr& t) {
  if (const auto* l = t->as<Lam>()) {
    TermPtr body = eta_normalize(l->body);
    if (const auto* a = body->as<App>()) {
      const auto* v = a->arg->as<Var>();
      if (v != nullptr && v->name == l->param && !occurs_free(*a->fun, l->param)) return a->fun;
    }
    return body == l->body ? t : lam(l->param, body);
  }
  if (const auto* a = t->as<App>()) {
    TermPtr f = eta_normalize(a->fun);
    TermPtr x = eta_normalize(a->arg);
    return f == a->fun && x == a->arg ? t : app(f, x);
  }
  return t;
}

// Replaces free occurrences of `name` by `value`. `value` must be closed, so no
// capture can occur and binders are left untouched.
inline TermPtr substitute_closed(const TermPtr& t, const std::string& name, const TermPtr& value) {
  if (const auto* v = t->as<Var>()) return v->name == name ? value : t;
  if (const auto* l = t->as<Lam>()) {
    if (l->param == name) return t;
    TermPtr body = substitute_closed(l->body, name, value);
    return body == l->body ? t : lam(l->param, body);
  }
  if (const auto* a = t->as<App>()) {
    TermPtr f = substitute_closed(a->fun, name, value);
    TermPtr x = substitute_closed(a->arg, name, value);
    return f == a->fun && x == a->arg ? t : app(f, x);
  }
  return t;
}

struct Definition {
  std::string name;
  TermPtr body;
};

// Top-level definitions in source order plus an optional main expression.
struct Program {
  std::vector<Definition> defs;
  TermPtr main;

  const Definition* find(const std::string& name) const {
    for (const auto& d : defs) {
      if (d.name == name) return &d;
    }
    return nullptr;
  }
};

// Closes `t` over the first `upto` definitions, given their already-closed bodies.
inline TermPtr close_over(const Program& p, const std::vector<TermPtr>& closed, TermPtr t, std::size_t upto) {
  for (std::size_t i = upto; i-- > 0;) t = substitute_closed(t, p.defs[i].name, closed[i]);
  return t;
}

// Closed body of every definition. Bodies only mention earlier names, so one
// forward sweep suffices.
inline std::vector<TermPtr> closed_definitions(const Program& p) {
  std::vector<TermPtr> closed;
  closed.reserve(p.defs.size());
  for (std::size_t i = 0; i < p.defs.size(); ++i) closed.push_back(close_over(p, closed, p.defs[i].body, i));
  return closed;
}

inline TermPtr inline_main(const Program& p) {
  if (!p.main) return nullptr;
  return close_over(p, closed_definitions(p), p.main, p.defs.size());
}

}  // namespace skic
