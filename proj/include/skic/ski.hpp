#pragma once

#include <cstdint>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "skic/eval.hpp"
#include "skic/term.hpp"

namespace skic {

enum class Comb : std::uint8_t { S, K, I };

inline char comb_char(Comb c) { return c == Comb::S ? 'S' : c == Comb::K ? 'K' : 'I'; }

class SkiTerm;
using SkiPtr = std::shared_ptr<const SkiTerm>;

struct SkiApp {
  SkiPtr fun;
  SkiPtr arg;
};

// A name left free in a combinator term: a reference to a top-level definition,
// or a symbolic argument inside a probe context.
struct FreeVar {
  std::string name;
};

// Lambda-free combinator term. There is no abstraction alternative, so every
// SkiTerm satisfies the lambda-freedom invariant by construction.
class SkiTerm {
 public:
  using Node = std::variant<Comb, SkiApp, IntLit, BoolLit, Prim, FreeVar>;

  explicit SkiTerm(Node node) : node_(std::move(node)) {
    if (const auto* a = std::get_if<SkiApp>(&node_)) {
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
  bool is_comb(Comb c) const {
    const auto* k = as<Comb>();
    return k != nullptr && *k == c;
  }

 private:
  Node node_;
  std::uint64_t size_ = 1;
  std::size_t depth_ = 1;
};

inline SkiPtr comb(Comb c) { return std::make_shared<const SkiTerm>(c); }
inline SkiPtr S() { return comb(Comb::S); }
inline SkiPtr K() { return comb(Comb::K); }
inline SkiPtr I() { return comb(Comb::I); }
inline SkiPtr sapp(SkiPtr f, SkiPtr x) { return std::make_shared<const SkiTerm>(SkiApp{std::move(f), std::move(x)}); }
inline SkiPtr sapps(SkiPtr head, const std::vector<SkiPtr>& args) {
  for (const auto& a : args) head = sapp(std::move(head), a);
  return head;
}
inline SkiPtr sint(std::int64_t v) { return std::make_shared<const SkiTerm>(IntLit{v}); }
inline SkiPtr sbool(bool v) { return std::make_shared<const SkiTerm>(BoolLit{v}); }
inline SkiPtr sprim(PrimOp op) { return std::make_shared<const SkiTerm>(Prim{op}); }
inline SkiPtr sfree(std::string name) { return std::make_shared<const SkiTerm>(FreeVar{std::move(name)}); }
inline SkiPtr sliteral(const Literal& lit) {
  return std::visit([](const auto& l) { return std::make_shared<const SkiTerm>(l); }, lit);
}

// Structural equality.
inline bool operator==(const SkiTerm& a, const SkiTerm& b) {
  if (&a == &b) return true;
  if (a.node().index() != b.node().index() || a.size() != b.size()) return false;
  if (const auto* x = a.as<SkiApp>()) {
    const auto* y = b.as<SkiApp>();
    return *x->fun == *y->fun && *x->arg == *y->arg;
  }
  if (const auto* x = a.as<Comb>()) return *x == *b.as<Comb>();
  if (const auto* x = a.as<IntLit>()) return *x == *b.as<IntLit>();
  if (const auto* x = a.as<BoolLit>()) return *x == *b.as<BoolLit>();
  if (const auto* x = a.as<Prim>()) return *x == *b.as<Prim>();
  return a.as<FreeVar>()->name == b.as<FreeVar>()->name;
}

inline bool ski_occurs(const SkiTerm& t, const std::string& name) {
  if (const auto* v = t.as<FreeVar>()) return v->name == name;
  if (const auto* a = t.as<SkiApp>()) return ski_occurs(*a->fun, name) || ski_occurs(*a->arg, name);
  return false;
}

inline void collect_ski_free(const SkiTerm& t, std::set<std::string>& out) {
  if (const auto* v = t.as<FreeVar>()) out.insert(v->name);
  if (const auto* a = t.as<SkiApp>()) {
    collect_ski_free(*a->fun, out);
    collect_ski_free(*a->arg, out);
  }
}

inline std::set<std::string> ski_free_vars(const SkiTerm& t) {
  std::set<std::string> out;
  collect_ski_free(t, out);
  return out;
}

inline SkiPtr ski_substitute(const SkiPtr& t, const std::string& name, const SkiPtr& value) {
  if (const auto* v = t->as<FreeVar>()) return v->name == name ? value : t;
  if (const auto* a = t->as<SkiApp>()) {
    SkiPtr f = ski_substitute(a->fun, name, value);
    SkiPtr x = ski_substitute(a->arg, name, value);
    return f == a->fun && x == a->arg ? t : sapp(f, x);
  }
  return t;
}

inline std::pair<SkiPtr, std::vector<SkiPtr>> unwind(SkiPtr t) {
  std::vector<SkiPtr> args;
  while (const auto* a = t->as<SkiApp>()) {
    args.push_back(a->arg);
    t = a->fun;
  }
  std::reverse(args.begin(), args.end());
  return {std::move(t), std::move(args)};
}

// ---------------------------------------------------------------------------
// Bracket abstraction

enum class RuleSet : std::uint8_t {
  Naive,         // S and K only; [x]x = S K K
  WithI,         // adds [x]x = I
  EtaOptimized,  // adds [x](M x) = M when x is not free in M
};

inline constexpr std::array<RuleSet, 3> kAllRuleSets = {RuleSet::Naive, RuleSet::WithI, RuleSet::EtaOptimized};

inline std::string_view rule_set_name(RuleSet r) {
  switch (r) {
    case RuleSet::Naive: return "naive";
    case RuleSet::WithI: return "i";
    case RuleSet::EtaOptimized: return "eta";
  }
  return "?";
}

inline std::optional<RuleSet> rule_set_from_name(std::string_view s) {
  for (RuleSet r : kAllRuleSets) {
    if (rule_set_name(r) == s) return r;
  }
  return std::nullopt;
}

// [x]M over a lambda-free body in which bound variables appear as FreeVar.
inline SkiPtr abstract_var(const std::string& x, const SkiPtr& m, RuleSet rules) {
  if (!ski_occurs(*m, x)) return sapp(K(), m);
  if (m->is<FreeVar>()) return rules == RuleSet::Naive ? sapps(S(), {K(), K()}) : I();
  const auto* a = m->as<SkiApp>();
  if (rules == RuleSet::EtaOptimized) {
    const auto* v = a->arg->as<FreeVar>();
    if (v != nullptr && v->name == x && !ski_occurs(*a->fun, x)) return a->fun;
  }
  return sapps(S(), {abstract_var(x, a->fun, rules), abstract_var(x, a->arg, rules)});
}

namespace detail {

inline SkiPtr compile(const Term& t, RuleSet rules) {
  return std::visit(
      [&](const auto& n) -> SkiPtr {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, Var>) {
          return sfree(n.name);
        } else if constexpr (std::is_same_v<N, Lam>) {
          return abstract_var(n.param, compile(*n.body, rules), rules);
        } else if constexpr (std::is_same_v<N, App>) {
          return sapp(compile(*n.fun, rules), compile(*n.arg, rules));
        } else {
          return std::make_shared<const SkiTerm>(n);
        }
      },
      t.node());
}

}  // namespace detail

// Translates a lambda term to combinators, innermost binder first. Names in
// `globals` are definition references and survive as FreeVar atoms; any other
// free variable is an open-term error.
inline SkiPtr bracket_abstract(const Term& t, RuleSet rules, const std::set<std::string>& globals = {}) {
  for (const auto& name : free_vars(t)) {
    if (globals.count(name) == 0) throw OpenTermError(name);
  }
  return detail::compile(t, rules);
}

// ---------------------------------------------------------------------------
// Decoding back to lambda terms

inline TermPtr combinator_term(Comb c) {
  switch (c) {
    case Comb::S: return lams({"x", "y", "z"}, apps(var("x"), {var("z"), app(var("y"), var("z"))}));
    case Comb::K: return lams({"x", "y"}, var("x"));
    case Comb::I: return lam("x", var("x"));
  }
  return nullptr;
}

inline TermPtr ski_decode(const SkiTerm& s) {
  return std::visit(
      [](const auto& n) -> TermPtr {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, Comb>) {
          return combinator_term(n);
        } else if constexpr (std::is_same_v<N, SkiApp>) {
          return app(ski_decode(*n.fun), ski_decode(*n.arg));
        } else if constexpr (std::is_same_v<N, FreeVar>) {
          return var(n.name);
        } else {
          return std::make_shared<const Term>(n);
        }
      },
      s.node());
}

// ---------------------------------------------------------------------------
// Reduction

namespace detail {

class CombinatorMachine {
 public:
  explicit CombinatorMachine(const ReduceOptions& opt) : budget_(opt) {}

  SkiPtr normalize(const SkiPtr& t) {
    Nested guard(budget_);
    SkiPtr w = whnf(t);
    auto [head, args] = unwind(w);
    bool changed = false;
    for (auto& a : args) {
      SkiPtr n = normalize(a);
      changed |= n != a;
      a = std::move(n);
    }
    return changed ? budget_.check(sapps(head, args)) : w;
  }

  std::size_t steps() const { return budget_.steps(); }

 private:
  SkiPtr whnf(SkiPtr t) {
    Nested guard(budget_);
    for (;;) {
      auto [head, args] = unwind(t);
      auto rest = [&](std::size_t used) {
        return std::vector<SkiPtr>(args.begin() + static_cast<std::ptrdiff_t>(used), args.end());
      };
      if (const auto* c = head->as<Comb>()) {
        if (*c == Comb::I && !args.empty()) {
          budget_.require_step();
          t = sapps(args[0], rest(1));
        } else if (*c == Comb::K && args.size() >= 2) {
          budget_.require_step();
          t = sapps(args[0], rest(2));
        } else if (*c == Comb::S && args.size() >= 3) {
          budget_.require_step();
          t = budget_.check(sapps(sapps(args[0], {args[2], sapp(args[1], args[2])}), rest(3)));
        } else {
          return t;
        }
        continue;
      }
      const auto* p = head->as<Prim>();
      if (p == nullptr || args.size() < prim_arity(p->op)) return t;
      std::vector<Literal> lits;
      bool changed = false;
      for (std::size_t i = 0; i < prim_strict_operands(p->op); ++i) {
        SkiPtr w = whnf(args[i]);
        changed |= w != args[i];
        args[i] = w;
        if (const auto* n = w->as<IntLit>()) {
          lits.push_back(*n);
        } else if (const auto* b = w->as<BoolLit>()) {
          lits.push_back(*b);
        }
      }
      if (lits.size() < prim_strict_operands(p->op)) return changed ? sapps(head, args) : t;
      Delta d = fire_delta(p->op, lits);
      if (d.kind == Delta::Kind::Stuck) return changed ? sapps(head, args) : t;
      budget_.require_step();
      SkiPtr result = d.kind == Delta::Kind::Value ? sliteral(d.value) : args[d.operand];
      t = budget_.check(sapps(result, rest(prim_arity(p->op))));
    }
  }

  StepBudget<SkiPtr> budget_;
};

}  // namespace detail

// Normal-order rewriting: S x y z -> x z (y z), K x y -> x, I x -> x, plus delta rules.
inline Reduced<SkiPtr> ski_reduce(const SkiPtr& t, const ReduceOptions& opt = {}) {
  detail::CombinatorMachine m(opt);
  try {
    SkiPtr nf = m.normalize(t);
    return {nf, false, m.steps()};
  } catch (const detail::OutOfFuel&) {
    return {t, true, m.steps()};
  }
}

inline Reduced<SkiPtr> ski_reduce(const SkiPtr& t, std::size_t fuel) {
  ReduceOptions opt;
  opt.fuel = fuel;
  return ski_reduce(t, opt);
}

// ---------------------------------------------------------------------------
// GAEL text: left-associative juxtaposition, parentheses only around applied arguments.

namespace detail {

inline void print_gael_term(const SkiTerm& t, std::string& out, bool as_argument) {
  if (const auto* a = t.as<SkiApp>()) {
    if (as_argument) out += '(';
    print_gael_term(*a->fun, out, false);
    out += ' ';
    print_gael_term(*a->arg, out, true);
    if (as_argument) out += ')';
    return;
  }
  if (const auto* c = t.as<Comb>()) {
    out += comb_char(*c);
  } else if (const auto* i = t.as<IntLit>()) {
    out += std::to_string(i->value);
  } else if (const auto* b = t.as<BoolLit>()) {
    out += b->value ? "true" : "false";
  } else if (const auto* p = t.as<Prim>()) {
    out += '#';
    out += prim_name(p->op);
  } else {
    out += t.as<FreeVar>()->name;
  }
}

}  // namespace detail

inline std::string gael_print(const SkiTerm& t) {
  std::string out;
  detail::print_gael_term(t, out, false);
  return out;
}

}  // namespace skic
