#pragma once

#include <cstddef>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "skic/term.hpp"

namespace skic {

struct ReduceOptions {
  std::size_t fuel = 10000;
  // Tree-rewriting guards. Crossing either one is reported like fuel exhaustion.
  std::uint64_t max_size = std::uint64_t{1} << 18;
  std::size_t max_depth = 4096;
};

// Outcome of a bounded reduction. When `exhausted` is set, `term` is the input
// and says nothing about the normal form.
template <class T>
struct Reduced {
  T term;
  bool exhausted = false;
  std::size_t steps = 0;
};

namespace detail {

struct OutOfFuel {};

template <class Ptr>
class StepBudget {
 public:
  explicit StepBudget(const ReduceOptions& opt) : opt_(opt) {}

  void require_step() {
    if (steps_ >= opt_.fuel) throw OutOfFuel{};
    ++steps_;
  }

  const Ptr& check(const Ptr& t) const {
    if (t->size() > opt_.max_size || t->depth() > opt_.max_depth) throw OutOfFuel{};
    return t;
  }

  void enter() {
    if (++nesting_ > opt_.max_depth) throw OutOfFuel{};
  }
  void leave() { --nesting_; }

  std::size_t steps() const { return steps_; }

 private:
  ReduceOptions opt_;
  std::size_t steps_ = 0;
  std::size_t nesting_ = 0;
};

template <class Budget>
struct Nested {
  explicit Nested(Budget& b) : b_(b) { b_.enter(); }
  ~Nested() { b_.leave(); }
  Nested(const Nested&) = delete;
  Nested& operator=(const Nested&) = delete;
  Budget& b_;
};

class BetaMachine {
 public:
  explicit BetaMachine(const ReduceOptions& opt) : budget_(opt) {}

  TermPtr normalize(const TermPtr& t) {
    Nested guard(budget_);
    TermPtr w = whnf(t);
    if (const auto* l = w->as<Lam>()) {
      TermPtr body = normalize(l->body);
      return body == l->body ? w : budget_.check(lam(l->param, body));
    }
    auto [head, args] = unwind(w);
    bool changed = false;
    for (auto& a : args) {
      TermPtr n = normalize(a);
      changed |= n != a;
      a = std::move(n);
    }
    return changed ? budget_.check(apps(head, args)) : w;
  }

  std::size_t steps() const { return budget_.steps(); }

 private:
  TermPtr whnf(TermPtr t) {
    Nested guard(budget_);
    for (;;) {
      auto [head, args] = unwind(t);
      if (const auto* l = head->as<Lam>(); l != nullptr && !args.empty()) {
        budget_.require_step();
        std::set<std::string> fv = free_vars(*args[0]);
        TermPtr reduct = subst(l->body, l->param, args[0], fv);
        t = budget_.check(apps(reduct, {args.begin() + 1, args.end()}));
        continue;
      }
      const auto* p = head->as<Prim>();
      if (p == nullptr || args.size() < prim_arity(p->op)) return t;
      std::vector<Literal> lits;
      bool changed = false;
      for (std::size_t i = 0; i < prim_strict_operands(p->op); ++i) {
        TermPtr w = whnf(args[i]);
        changed |= w != args[i];
        args[i] = w;
        if (const auto* n = w->as<IntLit>()) {
          lits.push_back(*n);
        } else if (const auto* b = w->as<BoolLit>()) {
          lits.push_back(*b);
        }
      }
      if (lits.size() < prim_strict_operands(p->op)) return changed ? apps(head, args) : t;
      Delta d = fire_delta(p->op, lits);
      std::vector<TermPtr> rest(args.begin() + static_cast<std::ptrdiff_t>(prim_arity(p->op)), args.end());
      if (d.kind == Delta::Kind::Stuck) return changed ? apps(head, args) : t;
      budget_.require_step();
      TermPtr result = d.kind == Delta::Kind::Value ? literal_term(d.value) : args[d.operand];
      t = budget_.check(apps(result, rest));
    }
  }

  std::string fresh_name(const std::string& base, const std::set<std::string>& avoid, const Term& body) {
    std::string stem = base;
    if (auto us = stem.rfind('_'); us != std::string::npos && us + 1 < stem.size() &&
                                   stem.find_first_not_of("0123456789", us + 1) == std::string::npos) {
      stem.resize(us);
    }
    for (;;) {
      std::string candidate = stem + "_" + std::to_string(++fresh_);
      if (avoid.count(candidate) == 0 && !occurs_free(body, candidate)) return candidate;
    }
  }

  // Capture-avoiding substitution of `value` (free variables `fv`) for `name`.
  TermPtr subst(const TermPtr& t, const std::string& name, const TermPtr& value, const std::set<std::string>& fv) {
    if (const auto* v = t->as<Var>()) return v->name == name ? value : t;
    if (const auto* l = t->as<Lam>()) {
      if (l->param == name) return t;
      std::string param = l->param;
      TermPtr body = l->body;
      if (fv.count(param) != 0) {
        if (!occurs_free(*body, name)) return t;
        std::set<std::string> avoid = fv;
        avoid.insert(name);
        std::string renamed = fresh_name(param, avoid, *body);
        TermPtr rv = var(renamed);
        body = subst(body, param, rv, {renamed});
        param = renamed;
      }
      TermPtr nb = subst(body, name, value, fv);
      return nb == l->body && param == l->param ? t : lam(param, nb);
    }
    if (const auto* a = t->as<App>()) {
      TermPtr f = subst(a->fun, name, value, fv);
      TermPtr x = subst(a->arg, name, value, fv);
      return f == a->fun && x == a->arg ? t : app(f, x);
    }
    return t;
  }

  StepBudget<TermPtr> budget_;
  std::size_t fresh_ = 0;
};

}  // namespace detail

// Normal-order (leftmost-outermost) reduction with beta and primitive delta rules.
// Throws EvalError on 64-bit overflow.
inline Reduced<TermPtr> beta_reduce(const TermPtr& t, const ReduceOptions& opt = {}) {
  detail::BetaMachine m(opt);
  try {
    TermPtr nf = m.normalize(t);
    return {nf, false, m.steps()};
  } catch (const detail::OutOfFuel&) {
    return {t, true, m.steps()};
  }
}

inline Reduced<TermPtr> beta_reduce(const TermPtr& t, std::size_t fuel) {
  ReduceOptions opt;
  opt.fuel = fuel;
  return beta_reduce(t, opt);
}

// True when `t` contains a beta redex or a primitive application whose delta rule can fire.
inline bool has_redex(const Term& t) {
  if (const auto* l = t.as<Lam>()) return has_redex(*l->body);
  if (!t.is<App>()) return false;
  std::vector<const Term*> args;
  const Term* head = &t;
  while (const auto* a = head->as<App>()) {
    args.push_back(a->arg.get());
    head = a->fun.get();
  }
  std::reverse(args.begin(), args.end());
  if (head->is<Lam>()) return true;
  if (const auto* p = head->as<Prim>(); p != nullptr && args.size() >= prim_arity(p->op)) {
    std::vector<Literal> lits;
    for (std::size_t i = 0; i < prim_strict_operands(p->op); ++i) {
      if (const auto* n = args[i]->as<IntLit>()) lits.push_back(*n);
      if (const auto* b = args[i]->as<BoolLit>()) lits.push_back(*b);
    }
    if (lits.size() == prim_strict_operands(p->op)) {
      try {
        if (fire_delta(p->op, lits).kind != Delta::Kind::Stuck) return true;
      } catch (const EvalError&) {
        return true;
      }
    }
  }
  for (const Term* a : args) {
    if (has_redex(*a)) return true;
  }
  return false;
}

}  // namespace skic
