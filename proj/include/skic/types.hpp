#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "skic/term.hpp"

namespace skic {

// The type space. Declaration order is the tie-breaking order.
enum class TypeTag : std::uint8_t { Int, Real, Bool, Func };

inline constexpr std::array<TypeTag, 4> kAllTypeTags = {TypeTag::Int, TypeTag::Real, TypeTag::Bool, TypeTag::Func};

inline std::string_view type_tag_name(TypeTag t) {
  switch (t) {
    case TypeTag::Int: return "Int";
    case TypeTag::Real: return "Real";
    case TypeTag::Bool: return "Bool";
    case TypeTag::Func: return "Func";
  }
  return "?";
}

inline std::optional<TypeTag> type_tag_from_name(std::string_view s) {
  for (TypeTag t : kAllTypeTags) {
    if (type_tag_name(t) == s) return t;
  }
  return std::nullopt;
}

inline bool is_numeric(TypeTag t) { return t == TypeTag::Int || t == TypeTag::Real; }

using Assignment = std::vector<TypeTag>;

struct ContextEnv {
  std::map<std::string, TypeTag> bindings;
};

struct TypeWeights {
  double arithmetic = 1.0;
  double equality = 1.0;
  double condition = 2.0;
  double env_mismatch = 4.0;
  double binder = 1.0;
};

enum class FactorKind {
  NumericAgree,  // clique (and the fixed tag, if any) share one tag in {Int, Real}
  SameTag,       // clique (and the fixed tag, if any) share one tag
  IsTag,         // every clique member equals the fixed tag
};

struct Factor {
  std::vector<std::size_t> clique;
  double weight = 1.0;
  FactorKind kind = FactorKind::SameTag;
  std::optional<TypeTag> fixed;

  // `values` is the assignment restricted to the clique, in clique order.
  bool violated(std::span<const TypeTag> values) const {
    std::optional<TypeTag> common = fixed;
    for (TypeTag v : values) {
      if (kind == FactorKind::IsTag) {
        if (v != *fixed) return true;
        continue;
      }
      if (!common) common = v;
      if (v != *common) return true;
    }
    return kind == FactorKind::NumericAgree && common && !is_numeric(*common);
  }
};

// Factor graph over inference variables 0..variable_count-1.
struct ConstraintSet {
  std::size_t variable_count = 0;
  std::vector<Factor> factors;

  void validate() const {
    for (const auto& f : factors) {
      if (f.clique.empty()) throw Error("constraint factor with empty clique");
      if (!(f.weight > 0.0)) throw Error("constraint factor weight must be positive");
      if ((f.kind == FactorKind::IsTag) && !f.fixed) throw Error("IsTag factor needs a fixed tag");
      for (auto v : f.clique) {
        if (v >= variable_count) throw Error("constraint factor references undeclared variable " + std::to_string(v));
      }
    }
  }
};

// Sum of weights of violated factors.
inline double energy(const Assignment& assignment, const ConstraintSet& cs) {
  double e = 0.0;
  std::vector<TypeTag> restricted;
  for (const auto& f : cs.factors) {
    restricted.clear();
    for (auto v : f.clique) {
      if (v >= assignment.size()) throw Error("energy: assignment is missing variable " + std::to_string(v));
      restricted.push_back(assignment[v]);
    }
    if (f.violated(restricted)) e += f.weight;
  }
  return e;
}

struct Candidate {
  Assignment assignment;
  double energy = 0.0;
  double probability = 0.0;
};

struct TypePosterior {
  std::vector<Candidate> support;
};

struct PosteriorOptions {
  std::size_t max_variables = 8;
  // Constant added to every candidate's energy; the distribution must not move.
  double energy_offset = 0.0;
};

// Boltzmann distribution over the given candidates, p ~ exp(-E), normalized
// after subtracting the minimum energy.
inline TypePosterior posterior_from_energies(std::vector<Assignment> assignments, const std::vector<double>& energies) {
  if (assignments.size() != energies.size()) throw Error("posterior: assignment/energy count mismatch");
  TypePosterior p;
  if (energies.empty()) return p;
  const double lowest = *std::min_element(energies.begin(), energies.end());
  double z = 0.0;
  for (double e : energies) z += std::exp(-(e - lowest));
  p.support.reserve(energies.size());
  for (std::size_t i = 0; i < energies.size(); ++i) {
    p.support.push_back(Candidate{std::move(assignments[i]), energies[i], std::exp(-(energies[i] - lowest)) / z});
  }
  return p;
}

// Exact enumeration of all |Γ|^n joint assignments in lexicographic order.
inline TypePosterior posterior(const ConstraintSet& cs, const PosteriorOptions& opt = {}) {
  cs.validate();
  const std::size_t n = cs.variable_count;
  if (n > opt.max_variables) {
    throw Error("posterior: too many variables (" + std::to_string(n) + " > " + std::to_string(opt.max_variables) + ")");
  }
  std::vector<Assignment> assignments;
  std::vector<double> energies;
  Assignment cur(n, TypeTag::Int);
  for (;;) {
    assignments.push_back(cur);
    energies.push_back(energy(cur, cs) + opt.energy_offset);
    std::size_t pos = n;
    while (pos > 0) {
      --pos;
      auto next = static_cast<std::uint8_t>(static_cast<std::uint8_t>(cur[pos]) + 1);
      if (next < kAllTypeTags.size()) {
        cur[pos] = static_cast<TypeTag>(next);
        break;
      }
      cur[pos] = TypeTag::Int;
      if (pos == 0) return posterior_from_energies(std::move(assignments), energies);
    }
    if (n == 0) return posterior_from_energies(std::move(assignments), energies);
  }
}

// Highest-probability assignment; exact ties go to the lexicographically smaller one.
inline Assignment map_assignment(const TypePosterior& p) {
  if (p.support.empty()) throw Error("map_assignment: empty posterior");
  const Candidate* best = &p.support.front();
  for (const auto& c : p.support) {
    if (c.probability > best->probability ||
        (c.probability == best->probability && c.assignment < best->assignment)) {
      best = &c;
    }
  }
  return best->assignment;
}

// ---------------------------------------------------------------------------
// Constraint extraction

struct InferenceVar {
  std::string label;  // identifier name or literal text, suffixed with @occurrence
};

struct ConstraintProblem {
  std::vector<InferenceVar> variables;
  ConstraintSet constraints;
};

namespace detail {

// Type information flowing out of a subterm.
struct TypeSource {
  enum class Kind { None, Variable, Fixed } kind = Kind::None;
  std::size_t variable = 0;
  TypeTag tag = TypeTag::Int;
  bool from_env = false;

  static TypeSource var(std::size_t v) { return {Kind::Variable, v, TypeTag::Int, false}; }
  static TypeSource fixed(TypeTag t, bool env = false) { return {Kind::Fixed, 0, t, env}; }
};

// Walks a term left to right, numbering untyped leaves. The same traversal
// drives both constraint extraction and operator specialization, so variable
// indices line up between the two.
class TypeWalker {
 public:
  TypeWalker(const ContextEnv& env, const TypeWeights& w, const Assignment* assignment)
      : env_(env), w_(w), assignment_(assignment) {}

  ConstraintProblem take_problem() {
    problem_.constraints.variable_count = problem_.variables.size();
    return std::move(problem_);
  }

  // Returns the rebuilt term (specialized when an assignment is given).
  TermPtr walk(const TermPtr& t, TypeSource& out) {
    if (const auto* v = t->as<Var>()) {
      if (auto it = env_.bindings.find(v->name); it != env_.bindings.end()) {
        out = TypeSource::fixed(it->second, true);
        return t;
      }
      std::size_t idx = new_variable(v->name);
      std::string key = binder_key(v->name);
      if (auto prev = last_occurrence_.find(key); prev != last_occurrence_.end()) {
        add_factor({prev->second, idx}, w_.binder, FactorKind::SameTag, std::nullopt);
      }
      last_occurrence_[key] = idx;
      out = TypeSource::var(idx);
      return t;
    }
    if (const auto* i = t->as<IntLit>()) {
      out = TypeSource::var(new_variable(std::to_string(i->value)));
      return t;
    }
    if (t->is<BoolLit>()) {
      out = TypeSource::fixed(TypeTag::Bool);
      return t;
    }
    if (t->is<Prim>()) {
      out = TypeSource::fixed(TypeTag::Func);
      return t;
    }
    if (const auto* l = t->as<Lam>()) {
      scopes_.push_back({l->param, next_binder_++});
      TypeSource ignored;
      TermPtr body = walk(l->body, ignored);
      scopes_.pop_back();
      out = TypeSource::fixed(TypeTag::Func);
      return body == l->body ? t : lam(l->param, body);
    }
    auto [head, args] = unwind(t);
    TypeSource head_src;
    TermPtr new_head = walk(head, head_src);
    std::vector<TypeSource> srcs(args.size());
    bool changed = new_head != head;
    for (std::size_t i = 0; i < args.size(); ++i) {
      TermPtr a = walk(args[i], srcs[i]);
      changed |= a != args[i];
      args[i] = a;
    }
    out = TypeSource{};
    if (const auto* p = head->as<Prim>()) {
      if (is_arithmetic(p->op) && args.size() >= 2) {
        agree(srcs[0], srcs[1], FactorKind::NumericAgree, w_.arithmetic);
        if (args.size() == 2) out = srcs[0];
        if (p->op == PrimOp::Add && assignment_ != nullptr) {
          auto a = resolve(srcs[0]);
          auto b = resolve(srcs[1]);
          if (a && b && *a == *b && is_numeric(*a)) {
            new_head = skic::prim(*a == TypeTag::Int ? PrimOp::AddZ : PrimOp::AddR);
            changed = true;
          }
        }
      } else if (p->op == PrimOp::Eq && args.size() >= 2) {
        agree(srcs[0], srcs[1], FactorKind::SameTag, w_.equality);
        if (args.size() == 2) out = TypeSource::fixed(TypeTag::Bool);
      } else if (p->op == PrimOp::If && args.size() >= 3) {
        if (srcs[0].kind == TypeSource::Kind::Variable) {
          add_factor({srcs[0].variable}, w_.condition, FactorKind::IsTag, TypeTag::Bool);
        }
        if (args.size() == 3) out = srcs[1];
      } else {
        out = TypeSource::fixed(TypeTag::Func);
      }
    }
    return changed ? apps(new_head, args) : t;
  }

 private:
  std::size_t new_variable(const std::string& text) {
    std::size_t idx = problem_.variables.size();
    problem_.variables.push_back(InferenceVar{text + "@" + std::to_string(idx)});
    return idx;
  }

  std::string binder_key(const std::string& name) const {
    for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
      if (it->first == name) return "#" + std::to_string(it->second);
    }
    return name;
  }

  void add_factor(std::vector<std::size_t> clique, double weight, FactorKind kind, std::optional<TypeTag> fixed) {
    problem_.constraints.factors.push_back(Factor{std::move(clique), weight, kind, fixed});
  }

  // Emits the factor relating two operand sources; constant-only pairs carry no variable.
  void agree(const TypeSource& a, const TypeSource& b, FactorKind kind, double weight) {
    using K = TypeSource::Kind;
    if (a.kind == K::Variable && b.kind == K::Variable) {
      add_factor({a.variable, b.variable}, weight, kind, std::nullopt);
      return;
    }
    const TypeSource* v = a.kind == K::Variable ? &a : b.kind == K::Variable ? &b : nullptr;
    if (v == nullptr) return;
    const TypeSource& other = v == &a ? b : a;
    if (other.kind == K::Fixed) {
      add_factor({v->variable}, other.from_env ? w_.env_mismatch : weight, kind, other.tag);
    } else if (kind == FactorKind::NumericAgree) {
      add_factor({v->variable}, weight, kind, std::nullopt);
    }
  }

  std::optional<TypeTag> resolve(const TypeSource& s) const {
    if (s.kind == TypeSource::Kind::Fixed) return s.tag;
    if (s.kind == TypeSource::Kind::Variable && s.variable < assignment_->size()) return (*assignment_)[s.variable];
    return std::nullopt;
  }

  const ContextEnv& env_;
  TypeWeights w_;
  const Assignment* assignment_;
  ConstraintProblem problem_;
  std::vector<std::pair<std::string, std::size_t>> scopes_;
  std::size_t next_binder_ = 0;
  std::map<std::string, std::size_t> last_occurrence_;
};

}  // namespace detail

inline ConstraintProblem build_constraints(const TermPtr& t, const ContextEnv& env = {}, const TypeWeights& w = {}) {
  detail::TypeWalker walker(env, w, nullptr);
  detail::TypeSource ignored;
  walker.walk(t, ignored);
  return walker.take_problem();
}

// Rewrites each #add whose operands are both MAP-typed Int (Real) to #addZ (#addR).
inline TermPtr specialize_operators(const TermPtr& t, const Assignment& assignment, const ContextEnv& env = {}) {
  detail::TypeWalker walker(env, TypeWeights{}, &assignment);
  detail::TypeSource ignored;
  return walker.walk(t, ignored);
}

// MAP assignment computed per connected component of the factor graph. Exact:
// components are independent, and lexicographic tie-breaking factorizes.
inline Assignment map_by_components(const ConstraintSet& cs, const PosteriorOptions& opt = {}) {
  cs.validate();
  const std::size_t n = cs.variable_count;
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& f : cs.factors) {
    for (std::size_t i = 1; i < f.clique.size(); ++i) parent[find(f.clique[i])] = find(f.clique[0]);
  }
  std::map<std::size_t, std::vector<std::size_t>> components;
  for (std::size_t v = 0; v < n; ++v) components[find(v)].push_back(v);

  Assignment result(n, TypeTag::Int);
  for (const auto& [root, members] : components) {
    std::map<std::size_t, std::size_t> local;
    for (std::size_t i = 0; i < members.size(); ++i) local[members[i]] = i;
    ConstraintSet sub;
    sub.variable_count = members.size();
    for (const auto& f : cs.factors) {
      if (find(f.clique[0]) != root) continue;
      Factor g = f;
      for (auto& v : g.clique) v = local.at(v);
      sub.factors.push_back(std::move(g));
    }
    Assignment best = map_assignment(posterior(sub, opt));
    for (std::size_t i = 0; i < members.size(); ++i) result[members[i]] = best[i];
  }
  return result;
}

}  // namespace skic
