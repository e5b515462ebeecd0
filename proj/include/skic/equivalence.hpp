#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "skic/ski.hpp"

namespace skic {

// Arguments fed to both sides of an equivalence check.
struct ProbeConfig {
  std::vector<std::int64_t> values{-2, -1, 0, 1, 2, 3};
  // Inferred from the subjects' leading lambdas when unset.
  std::optional<std::size_t> arity;
  std::size_t max_tuples = 216;
};

using Probe = std::vector<std::int64_t>;

// Cartesian product values^arity in lexicographic order. Above the cap, tuples
// are taken at evenly spaced indices of that order so every position varies.
inline std::vector<Probe> probe_tuples(const ProbeConfig& cfg, std::size_t arity) {
  std::vector<Probe> out;
  if (cfg.max_tuples == 0) return out;
  if (arity == 0) return {Probe{}};
  const std::uint64_t base = cfg.values.size();
  if (base == 0) return out;
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < arity; ++i) {
    if (total > (std::uint64_t{1} << 62) / base) throw Error("probe arity too large");
    total *= base;
  }
  const std::uint64_t count = std::min<std::uint64_t>(total, cfg.max_tuples);
  out.reserve(count);
  for (std::uint64_t k = 0; k < count; ++k) {
    auto index = static_cast<std::uint64_t>(static_cast<unsigned __int128>(k) * total / count);
    Probe p(arity);
    for (std::size_t pos = arity; pos-- > 0;) {
      p[pos] = cfg.values[index % base];
      index /= base;
    }
    out.push_back(std::move(p));
  }
  return out;
}

// Either side of a comparison: a lambda term or a combinator term.
using Subject = std::variant<TermPtr, SkiPtr>;

struct Outcome {
  enum class Kind { Normal, Exhausted, Error } kind = Kind::Normal;
  Subject value;
  std::string error;
};

inline Outcome run_probe(const Subject& subject, const Probe& probe, const ReduceOptions& opt) {
  Outcome out;
  try {
    if (const auto* t = std::get_if<TermPtr>(&subject)) {
      std::vector<TermPtr> args;
      for (auto v : probe) args.push_back(int_lit(v));
      auto r = beta_reduce(apps(*t, args), opt);
      out.kind = r.exhausted ? Outcome::Kind::Exhausted : Outcome::Kind::Normal;
      out.value = r.term;
    } else {
      std::vector<SkiPtr> args;
      for (auto v : probe) args.push_back(sint(v));
      auto r = ski_reduce(sapps(std::get<SkiPtr>(subject), args), opt);
      out.kind = r.exhausted ? Outcome::Kind::Exhausted : Outcome::Kind::Normal;
      out.value = r.term;
    }
  } catch (const EvalError& e) {
    out.kind = Outcome::Kind::Error;
    out.error = e.what();
  }
  return out;
}

enum class Agreement { Same, Differ, Unknown };

namespace detail {

inline std::optional<Literal> as_literal(const Subject& s) {
  if (const auto* t = std::get_if<TermPtr>(&s)) {
    if (const auto* i = (*t)->as<IntLit>()) return *i;
    if (const auto* b = (*t)->as<BoolLit>()) return *b;
  } else {
    const auto& k = std::get<SkiPtr>(s);
    if (const auto* i = k->as<IntLit>()) return *i;
    if (const auto* b = k->as<BoolLit>()) return *b;
  }
  return std::nullopt;
}

}  // namespace detail

// Compares two normal forms. Combinator forms compare structurally; as soon as a
// lambda term is involved both sides are brought to beta-eta normal lambda form
// and compared up to alpha-renaming.
inline Agreement compare_outcomes(const Outcome& a, const Outcome& b, const ReduceOptions& opt) {
  using K = Outcome::Kind;
  if (a.kind == K::Exhausted || b.kind == K::Exhausted) return Agreement::Unknown;
  if (a.kind == K::Error || b.kind == K::Error) {
    return a.kind == b.kind && a.error == b.error ? Agreement::Same : Agreement::Differ;
  }
  auto la = detail::as_literal(a.value);
  auto lb = detail::as_literal(b.value);
  if (la || lb) return la && lb && *la == *lb ? Agreement::Same : Agreement::Differ;
  const auto* sa = std::get_if<SkiPtr>(&a.value);
  const auto* sb = std::get_if<SkiPtr>(&b.value);
  if (sa != nullptr && sb != nullptr) return **sa == **sb ? Agreement::Same : Agreement::Differ;
  auto as_lambda = [&](const Subject& s) -> std::optional<TermPtr> {
    if (const auto* t = std::get_if<TermPtr>(&s)) return *t;
    auto r = beta_reduce(ski_decode(*std::get<SkiPtr>(s)), opt);
    if (r.exhausted) return std::nullopt;
    return r.term;
  };
  std::optional<TermPtr> ta;
  std::optional<TermPtr> tb;
  try {
    ta = as_lambda(a.value);
    tb = as_lambda(b.value);
  } catch (const EvalError&) {
    return Agreement::Unknown;
  }
  if (!ta || !tb) return Agreement::Unknown;
  return alpha_equivalent(*eta_normalize(*ta), *eta_normalize(*tb)) ? Agreement::Same : Agreement::Differ;
}

// Leading lambda count of the beta-normal form (combinator terms are decoded
// first). Falls back to the syntactic count when the normal form is out of reach.
inline std::size_t infer_arity(const Subject& s, const ReduceOptions& opt = {}) {
  const auto* t = std::get_if<TermPtr>(&s);
  const std::size_t syntactic = t != nullptr ? leading_lambdas(**t) : 0;
  try {
    auto r = beta_reduce(t != nullptr ? *t : ski_decode(*std::get<SkiPtr>(s)), opt);
    return r.exhausted ? syntactic : std::max(syntactic, leading_lambdas(*r.term));
  } catch (const EvalError&) {
    return syntactic;
  }
}

inline std::size_t probe_arity(const Subject& a, const Subject& b, const ProbeConfig& cfg, const ReduceOptions& opt) {
  if (cfg.arity) return *cfg.arity;
  const bool a_term = std::holds_alternative<TermPtr>(a);
  const bool b_term = std::holds_alternative<TermPtr>(b);
  if (a_term && !b_term) return infer_arity(a, opt);
  if (b_term && !a_term) return infer_arity(b, opt);
  return std::max(infer_arity(a, opt), infer_arity(b, opt));
}

struct Verdict {
  enum class Kind { Equal, Different, Unknown } kind = Kind::Equal;
  Probe witness;  // first mismatching tuple when Different
  std::size_t probes = 0;
  std::size_t unknown = 0;
};

inline std::string_view verdict_name(Verdict::Kind k) {
  switch (k) {
    case Verdict::Kind::Equal: return "equal";
    case Verdict::Kind::Different: return "different";
    case Verdict::Kind::Unknown: return "unknown";
  }
  return "?";
}

// Applies both sides to every probe tuple and compares the normal forms.
// The witness is the lowest-index mismatching tuple; fuel problems without a
// mismatch yield Unknown.
inline Verdict behavioral_equal(const Subject& a, const Subject& b, const ProbeConfig& cfg = {},
                                const ReduceOptions& opt = {}) {
  Verdict v;
  for (const auto& probe : probe_tuples(cfg, probe_arity(a, b, cfg, opt))) {
    ++v.probes;
    switch (compare_outcomes(run_probe(a, probe, opt), run_probe(b, probe, opt), opt)) {
      case Agreement::Same: break;
      case Agreement::Unknown: ++v.unknown; break;
      case Agreement::Differ:
        v.kind = Verdict::Kind::Different;
        v.witness = probe;
        return v;
    }
  }
  if (v.unknown > 0) v.kind = Verdict::Kind::Unknown;
  return v;
}

}  // namespace skic
