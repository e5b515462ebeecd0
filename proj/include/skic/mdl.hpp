#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "skic/equivalence.hpp"
#include "skic/gael.hpp"
#include "skic/lexer.hpp"

namespace skic {

enum class LengthUnit { Tokens, Bytes };

struct MdlConfig {
  double lambda_weight = 0.99;
  std::size_t beam_width = 8;
  ProbeConfig probe_config;
  ReduceOptions reduce;
  std::vector<RuleSet> rule_sets{kAllRuleSets.begin(), kAllRuleSets.end()};
  bool extraction_enabled = true;
  LengthUnit length_unit = LengthUnit::Tokens;

  void validate() const {
    if (!(lambda_weight >= 0.0 && lambda_weight <= 1.0)) throw Error("lambda_weight must lie in [0, 1]");
    if (beam_width == 0) throw Error("beam_width must be positive");
    if (rule_sets.empty()) throw Error("at least one rule set is required");
  }
};

struct TraceStep {
  std::string decision;
  double objective = 0.0;
};

struct ExtractionStep {
  std::string name;
  std::string body;
  std::size_t length_after = 0;
};

struct CompressionPlan {
  GaelProgram encoded;
  double objective = 0.0;
  std::size_t token_length = 0;
  double distance = 0.0;
  std::vector<TraceStep> trace;
  // Rule set picked for each source component (definitions, then main).
  std::vector<RuleSet> choices;
};

inline double combine_objective(double lambda, double length, double distance) {
  return lambda * length + (1.0 - lambda) * distance;
}

inline std::size_t gael_length(const std::string& text, LengthUnit unit) {
  return unit == LengthUnit::Bytes ? text.size() : tokenize(text, Dialect::Gael).length();
}

inline std::size_t gael_length(const GaelProgram& p, LengthUnit unit = LengthUnit::Tokens) {
  return gael_length(gael_print(p), unit);
}

// Share of probe tuples on which the two sides disagree; fuel-limited probes
// count half. No probes means no disagreement.
inline double semantic_distance(const TermPtr& p, const SkiPtr& s, const ProbeConfig& probes = {},
                                const ReduceOptions& opt = {}) {
  const Subject a = p;
  const Subject b = s;
  double miss = 0.0;
  std::size_t n = 0;
  for (const auto& probe : probe_tuples(probes, probe_arity(a, b, probes, opt))) {
    ++n;
    switch (compare_outcomes(run_probe(a, probe, opt), run_probe(b, probe, opt), opt)) {
      case Agreement::Same: break;
      case Agreement::Unknown: miss += 0.5; break;
      case Agreement::Differ: miss += 1.0; break;
    }
  }
  return n == 0 ? 0.0 : miss / static_cast<double>(n);
}

inline double mdl_objective(const SkiPtr& s, const TermPtr& p, const MdlConfig& cfg) {
  const double len = static_cast<double>(gael_length(gael_print(*s), cfg.length_unit));
  return combine_objective(cfg.lambda_weight, len, semantic_distance(p, s, cfg.probe_config, cfg.reduce));
}

namespace detail {

inline void collect_subterms(const SkiPtr& t, std::map<std::string, std::pair<SkiPtr, std::size_t>>& seen) {
  const auto* a = t->as<SkiApp>();
  if (a == nullptr) return;
  if (t->size() >= 3) {
    auto& slot = seen[gael_print(*t)];
    if (!slot.first) slot.first = t;
    ++slot.second;
  }
  collect_subterms(a->fun, seen);
  collect_subterms(a->arg, seen);
}

inline SkiPtr replace_subterm(const SkiPtr& t, const SkiTerm& target, const SkiPtr& with) {
  if (t->size() == target.size() && *t == target) return with;
  const auto* a = t->as<SkiApp>();
  if (a == nullptr || t->size() < target.size()) return t;
  SkiPtr f = replace_subterm(a->fun, target, with);
  SkiPtr x = replace_subterm(a->arg, target, with);
  if (f == a->fun && x == a->arg) return t;
  return sapp(std::move(f), std::move(x));
}

inline bool contains_subterm(const SkiTerm& t, const SkiTerm& target) {
  if (t.size() < target.size()) return false;
  if (t.size() == target.size()) return t == target;
  const auto* a = t.as<SkiApp>();
  return a != nullptr && (contains_subterm(*a->fun, target) || contains_subterm(*a->arg, target));
}

inline std::string fresh_definition_name(const GaelProgram& p, std::size_t& counter) {
  for (;;) {
    std::string name = "sub" + std::to_string(counter++);
    if (p.find(name) == nullptr) return name;
  }
}

inline GaelProgram apply_extraction(const GaelProgram& p, const SkiPtr& target, const std::string& name) {
  GaelProgram out;
  const SkiPtr ref = sfree(name);
  bool placed = false;
  auto place = [&] {
    if (!placed) {
      out.defs.push_back({name, target});
      placed = true;
    }
  };
  for (const auto& d : p.defs) {
    if (contains_subterm(*d.body, *target)) place();
    out.defs.push_back({d.name, replace_subterm(d.body, *target, ref)});
  }
  if (p.main) {
    if (contains_subterm(*p.main, *target)) place();
    out.main = replace_subterm(p.main, *target, ref);
  }
  return out;
}

}  // namespace detail

// Repeatedly names a repeated subterm (at least 3 nodes) when that strictly
// shortens the program text. Candidates are tried by frequency, then by size of
// the saving, then by their printed form.
inline GaelProgram extract_common_subterms(GaelProgram prog, const MdlConfig& cfg = {},
                                           std::vector<ExtractionStep>* log = nullptr) {
  std::size_t counter = 0;
  std::size_t current = gael_length(prog, cfg.length_unit);
  for (;;) {
    std::map<std::string, std::pair<SkiPtr, std::size_t>> seen;
    for (const auto& d : prog.defs) detail::collect_subterms(d.body, seen);
    if (prog.main) detail::collect_subterms(prog.main, seen);

    struct Candidate {
      std::string text;
      SkiPtr term;
      std::size_t count;
      std::size_t length;
    };
    std::vector<Candidate> candidates;
    for (auto& [text, entry] : seen) {
      if (entry.second >= 2) candidates.push_back({text, entry.first, entry.second, gael_length(text, cfg.length_unit)});
    }
    std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
      if (a.count != b.count) return a.count > b.count;
      if (a.count * a.length != b.count * b.length) return a.count * a.length > b.count * b.length;
      return a.text < b.text;
    });

    bool improved = false;
    for (const auto& c : candidates) {
      std::size_t probe_counter = counter;
      const std::string name = detail::fresh_definition_name(prog, probe_counter);
      GaelProgram next = detail::apply_extraction(prog, c.term, name);
      const std::size_t len = gael_length(next, cfg.length_unit);
      if (len < current) {
        prog = std::move(next);
        current = len;
        counter = probe_counter;
        improved = true;
        if (log != nullptr) log->push_back({name, c.text, len});
        break;
      }
    }
    if (!improved) return prog;
  }
}

namespace detail {

// Per-component encodings and distances, computed once per rule set. A
// component's distance is judged on its inlined form, with references to
// earlier definitions resolved through encodings under the same rule set, so
// it depends on that component's rule set only.
class PlanSearch {
 public:
  PlanSearch(const Program& p, const MdlConfig& cfg) : program_(p), cfg_(cfg) {
    cfg_.validate();
    closed_ = closed_definitions(p);
    for (const auto& d : p.defs) names_.push_back(d.name);
    components_ = p.defs.size() + (p.main ? 1 : 0);
  }

  std::size_t components() const { return components_; }

  std::string component_name(std::size_t i) const { return i < names_.size() ? names_[i] : std::string("main"); }

  const SkiPtr& encoding(std::size_t i, RuleSet r) {
    auto key = std::make_pair(i, r);
    auto it = encodings_.find(key);
    if (it != encodings_.end()) return it->second;
    const TermPtr& body = i < names_.size() ? program_.defs[i].body : program_.main;
    std::set<std::string> globals(names_.begin(), names_.begin() + static_cast<std::ptrdiff_t>(std::min(i, names_.size())));
    return encodings_.emplace(key, bracket_abstract(*body, r, globals)).first->second;
  }

  double distance(std::size_t i, RuleSet r) {
    auto key = std::make_pair(i, r);
    auto it = distances_.find(key);
    if (it != distances_.end()) return it->second;
    const std::size_t upto = std::min(i, names_.size());
    TermPtr source = i < names_.size() ? closed_[i] : close_over(program_, closed_, program_.main, upto);
    SkiPtr encoded = encoding(i, r);
    for (std::size_t j = upto; j-- > 0;) encoded = ski_substitute(encoded, names_[j], closed_encoding(j, r));
    const double d = semantic_distance(source, encoded, cfg_.probe_config, cfg_.reduce);
    distances_.emplace(key, d);
    return d;
  }

  GaelProgram assemble(const std::vector<RuleSet>& choice) {
    GaelProgram out;
    for (std::size_t i = 0; i < names_.size(); ++i) out.defs.push_back({names_[i], encoding(i, choice[i])});
    if (program_.main) out.main = encoding(names_.size(), choice[names_.size()]);
    return out;
  }

  double mean_distance(const std::vector<RuleSet>& choice) {
    if (components_ == 0) return 0.0;
    double total = 0.0;
    for (std::size_t i = 0; i < components_; ++i) total += distance(i, choice[i]);
    return total / static_cast<double>(components_);
  }

  CompressionPlan evaluate(const std::vector<RuleSet>& choice) {
    CompressionPlan plan;
    plan.encoded = assemble(choice);
    plan.choices = choice;
    plan.token_length = gael_length(plan.encoded, cfg_.length_unit);
    plan.distance = mean_distance(choice);
    plan.objective = combine_objective(cfg_.lambda_weight, static_cast<double>(plan.token_length), plan.distance);
    return plan;
  }

 private:
  const SkiPtr& closed_encoding(std::size_t j, RuleSet r) {
    auto key = std::make_pair(j, r);
    auto it = closed_encodings_.find(key);
    if (it != closed_encodings_.end()) return it->second;
    SkiPtr body = encoding(j, r);
    for (std::size_t k = j; k-- > 0;) body = ski_substitute(body, names_[k], closed_encoding(k, r));
    return closed_encodings_.emplace(key, std::move(body)).first->second;
  }

  const Program& program_;
  MdlConfig cfg_;
  std::vector<TermPtr> closed_;
  std::vector<std::string> names_;
  std::size_t components_ = 0;
  std::map<std::pair<std::size_t, RuleSet>, SkiPtr> encodings_;
  std::map<std::pair<std::size_t, RuleSet>, SkiPtr> closed_encodings_;
  std::map<std::pair<std::size_t, RuleSet>, double> distances_;
};

}  // namespace detail

// Beam search over one rule set per component (definitions in order, then
// main). Partial plans are scored as complete plans whose undecided components
// use the first configured rule set. Ties go to the lexicographically smaller
// program text.
inline CompressionPlan compress_program(const Program& p, const MdlConfig& cfg = {}) {
  detail::PlanSearch search(p, cfg);
  const std::size_t n = search.components();
  const RuleSet baseline = cfg.rule_sets.front();

  struct Partial {
    std::vector<RuleSet> choice;
    double objective;
    std::string text;
  };
  auto score = [&](std::vector<RuleSet> prefix) {
    std::vector<RuleSet> full = prefix;
    full.resize(n, baseline);
    CompressionPlan plan = search.evaluate(full);
    return Partial{std::move(prefix), plan.objective, gael_print(plan.encoded)};
  };
  auto better = [](const Partial& a, const Partial& b) {
    if (a.objective != b.objective) return a.objective < b.objective;
    return a.text < b.text;
  };

  std::vector<Partial> beam{score({})};
  for (std::size_t step = 0; step < n; ++step) {
    std::vector<Partial> next;
    for (const auto& b : beam) {
      for (RuleSet r : cfg.rule_sets) {
        auto prefix = b.choice;
        prefix.push_back(r);
        next.push_back(score(std::move(prefix)));
      }
    }
    std::sort(next.begin(), next.end(), better);
    if (next.size() > cfg.beam_width) next.resize(cfg.beam_width);
    beam = std::move(next);
  }

  CompressionPlan plan = search.evaluate(beam.front().choice);
  std::vector<RuleSet> prefix;
  plan.trace.push_back({"start " + std::string(rule_set_name(baseline)), score({}).objective});
  for (std::size_t i = 0; i < n; ++i) {
    prefix.push_back(plan.choices[i]);
    plan.trace.push_back({search.component_name(i) + " " + std::string(rule_set_name(plan.choices[i])),
                          score(prefix).objective});
  }

  if (cfg.extraction_enabled) {
    std::vector<ExtractionStep> steps;
    plan.encoded = extract_common_subterms(plan.encoded, cfg, &steps);
    for (const auto& s : steps) {
      plan.token_length = s.length_after;
      plan.trace.push_back({"extract " + s.name + " := " + s.body,
                            combine_objective(cfg.lambda_weight, static_cast<double>(s.length_after), plan.distance)});
    }
    plan.objective = combine_objective(cfg.lambda_weight, static_cast<double>(plan.token_length), plan.distance);
  }
  return plan;
}

inline CompressionPlan compress_term(const TermPtr& p, const MdlConfig& cfg = {}) {
  Program prog;
  prog.main = p;
  return compress_program(prog, cfg);
}

}  // namespace skic
