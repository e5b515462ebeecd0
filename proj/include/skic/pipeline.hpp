#pragma once

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "skic/equivalence.hpp"
#include "skic/gael.hpp"
#include "skic/mdl.hpp"
#include "skic/metrics.hpp"
#include "skic/parser.hpp"
#include "skic/printer.hpp"
#include "skic/types.hpp"

namespace skic {

inline constexpr int kReportSchemaVersion = 1;

enum class Target { Gael, Lambda, Pseudocode };

inline std::string_view target_name(Target t) {
  switch (t) {
    case Target::Gael: return "gael";
    case Target::Lambda: return "lambda";
    case Target::Pseudocode: return "pseudo";
  }
  return "?";
}

inline std::optional<Target> target_from_name(std::string_view s) {
  for (Target t : {Target::Gael, Target::Lambda, Target::Pseudocode}) {
    if (target_name(t) == s) return t;
  }
  return std::nullopt;
}

class IncompatibleTerm : public Error {
 public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Target rendering

namespace detail {

inline std::string pseudo_atom(const SkiTerm& t) {
  if (const auto* c = t.as<Comb>()) return std::string(1, comb_char(*c));
  if (const auto* p = t.as<Prim>()) return std::string(prim_name(p->op));
  if (const auto* i = t.as<IntLit>()) return std::to_string(i->value);
  if (const auto* b = t.as<BoolLit>()) return b->value ? "true" : "false";
  return t.as<FreeVar>()->name;
}

inline void pseudo_ski(const SkiPtr& t, std::size_t indent, std::string& out) {
  auto [head, args] = unwind(t);
  if (args.empty()) {
    out += pseudo_atom(*t) + "\n";
    return;
  }
  out += "call " + pseudo_atom(*head) + "\n";
  for (const auto& a : args) {
    out += std::string(indent + 2, ' ') + "with ";
    pseudo_ski(a, indent + 2, out);
  }
}

inline void pseudo_term(const TermPtr& t, std::size_t indent, std::string& out) {
  if (const auto* l = t->as<Lam>()) {
    out += "function " + l->param + "\n" + std::string(indent + 2, ' ') + "return ";
    pseudo_term(l->body, indent + 2, out);
    return;
  }
  auto [head, args] = unwind(t);
  auto atom = [](const Term& a) -> std::string {
    if (const auto* v = a.as<Var>()) return v->name;
    if (const auto* p = a.as<Prim>()) return std::string(prim_name(p->op));
    if (const auto* i = a.as<IntLit>()) return std::to_string(i->value);
    return a.as<BoolLit>()->value ? "true" : "false";
  };
  if (args.empty()) {
    out += atom(*t) + "\n";
    return;
  }
  if (head->is<Lam>()) {
    out += "call the ";
    pseudo_term(head, indent, out);
  } else {
    out += "call " + atom(*head) + "\n";
  }
  for (const auto& a : args) {
    out += std::string(indent + 2, ' ') + "with ";
    pseudo_term(a, indent + 2, out);
  }
}

inline SkiPtr lambda_free(const TermPtr& t) {
  return std::visit(
      [&](const auto& n) -> SkiPtr {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, Lam>) {
          throw IncompatibleTerm("lambda abstraction cannot be written as GAEL");
        } else if constexpr (std::is_same_v<N, Var>) {
          return sfree(n.name);
        } else if constexpr (std::is_same_v<N, App>) {
          return sapp(lambda_free(n.fun), lambda_free(n.arg));
        } else {
          return std::make_shared<const SkiTerm>(n);
        }
      },
      t->node());
}

}  // namespace detail

inline std::string emit_target(const SkiPtr& t, Target target) {
  switch (target) {
    case Target::Gael: return gael_print(*t);
    case Target::Lambda: return pretty_print(*ski_decode(*t));
    case Target::Pseudocode: {
      std::string out;
      detail::pseudo_ski(t, 0, out);
      return out;
    }
  }
  return {};
}

inline std::string emit_target(const TermPtr& t, Target target) {
  switch (target) {
    case Target::Gael: return gael_print(*detail::lambda_free(t));
    case Target::Lambda: return pretty_print(*t);
    case Target::Pseudocode: {
      std::string out;
      detail::pseudo_term(t, 0, out);
      return out;
    }
  }
  return {};
}

inline std::string emit_program(const GaelProgram& p, Target target) {
  if (target == Target::Gael) return gael_print(p);
  std::string out;
  for (const auto& d : p.defs) {
    if (target == Target::Lambda) {
      out += d.name + " := " + emit_target(d.body, target) + ";\n";
    } else {
      out += "procedure " + d.name + "\n  return ";
      detail::pseudo_ski(d.body, 2, out);
    }
  }
  if (p.main) {
    if (target == Target::Lambda) {
      out += emit_target(p.main, target) + "\n";
    } else {
      out += "main\n  return ";
      detail::pseudo_ski(p.main, 2, out);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Single-program pipeline

struct PipelineConfig {
  MdlConfig mdl;
  double c = kDefaultBoundConstant;
  bool infer_types = true;
  std::vector<Target> emit{Target::Gael};
};

struct ComponentTypes {
  std::string component;
  std::vector<std::pair<std::string, TypeTag>> assignment;
  bool specialized = false;
};

struct PipelineReport {
  std::string program_id;
  std::size_t p_tokens = 0;
  std::size_t s_tokens = 0;
  double cr = 0.0;
  DensityReport density_source;
  DensityReport density_gael;
  Verdict::Kind equivalence = Verdict::Kind::Equal;
  double objective = 0.0;
  std::vector<ComponentTypes> map_types;
  std::vector<std::pair<std::string, double>> timings_ms;
};

struct PipelineResult {
  PipelineReport report;
  Program source;
  Program specialized;
  CompressionPlan plan;
  std::map<Target, std::string> artifacts;
};

namespace detail {

inline std::optional<TypeTag> definition_tag(const Term& body) {
  if (body.is<Lam>() || body.is<Prim>()) return TypeTag::Func;
  if (body.is<IntLit>()) return TypeTag::Int;
  if (body.is<BoolLit>()) return TypeTag::Bool;
  return std::nullopt;
}

// Infers a MAP typing for each component and rewrites generic operators.
inline Program specialize_program(const Program& p, std::vector<ComponentTypes>& types) {
  Program out;
  ContextEnv env;
  auto one = [&](const std::string& label, const TermPtr& body) {
    ComponentTypes ct{label, {}, false};
    auto problem = build_constraints(body, env);
    TermPtr result = body;
    try {
      Assignment a = map_by_components(problem.constraints);
      for (std::size_t i = 0; i < a.size(); ++i) ct.assignment.emplace_back(problem.variables[i].label, a[i]);
      result = specialize_operators(body, a, env);
      ct.specialized = true;
    } catch (const Error&) {
      // A component too large to enumerate keeps its generic operators.
    }
    types.push_back(std::move(ct));
    return result;
  };
  for (const auto& d : p.defs) {
    out.defs.push_back({d.name, one(d.name, d.body)});
    if (auto tag = definition_tag(*d.body)) env.bindings[d.name] = *tag;
  }
  if (p.main) out.main = one("main", p.main);
  return out;
}

// Worst verdict over every definition and main, each compared after inlining.
inline Verdict::Kind program_verdict(const Program& source, const GaelProgram& encoded, const MdlConfig& cfg) {
  const auto closed = closed_definitions(source);
  std::vector<std::pair<TermPtr, SkiPtr>> pairs;
  for (std::size_t i = 0; i < source.defs.size(); ++i) {
    if (const auto* d = encoded.find(source.defs[i].name)) {
      GaelProgram upto;
      for (const auto& e : encoded.defs) {
        upto.defs.push_back(e);
        if (e.name == d->name) break;
      }
      upto.main = sfree(d->name);
      pairs.emplace_back(closed[i], inline_main(upto));
    }
  }
  if (source.main) pairs.emplace_back(inline_main(source), inline_main(encoded));
  Verdict::Kind worst = Verdict::Kind::Equal;
  for (const auto& [t, s] : pairs) {
    auto v = behavioral_equal(t, s, cfg.probe_config, cfg.reduce).kind;
    if (v == Verdict::Kind::Different) return v;
    if (v == Verdict::Kind::Unknown) worst = v;
  }
  return worst;
}

class Stopwatch {
 public:
  double lap() {
    auto now = std::chrono::steady_clock::now();
    double ms = std::chrono::duration<double, std::milli>(now - last_).count();
    last_ = now;
    return ms;
  }

 private:
  std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

}  // namespace detail

inline PipelineResult run_pipeline(const std::string& source, const PipelineConfig& cfg = {},
                                   std::string program_id = "stdin") {
  PipelineResult r;
  PipelineReport& rep = r.report;
  rep.program_id = std::move(program_id);
  detail::Stopwatch clock;

  r.source = parse_program(source);
  rep.p_tokens = tokenize(source, Dialect::Source).length();
  rep.timings_ms.emplace_back("parse", clock.lap());

  r.specialized = cfg.infer_types ? detail::specialize_program(r.source, rep.map_types) : r.source;
  rep.timings_ms.emplace_back("infer", clock.lap());

  r.plan = compress_program(r.specialized, cfg.mdl);
  rep.objective = r.plan.objective;
  rep.timings_ms.emplace_back("compress", clock.lap());

  rep.equivalence = detail::program_verdict(r.source, r.plan.encoded, cfg.mdl);
  rep.timings_ms.emplace_back("verify", clock.lap());

  for (Target t : cfg.emit) r.artifacts[t] = emit_program(r.plan.encoded, t);
  const std::string gael = gael_print(r.plan.encoded);
  rep.s_tokens = tokenize(gael, Dialect::Gael).length();
  rep.cr = compression_rate(rep.s_tokens, rep.p_tokens);
  rep.density_source = symbolic_density(source, cfg.c);
  rep.density_gael = symbolic_density(gael, cfg.c);
  rep.timings_ms.emplace_back("emit", clock.lap());
  return r;
}

// ---------------------------------------------------------------------------
// JSON and CSV

inline nlohmann::ordered_json to_json(const DensityReport& d) {
  return {{"byte_length", d.byte_length},
          {"k_approx_bytes", d.k_approx},
          {"rho", d.rho},
          {"bound_slack_bytes", d.bound_slack},
          {"c_constant", d.c_constant}};
}

inline nlohmann::ordered_json to_json(const PipelineReport& r, bool with_timings = true) {
  nlohmann::ordered_json types = nlohmann::ordered_json::object();
  for (const auto& ct : r.map_types) {
    nlohmann::ordered_json vars = nlohmann::ordered_json::object();
    for (const auto& [label, tag] : ct.assignment) vars[label] = type_tag_name(tag);
    types[ct.component] = {{"specialized", ct.specialized}, {"assignment", vars}};
  }
  nlohmann::ordered_json j = {{"schema_version", kReportSchemaVersion},
                              {"program_id", r.program_id},
                              {"p_tokens", r.p_tokens},
                              {"s_tokens", r.s_tokens},
                              {"cr", r.cr},
                              {"density_source", to_json(r.density_source)},
                              {"density_gael", to_json(r.density_gael)},
                              {"equivalence", verdict_name(r.equivalence)},
                              {"objective", r.objective},
                              {"map_types", types}};
  if (with_timings) {
    nlohmann::ordered_json t = nlohmann::ordered_json::object();
    for (const auto& [layer, ms] : r.timings_ms) t[layer] = ms;
    j["timings_ms"] = t;
  }
  return j;
}

struct CorpusEntry {
  std::string program_id;
  std::optional<PipelineReport> report;
  std::string error;
};

struct Summary {
  double mean = 0.0;
  double median = 0.0;
  double min = 0.0;
  double max = 0.0;
};

inline Summary summarize(std::vector<double> xs) {
  Summary s;
  if (xs.empty()) return s;
  std::sort(xs.begin(), xs.end());
  double total = 0.0;
  for (double x : xs) total += x;
  s.mean = total / static_cast<double>(xs.size());
  const std::size_t mid = xs.size() / 2;
  s.median = xs.size() % 2 == 1 ? xs[mid] : (xs[mid - 1] + xs[mid]) / 2.0;
  s.min = xs.front();
  s.max = xs.back();
  return s;
}

struct CorpusReport {
  std::vector<CorpusEntry> entries;
  Summary cr;
  Summary rho_source;
  Summary rho_gael;
  double pass_rate = 0.0;
  std::size_t errors = 0;
  std::size_t different = 0;
  std::size_t unknown = 0;
};

inline CorpusReport run_corpus(const std::filesystem::path& dir, const PipelineConfig& cfg = {},
                               std::string_view extension = ".lc") {
  std::vector<std::filesystem::path> files;
  if (std::filesystem::is_directory(dir)) {
    for (const auto& e : std::filesystem::directory_iterator(dir)) {
      if (e.is_regular_file() && e.path().extension() == extension) files.push_back(e.path());
    }
  }
  if (files.empty()) throw Error("no " + std::string(extension) + " files in " + dir.string());
  std::sort(files.begin(), files.end(), [](const auto& a, const auto& b) { return a.filename() < b.filename(); });

  CorpusReport out;
  std::vector<double> crs, rs, rg;
  std::size_t passed = 0;
  for (const auto& f : files) {
    CorpusEntry e;
    e.program_id = f.filename().string();
    try {
      std::ifstream in(f, std::ios::binary);
      std::ostringstream ss;
      ss << in.rdbuf();
      PipelineConfig quiet = cfg;
      quiet.emit.clear();
      e.report = run_pipeline(ss.str(), quiet, e.program_id).report;
      crs.push_back(e.report->cr);
      rs.push_back(e.report->density_source.rho);
      rg.push_back(e.report->density_gael.rho);
      switch (e.report->equivalence) {
        case Verdict::Kind::Equal: ++passed; break;
        case Verdict::Kind::Different: ++out.different; break;
        case Verdict::Kind::Unknown: ++out.unknown; break;
      }
    } catch (const Error& err) {
      e.error = err.what();
      ++out.errors;
    }
    out.entries.push_back(std::move(e));
  }
  out.cr = summarize(crs);
  out.rho_source = summarize(rs);
  out.rho_gael = summarize(rg);
  out.pass_rate = static_cast<double>(passed) / static_cast<double>(out.entries.size());
  return out;
}

inline nlohmann::ordered_json to_json(const CorpusReport& c, bool with_timings = true) {
  auto summary = [](const Summary& s) {
    return nlohmann::ordered_json{{"mean", s.mean}, {"median", s.median}, {"min", s.min}, {"max", s.max}};
  };
  nlohmann::ordered_json programs = nlohmann::ordered_json::array();
  for (const auto& e : c.entries) {
    if (e.report) {
      programs.push_back(to_json(*e.report, with_timings));
    } else {
      programs.push_back({{"program_id", e.program_id}, {"error", e.error}});
    }
  }
  return {{"schema_version", kReportSchemaVersion},
          {"programs", programs},
          {"aggregates",
           {{"programs", c.entries.size()},
            {"errors", c.errors},
            {"different", c.different},
            {"unknown", c.unknown},
            {"equivalence_pass_rate", c.pass_rate},
            {"cr", summary(c.cr)},
            {"rho_source", summary(c.rho_source)},
            {"rho_gael", summary(c.rho_gael)}}}};
}

inline std::string to_csv(const CorpusReport& c) {
  std::ostringstream out;
  out.precision(17);
  out << "program_id,p_tokens,s_tokens,cr,rho_source,rho_gael,equivalence,objective,error\n";
  for (const auto& e : c.entries) {
    out << e.program_id << ',';
    if (e.report) {
      const auto& r = *e.report;
      out << r.p_tokens << ',' << r.s_tokens << ',' << r.cr << ',' << r.density_source.rho << ','
          << r.density_gael.rho << ',' << verdict_name(r.equivalence) << ',' << r.objective << ",\n";
    } else {
      std::string msg = e.error;
      std::replace(msg.begin(), msg.end(), '"', '\'');
      out << ",,,,,,,\"" << msg << "\"\n";
    }
  }
  return out.str();
}

}  // namespace skic
