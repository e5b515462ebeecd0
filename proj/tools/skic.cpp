// Command-line front end: compress, corpus, explain, density.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "skic/explain.hpp"
#include "skic/pipeline.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kInputError = 1;
constexpr int kUnfaithful = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw skic::Error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw skic::Error("cannot write " + path);
  out << text;
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

struct SharedOptions {
  double lambda = 0.99;
  std::size_t beam = 8;
  std::string rules = "naive,i,eta";
  std::size_t fuel = 10000;
  std::size_t probes = 216;
  std::string emit = "gael";
  std::string report;
  double c = skic::kDefaultBoundConstant;
  bool no_extract = false;
  bool no_types = false;
  std::string unit = "tokens";

  void attach(CLI::App* cmd) {
    cmd->add_option("--lambda", lambda, "Weight of length against semantic distance")->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--beam", beam, "Beam width")->check(CLI::PositiveNumber);
    cmd->add_option("--rules", rules, "Rule sets to search: naive, i, eta (comma separated)");
    cmd->add_option("--fuel", fuel, "Reduction step budget per probe");
    cmd->add_option("--probes", probes, "Maximum number of probe tuples");
    cmd->add_option("--emit", emit, "Targets to print: gael, lambda, pseudo (comma separated)");
    cmd->add_option("--report", report, "Write a JSON report to this path");
    cmd->add_option("--c", c, "Compressor constant of the density bound")->check(CLI::NonNegativeNumber);
    cmd->add_flag("--no-extract", no_extract, "Disable common-subterm extraction");
    cmd->add_flag("--no-types", no_types, "Skip type inference and operator specialization");
    cmd->add_option("--length-unit", unit, "Length measure for the objective: tokens or bytes");
  }

  skic::PipelineConfig config() const {
    skic::PipelineConfig cfg;
    cfg.mdl.lambda_weight = lambda;
    cfg.mdl.beam_width = beam;
    cfg.mdl.reduce.fuel = fuel;
    cfg.mdl.probe_config.max_tuples = probes;
    cfg.mdl.extraction_enabled = !no_extract;
    cfg.mdl.rule_sets.clear();
    for (const auto& r : split(rules)) {
      auto rs = skic::rule_set_from_name(r);
      if (!rs) throw skic::Error("unknown rule set '" + r + "'");
      cfg.mdl.rule_sets.push_back(*rs);
    }
    if (unit == "bytes") {
      cfg.mdl.length_unit = skic::LengthUnit::Bytes;
    } else if (unit != "tokens") {
      throw skic::Error("unknown length unit '" + unit + "'");
    }
    cfg.c = c;
    cfg.infer_types = !no_types;
    cfg.emit.clear();
    for (const auto& t : split(emit)) {
      auto target = skic::target_from_name(t);
      if (!target) throw skic::Error("unknown target '" + t + "'");
      cfg.emit.push_back(*target);
    }
    return cfg;
  }
};

int run_compress(const std::string& file, const SharedOptions& opts) {
  auto cfg = opts.config();
  auto result = skic::run_pipeline(read_file(file), cfg, std::filesystem::path(file).filename().string());
  for (skic::Target t : cfg.emit) {
    if (cfg.emit.size() > 1) std::cout << "-- " << skic::target_name(t) << "\n";
    std::cout << result.artifacts.at(t);
  }
  const auto& r = result.report;
  std::cerr << "tokens " << r.p_tokens << " -> " << r.s_tokens << ", cr " << r.cr << ", equivalence "
            << skic::verdict_name(r.equivalence) << "\n";
  if (!opts.report.empty()) write_file(opts.report, skic::to_json(r).dump(2) + "\n");
  return r.equivalence == skic::Verdict::Kind::Different ? kUnfaithful : kOk;
}

int run_corpus(const std::string& dir, const SharedOptions& opts, const std::string& csv) {
  auto report = skic::run_corpus(dir, opts.config());
  for (const auto& e : report.entries) {
    std::cout << e.program_id << "  ";
    if (e.report) {
      std::cout << e.report->p_tokens << " -> " << e.report->s_tokens << "  cr " << e.report->cr << "  "
                << skic::verdict_name(e.report->equivalence) << "\n";
    } else {
      std::cout << "error: " << e.error << "\n";
    }
  }
  std::cout << "programs " << report.entries.size() << ", mean cr " << report.cr.mean << ", median cr "
            << report.cr.median << ", pass rate " << report.pass_rate << "\n";
  if (!opts.report.empty()) write_file(opts.report, skic::to_json(report).dump(2) + "\n");
  if (!csv.empty()) write_file(csv, skic::to_csv(report));
  if (report.different > 0) return kUnfaithful;
  return report.errors > 0 ? kInputError : kOk;
}

// Explanations of a GAEL program: one block per definition and one for main,
// each introduced by "@name".
int run_explain(const std::string& file, bool inverse) {
  const std::string text = read_file(file);
  if (!inverse) {
    auto prog = skic::parse_gael_program(text);
    for (const auto& d : prog.defs) std::cout << "@" << d.name << "\n" << skic::write_explanation(skic::explain_term(d.body));
    if (prog.main) std::cout << "@main\n" << skic::write_explanation(skic::explain_term(prog.main));
    return kOk;
  }
  skic::GaelProgram prog;
  std::istringstream in(text);
  std::string line, name, block;
  auto flush = [&] {
    if (name.empty()) return;
    auto term = skic::parse_explanation(skic::read_explanation(block));
    if (name == "main") {
      prog.main = term;
    } else {
      prog.defs.push_back({name, term});
    }
    block.clear();
  };
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] == '@') {
      flush();
      name = line.substr(1);
    } else if (!name.empty()) {
      block += line + "\n";
    } else if (!line.empty()) {
      throw skic::Error("explanation block must start with '@name'");
    }
  }
  flush();
  std::cout << skic::gael_print(prog);
  return kOk;
}

int run_density(const std::string& file, double c) {
  auto d = skic::symbolic_density(read_file(file), c);
  std::cout << skic::to_json(d).dump(2) << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lambda-to-combinator compressor"};
  app.require_subcommand(1);

  std::string file, dir, csv;
  bool inverse = false;
  double density_c = skic::kDefaultBoundConstant;
  SharedOptions compress_opts, corpus_opts;

  auto* compress = app.add_subcommand("compress", "Compress one source program");
  compress->add_option("file", file, "Source program")->required();
  compress_opts.attach(compress);

  auto* corpus = app.add_subcommand("corpus", "Run the pipeline over every .lc file in a directory");
  corpus->add_option("dir", dir, "Corpus directory")->required();
  corpus->add_option("--csv", csv, "Write a CSV summary to this path");
  corpus_opts.attach(corpus);

  auto* explain = app.add_subcommand("explain", "Explain a GAEL program in controlled English");
  explain->add_option("file", file, "GAEL program, or explanation text with --inverse")->required();
  explain->add_flag("--inverse", inverse, "Read an explanation and print the GAEL program");

  auto* density = app.add_subcommand("density", "Symbolic density of a file's bytes");
  density->add_option("file", file, "Input file")->required();
  density->add_option("--c", density_c, "Compressor constant of the density bound")->check(CLI::NonNegativeNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (*compress) return run_compress(file, compress_opts);
    if (*corpus) return run_corpus(dir, corpus_opts, csv);
    if (*explain) return run_explain(file, inverse);
    if (*density) return run_density(file, density_c);
  } catch (const skic::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kOk;
}
