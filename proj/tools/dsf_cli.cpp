#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>

#include "dsf/error.hpp"
#include "dsf/io.hpp"
#include "dsf/pipeline.hpp"

namespace fs = std::filesystem;
using namespace dsf;

namespace {

constexpr int kConfigExit = 2;
constexpr int kDataExit = 3;

// "path" or "path:topic". A missing topic defaults to the file stem.
NamedSource named_source(const std::string& arg) {
  const auto colon = arg.rfind(':');
  if (colon != std::string::npos && colon > 0 && !fs::exists(arg)) {
    return {arg.substr(0, colon), arg.substr(colon + 1)};
  }
  return {arg, fs::path(arg).stem().string()};
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path);
  return out;
}

Blocking parse_blocking(const std::string& s) {
  if (s == "none") return Blocking::none;
  if (s == "length_bands") return Blocking::length_bands;
  throw ConfigError("unknown blocking '" + s + "'");
}

DedupScope parse_scope(const std::string& s) {
  if (s == "global") return DedupScope::global;
  if (s == "per_label") return DedupScope::per_label;
  throw ConfigError("unknown scope '" + s + "'");
}

std::map<Label, double> parse_proportions(const std::vector<std::string>& items) {
  std::map<Label, double> out;
  for (const auto& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw ConfigError("proportion must be label=value: " + item);
    auto label = parse_label(item.substr(0, eq));
    if (!label) throw ConfigError("unknown label in proportion: " + item);
    try {
      out[*label] = std::stod(item.substr(eq + 1));
    } catch (const std::exception&) {
      throw ConfigError("proportion is not a number: " + item);
    }
  }
  return out;
}

struct IngestArgs {
  std::vector<std::string> inputs;
  std::string output;
  std::string format = "auto";
  std::string abbreviations;
  bool no_normalize = false;
  std::string reference;
  double lower = 0.05;
  double upper = 0.95;
  std::size_t min_tokens = 0;
  std::size_t max_tokens = 0;
};

int do_ingest(const IngestArgs& a) {
  IngestOptions opts;
  opts.normalize = !a.no_normalize;
  if (!a.abbreviations.empty()) opts.text.abbreviations = load_abbreviations(a.abbreviations);
  if (!a.reference.empty()) {
    opts.bounds = bounds_from_reference(a.reference, a.lower, a.upper, opts);
  } else if (a.max_tokens > 0) {
    if (a.min_tokens > a.max_tokens) throw ConfigError("--min-tokens exceeds --max-tokens");
    LengthBounds b;
    b.min_tokens = a.min_tokens;
    b.max_tokens = a.max_tokens;
    opts.bounds = b;
  }
  CorpusReader::Format format = CorpusReader::Format::automatic;
  if (a.format == "jsonl") format = CorpusReader::Format::jsonl;
  else if (a.format == "text") format = CorpusReader::Format::text;
  else if (a.format != "auto") throw ConfigError("unknown format '" + a.format + "'");

  auto out = open_output(a.output);
  IngestStats stats;
  for (const auto& path : a.inputs) {
    CorpusReader reader(path, format);
    Document doc;
    while (reader.next(doc)) {
      for (const auto& s : ingest_document(doc, opts, stats)) io::write_sentence(out, s);
    }
  }
  if (!out) throw DataError("write failed: " + a.output);
  if (stats.kept == 0) throw DataError("no sentences after ingest");
  std::cerr << "documents " << stats.documents << ", sentences " << stats.sentences << ", kept "
            << stats.kept << '\n';
  return 0;
}

struct AnnotateArgs {
  std::string input;
  std::string output;
  std::string lexicon;
  std::string seeds_positive;
  std::string seeds_negative;
  std::vector<std::string> gazetteers;
  std::vector<std::string> annotations;
  bool strip_suffixes = false;
  std::size_t max_distance = 4;
  std::size_t negation_window = 3;
};

int do_annotate(const AnnotateArgs& a) {
  ResourceOptions ro;
  ro.lexicon = a.lexicon;
  if (!a.seeds_positive.empty()) ro.seeds_positive = a.seeds_positive;
  if (!a.seeds_negative.empty()) ro.seeds_negative = a.seeds_negative;
  for (const auto& g : a.gazetteers) ro.gazetteers.push_back(named_source(g));
  for (const auto& g : a.annotations) ro.annotations.push_back(named_source(g));
  ro.strip_suffixes = a.strip_suffixes;
  ro.rules.max_distance_words = a.max_distance;
  ro.rules.negation_window = a.negation_window;
  const auto res = load_resources(ro);

  auto out = open_output(a.output);
  std::size_t n = 0;
  for (const auto& s : io::read_sentences(a.input)) {
    for (const auto& e : res.annotate(s)) {
      io::write_example(out, e);
      ++n;
    }
  }
  if (!out) throw DataError("write failed: " + a.output);
  std::cerr << "examples " << n << '\n';
  return 0;
}

struct DedupArgs {
  std::string input;
  std::string output;
  double threshold = 0.8;
  std::string blocking = "none";
  std::string scope = "global";
  std::uint64_t seed = 0;
};

int do_dedup(const DedupArgs& a) {
  DedupConfig cfg;
  cfg.threshold = a.threshold;
  cfg.blocking = parse_blocking(a.blocking);
  cfg.scope = parse_scope(a.scope);
  cfg.rng_seed = a.seed;
  cfg.validate();
  const auto examples = io::read_examples(a.input);
  const auto kept = dedup(examples, cfg);
  io::write_examples(a.output, kept);
  std::cerr << "removed " << examples.size() - kept.size() << " of " << examples.size() << '\n';
  return 0;
}

struct BalanceArgs {
  std::string input;
  std::string output;
  std::string mode = "uniform";
  std::size_t total = 15000;
  std::vector<std::string> proportions;
  std::uint64_t seed = 0;
  bool flatten = false;
  std::size_t cap = 0;
};

int do_balance(const BalanceArgs& a) {
  BalanceSpec spec;
  spec.total = a.total;
  spec.rng_seed = a.seed;
  if (a.mode == "uniform") {
    spec.mode = BalanceMode::uniform;
  } else if (a.mode == "distribution") {
    spec.mode = BalanceMode::distribution;
    spec.proportions =
        a.proportions.empty() ? benchmark_train_proportions() : parse_proportions(a.proportions);
  } else {
    throw ConfigError("unknown balance mode '" + a.mode + "'");
  }
  spec.validate();
  auto pool = io::read_examples(a.input);
  if (a.flatten) {
    pool = flatten_to_targets(pool, spec, a.cap ? std::optional(a.cap) : std::nullopt);
  }
  io::write_examples(a.output, balance(pool, spec));
  return 0;
}

struct PlanArgs {
  std::string variant;
  PlanPaths paths;
  std::string output;
};

int do_plan(const PlanArgs& a) {
  const auto plan = make_plan(a.variant, a.paths);
  if (a.output.empty() || a.output == "-") {
    std::cout << io::to_json(plan).dump(2) << '\n';
  } else {
    io::write_plan(a.output, plan);
  }
  return 0;
}

struct MetricsArgs {
  std::string gold;
  std::string pred;
  std::string output;
};

int do_metrics(const MetricsArgs& a) {
  const auto counts = io::join_and_count(io::read_examples(a.gold), io::read_predictions(a.pred));
  const auto report = io::to_json(score(counts), counts).dump(2);
  if (a.output.empty() || a.output == "-") {
    std::cout << report << '\n';
  } else {
    io::write_text(a.output, report);
  }
  return 0;
}

struct RunArgs {
  std::string config;
  std::vector<std::string> overrides;
};

int do_run(const RunArgs& a) {
  const auto cfg = load_config(a.config, a.overrides);
  const auto manifest = run(cfg);
  std::cerr << "wrote " << cfg.output_dir.string() << '\n';
  std::cout << manifest.dump(2) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distant-supervision targeted sentiment dataset builder"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);

  IngestArgs ingest;
  auto* c_ingest = app.add_subcommand("ingest", "Split, normalize and length-filter a corpus");
  c_ingest->add_option("-i,--input", ingest.inputs, "Corpus files (JSONL or text)")->required();
  c_ingest->add_option("-o,--output", ingest.output, "Sentence JSONL")->required();
  c_ingest->add_option("--format", ingest.format, "auto, jsonl or text");
  c_ingest->add_option("--abbreviations", ingest.abbreviations, "Abbreviation list")
      ->check(CLI::ExistingFile);
  c_ingest->add_flag("--no-normalize", ingest.no_normalize);
  c_ingest->add_option("--reference", ingest.reference, "Example JSONL for length quantiles")
      ->check(CLI::ExistingFile);
  c_ingest->add_option("--lower-quantile", ingest.lower);
  c_ingest->add_option("--upper-quantile", ingest.upper);
  c_ingest->add_option("--min-tokens", ingest.min_tokens);
  c_ingest->add_option("--max-tokens", ingest.max_tokens);

  AnnotateArgs annotate;
  auto* c_annotate = app.add_subcommand("annotate", "Extract labeled examples from sentences");
  c_annotate->add_option("-i,--input", annotate.input, "Sentence JSONL")->required();
  c_annotate->add_option("-o,--output", annotate.output, "Example JSONL")->required();
  c_annotate->add_option("--lexicon", annotate.lexicon)->required()->check(CLI::ExistingFile);
  c_annotate->add_option("--seeds-positive", annotate.seeds_positive)->check(CLI::ExistingFile);
  c_annotate->add_option("--seeds-negative", annotate.seeds_negative)->check(CLI::ExistingFile);
  c_annotate->add_option("--gazetteer", annotate.gazetteers, "path[:topic]");
  c_annotate->add_option("--annotations", annotate.annotations, "path[:topic]");
  c_annotate->add_flag("--strip-suffixes", annotate.strip_suffixes);
  c_annotate->add_option("--max-distance", annotate.max_distance);
  c_annotate->add_option("--negation-window", annotate.negation_window);

  DedupArgs dd;
  auto* c_dedup = app.add_subcommand("dedup", "Remove tf-idf near duplicates");
  c_dedup->add_option("-i,--input", dd.input)->required();
  c_dedup->add_option("-o,--output", dd.output)->required();
  c_dedup->add_option("--threshold", dd.threshold);
  c_dedup->add_option("--blocking", dd.blocking, "none or length_bands");
  c_dedup->add_option("--scope", dd.scope, "global or per_label");
  c_dedup->add_option("--seed", dd.seed)->required();

  BalanceArgs bal;
  auto* c_balance = app.add_subcommand("balance", "Sample a class-balanced dataset");
  c_balance->add_option("-i,--input", bal.input)->required();
  c_balance->add_option("-o,--output", bal.output)->required();
  c_balance->add_option("--mode", bal.mode, "uniform or distribution");
  c_balance->add_option("--total", bal.total);
  c_balance->add_option("--proportion", bal.proportions, "label=fraction");
  c_balance->add_option("--seed", bal.seed)->required();
  c_balance->add_flag("--flatten", bal.flatten, "Cap examples per trigger first");
  c_balance->add_option("--cap", bal.cap, "Explicit per-trigger cap");

  PlanArgs plan;
  auto* c_plan = app.add_subcommand("plan", "Write a training stage plan");
  c_plan->add_option("--variant", plan.variant)->required();
  c_plan->add_option("--additional", plan.paths.additional);
  c_plan->add_option("--general", plan.paths.general);
  c_plan->add_option("--thematic", plan.paths.thematic);
  c_plan->add_option("--benchmark-train", plan.paths.benchmark_train);
  c_plan->add_option("--mixed", plan.paths.mixed);
  c_plan->add_option("-o,--output", plan.output, "Plan JSON (stdout if omitted)");

  MetricsArgs met;
  auto* c_metrics = app.add_subcommand("metrics", "Score predictions against gold examples");
  c_metrics->add_option("--gold", met.gold)->required()->check(CLI::ExistingFile);
  c_metrics->add_option("--pred", met.pred)->required()->check(CLI::ExistingFile);
  c_metrics->add_option("-o,--output", met.output, "Report JSON (stdout if omitted)");

  RunArgs runargs;
  auto* c_run = app.add_subcommand("run", "Run the whole pipeline from a config file");
  c_run->add_option("-c,--config", runargs.config)->required()->check(CLI::ExistingFile);
  c_run->add_option("--set", runargs.overrides, "key.path=value override");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigExit;
  }

  try {
    if (*c_ingest) return do_ingest(ingest);
    if (*c_annotate) return do_annotate(annotate);
    if (*c_dedup) return do_dedup(dd);
    if (*c_balance) return do_balance(bal);
    if (*c_plan) return do_plan(plan);
    if (*c_metrics) return do_metrics(met);
    if (*c_run) return do_run(runargs);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigExit;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kDataExit;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
