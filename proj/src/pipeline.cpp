#include "dsf/pipeline.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <thread>
#include <unordered_set>

#include "dsf/error.hpp"
#include "dsf/io.hpp"

namespace dsf {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Ingest and annotation building blocks
// ---------------------------------------------------------------------------

std::vector<Sentence> ingest_document(const Document& doc, const IngestOptions& opts,
                                      IngestStats& stats) {
  ++stats.documents;
  auto sentences = split_sentences(doc, opts.text);
  stats.sentences += sentences.size();
  std::vector<Sentence> kept;
  kept.reserve(sentences.size());
  for (auto& s : sentences) {
    if (opts.normalize) {
      auto n = normalize_with_tokens(s.text, opts.text, &s.tokens);
      s.text = std::move(n.text);
      s.tokens = std::move(n.tokens);
    }
    if (s.tokens.empty()) continue;
    if (opts.bounds && !opts.bounds->contains(s.tokens.size())) continue;
    kept.push_back(std::move(s));
  }
  stats.kept += kept.size();
  return kept;
}

LengthBounds bounds_from_reference(const std::string& path, double lower_quantile,
                                   double upper_quantile, const IngestOptions& opts) {
  std::vector<std::size_t> lengths;
  for (const auto& e : io::read_examples(path)) {
    const auto text = opts.normalize ? normalize(e.text, opts.text) : e.text;
    lengths.push_back(tokenize(text, opts.text).size());
  }
  if (lengths.empty()) throw DataError("no reference sample in " + path);
  return fit_length_bounds(lengths, lower_quantile, upper_quantile);
}

std::vector<EntityMention> AnnotationResources::mentions(const Sentence& sentence) const {
  return mentions(sentence, token_keys(sentence, lexicon.options()));
}

std::vector<EntityMention> AnnotationResources::mentions(
    const Sentence& sentence, std::span<const std::string> lexicon_keys) const {
  std::vector<EntityMention> all;
  for (const auto& g : gazetteers) {
    auto found = g.options() == lexicon.options() ? g.match(sentence, lexicon_keys)
                                                  : g.match(sentence);
    all.insert(all.end(), std::make_move_iterator(found.begin()),
               std::make_move_iterator(found.end()));
  }
  if (auto it = imported.find(sentence.id); it != imported.end()) {
    all.insert(all.end(), it->second.begin(), it->second.end());
  }
  return merge_mentions(sentence, std::move(all));
}

std::vector<LabeledExample> AnnotationResources::annotate(const Sentence& sentence) const {
  const auto keys = token_keys(sentence, lexicon.options());
  return annotate_sentence(sentence, keys, mentions(sentence, keys), lexicon, seeds, rules);
}

AnnotationResources load_resources(const ResourceOptions& opts) {
  opts.rules.validate();
  MatchOptions match;
  match.strip_suffixes = opts.strip_suffixes;

  auto lexicon = load_lexicon(opts.lexicon, match);
  SeedList seeds;
  if (opts.seeds_positive || opts.seeds_negative) {
    if (!opts.seeds_positive || !opts.seeds_negative) {
      throw ConfigError("seed lists need both a positive and a negative file");
    }
    seeds = load_seed_list(*opts.seeds_positive, *opts.seeds_negative);
  } else {
    seeds = seed_references(lexicon);
  }
  SeedMatcher seed_matcher(seeds, match);

  std::vector<Gazetteer> gazetteers;
  for (const auto& g : opts.gazetteers) gazetteers.push_back(load_gazetteer(g.path, g.topic, match));

  MentionIndex imported;
  for (const auto& a : opts.annotations) {
    for (auto& [sid, mentions] : import_annotations(a.path, a.topic)) {
      auto& bucket = imported[sid];
      bucket.insert(bucket.end(), std::make_move_iterator(mentions.begin()),
                    std::make_move_iterator(mentions.end()));
    }
  }
  return AnnotationResources{std::move(lexicon), std::move(seed_matcher), std::move(gazetteers),
                             std::move(imported), opts.rules};
}

std::size_t worker_count(std::size_t requested) {
  std::size_t n = requested;
  if (n == 0) {
    if (const char* env = std::getenv("DSF_THREADS"); env && *env) {
      try {
        n = std::stoul(env);
      } catch (const std::exception&) {
        throw ConfigError(std::string("DSF_THREADS is not a number: ") + env);
      }
    }
  }
  if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
  return n;
}

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 failed");
  }
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0xF]);
  }
  return out;
}

void apply_override(json& config, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError("override must look like key=value: " + assignment);
  }
  const auto key = assignment.substr(0, eq);
  const auto raw = assignment.substr(eq + 1);
  json value = json::parse(raw, nullptr, false);
  if (value.is_discarded()) value = raw;

  json* node = &config;
  std::size_t start = 0;
  while (true) {
    const auto dot = key.find('.', start);
    const auto part = key.substr(start, dot == std::string::npos ? dot : dot - start);
    if (part.empty()) throw ConfigError("empty path segment in override: " + key);
    if (!node->is_object()) {
      if (!node->is_null()) throw ConfigError("override path crosses a non-object: " + key);
      *node = json::object();
    }
    node = &(*node)[part];
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
  *node = std::move(value);
}

namespace {

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& [k, v] : obj.items()) {
    if (!allowed.count(k)) throw ConfigError("unknown key '" + k + "' in " + where);
  }
}

template <typename T>
T get_as(const json& j, const std::string& what) {
  try {
    return j.get<T>();
  } catch (const json::exception&) {
    throw ConfigError("config value for '" + what + "' has the wrong type");
  }
}

std::string resolve(const fs::path& base, const std::string& p) {
  fs::path path(p);
  return (path.is_absolute() ? path : base / path).lexically_normal().string();
}

std::vector<NamedSource> named_sources(const json& j, const fs::path& base, const std::string& what) {
  std::vector<NamedSource> out;
  if (j.is_null()) return out;
  if (!j.is_array()) throw ConfigError("'" + what + "' must be a list");
  for (const auto& item : j) {
    if (item.is_string()) {
      out.push_back({resolve(base, item.get<std::string>()), ""});
      continue;
    }
    if (!item.is_object() || !item.contains("path")) {
      throw ConfigError("entries of '" + what + "' need a \"path\"");
    }
    check_keys(item, {"path", "topic"}, what);
    out.push_back({resolve(base, get_as<std::string>(item["path"], what + ".path")),
                   item.contains("topic") ? get_as<std::string>(item["topic"], what + ".topic")
                                          : std::string()});
  }
  return out;
}

BalanceSpec balance_spec(const json& j, BalanceSpec spec, const std::string& name) {
  check_keys(j, {"mode", "total", "proportions", "rng_seed"}, "balance." + name);
  if (j.contains("mode")) {
    const auto mode = get_as<std::string>(j["mode"], "balance." + name + ".mode");
    if (mode == "uniform") spec.mode = BalanceMode::uniform;
    else if (mode == "distribution") spec.mode = BalanceMode::distribution;
    else throw ConfigError("unknown balance mode '" + mode + "'");
  }
  if (j.contains("total")) spec.total = get_as<std::size_t>(j["total"], "balance." + name + ".total");
  if (j.contains("rng_seed")) spec.rng_seed = get_as<std::uint64_t>(j["rng_seed"], "balance.rng_seed");
  if (j.contains("proportions")) {
    spec.proportions.clear();
    for (const auto& [k, v] : j["proportions"].items()) {
      auto l = parse_label(k);
      if (!l) throw ConfigError("unknown label '" + k + "' in balance proportions");
      spec.proportions[*l] = get_as<double>(v, "balance proportions");
    }
  }
  if (spec.mode == BalanceMode::distribution && spec.proportions.empty()) {
    spec.proportions = benchmark_train_proportions();
  }
  spec.validate();
  return spec;
}

}  // namespace

std::map<std::string, BalanceSpec> default_balance(PlanVariant variant, std::uint64_t seed) {
  auto uniform = [&](std::size_t total) {
    BalanceSpec s;
    s.total = total;
    s.rng_seed = seed;
    return s;
  };
  switch (variant) {
    case PlanVariant::additional_only:
    case PlanVariant::mixed_general:
    case PlanVariant::mixed_full:
      return {{"additional", uniform(15000)}};
    case PlanVariant::two_step:
      return {{"additional", uniform(27000)}};
    case PlanVariant::three_step:
      return {{"general", uniform(18000)}, {"thematic", uniform(9000)}};
  }
  return {};
}

RunConfig parse_config(const json& j, const fs::path& base_dir) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  check_keys(j,
             {"rng_seed", "output_dir", "corpus", "corpus_format", "abbreviations", "normalize",
              "lexicon", "seeds", "gazetteers", "annotations", "length", "rules", "dedup",
              "flatten", "plan", "balance", "threads"},
             "config");
  RunConfig c;
  c.source = j;

  if (!j.contains("rng_seed") || !j["rng_seed"].is_number_integer()) {
    throw ConfigError("config needs an integer rng_seed");
  }
  c.rng_seed = j["rng_seed"].get<std::uint64_t>();

  if (!j.contains("output_dir")) throw ConfigError("config needs output_dir");
  c.output_dir = resolve(base_dir, get_as<std::string>(j["output_dir"], "output_dir"));

  if (!j.contains("corpus")) throw ConfigError("config needs corpus");
  if (j["corpus"].is_string()) {
    c.corpus.push_back(resolve(base_dir, j["corpus"].get<std::string>()));
  } else {
    for (const auto& p : get_as<std::vector<std::string>>(j["corpus"], "corpus")) {
      c.corpus.push_back(resolve(base_dir, p));
    }
  }
  if (j.contains("corpus_format")) {
    const auto f = get_as<std::string>(j["corpus_format"], "corpus_format");
    if (f == "auto") c.corpus_format = CorpusReader::Format::automatic;
    else if (f == "jsonl") c.corpus_format = CorpusReader::Format::jsonl;
    else if (f == "text") c.corpus_format = CorpusReader::Format::text;
    else throw ConfigError("unknown corpus_format '" + f + "'");
  }
  if (j.contains("abbreviations") && !j["abbreviations"].is_null()) {
    c.abbreviations = resolve(base_dir, get_as<std::string>(j["abbreviations"], "abbreviations"));
  }
  if (j.contains("normalize")) c.normalize = get_as<bool>(j["normalize"], "normalize");
  if (j.contains("threads")) c.threads = get_as<std::size_t>(j["threads"], "threads");

  auto& r = c.resources;
  if (!j.contains("lexicon")) throw ConfigError("config needs lexicon");
  r.lexicon = resolve(base_dir, get_as<std::string>(j["lexicon"], "lexicon"));
  if (j.contains("seeds") && !j["seeds"].is_null()) {
    const auto& s = j["seeds"];
    check_keys(s, {"positive", "negative"}, "seeds");
    if (!s.contains("positive") || !s.contains("negative")) {
      throw ConfigError("seeds needs both positive and negative lists");
    }
    r.seeds_positive = resolve(base_dir, get_as<std::string>(s["positive"], "seeds.positive"));
    r.seeds_negative = resolve(base_dir, get_as<std::string>(s["negative"], "seeds.negative"));
  }
  if (j.contains("gazetteers")) r.gazetteers = named_sources(j["gazetteers"], base_dir, "gazetteers");
  if (j.contains("annotations")) {
    r.annotations = named_sources(j["annotations"], base_dir, "annotations");
  }

  if (j.contains("rules") && !j["rules"].is_null()) {
    const auto& rj = j["rules"];
    check_keys(rj,
               {"max_distance_words", "negation_window", "negation_particles",
                "suffix_stripping", "general_topic"},
               "rules");
    auto& rules = r.rules;
    if (rj.contains("max_distance_words")) {
      rules.max_distance_words = get_as<std::size_t>(rj["max_distance_words"], "max_distance_words");
    }
    if (rj.contains("negation_window")) {
      rules.negation_window = get_as<std::size_t>(rj["negation_window"], "negation_window");
    }
    if (rj.contains("negation_particles")) {
      rules.negation_particles.clear();
      for (const auto& p : get_as<std::vector<std::string>>(rj["negation_particles"], "negation_particles")) {
        rules.negation_particles.insert(p);
      }
    }
    if (rj.contains("suffix_stripping")) {
      r.strip_suffixes = get_as<bool>(rj["suffix_stripping"], "suffix_stripping");
    }
    if (rj.contains("general_topic")) {
      rules.general_topic = get_as<std::string>(rj["general_topic"], "general_topic");
    }
  }

  if (j.contains("length") && !j["length"].is_null()) {
    const auto& lj = j["length"];
    check_keys(lj, {"reference", "lower_quantile", "upper_quantile", "min_tokens", "max_tokens"},
               "length");
    if (lj.contains("lower_quantile")) c.lower_quantile = get_as<double>(lj["lower_quantile"], "lower_quantile");
    if (lj.contains("upper_quantile")) c.upper_quantile = get_as<double>(lj["upper_quantile"], "upper_quantile");
    if (lj.contains("reference")) {
      c.length_reference = resolve(base_dir, get_as<std::string>(lj["reference"], "length.reference"));
    } else if (lj.contains("min_tokens") && lj.contains("max_tokens")) {
      LengthBounds b;
      b.min_tokens = get_as<std::size_t>(lj["min_tokens"], "min_tokens");
      b.max_tokens = get_as<std::size_t>(lj["max_tokens"], "max_tokens");
      c.fixed_bounds = b;
    } else {
      throw ConfigError("length needs either a reference file or min_tokens and max_tokens");
    }
  }

  c.dedup.rng_seed = c.rng_seed;
  if (j.contains("dedup") && !j["dedup"].is_null()) {
    const auto& dj = j["dedup"];
    check_keys(dj, {"enabled", "threshold", "blocking", "scope", "rng_seed"}, "dedup");
    if (dj.contains("enabled")) c.dedup_enabled = get_as<bool>(dj["enabled"], "dedup.enabled");
    if (dj.contains("threshold")) c.dedup.threshold = get_as<double>(dj["threshold"], "dedup.threshold");
    if (dj.contains("rng_seed")) c.dedup.rng_seed = get_as<std::uint64_t>(dj["rng_seed"], "dedup.rng_seed");
    if (dj.contains("blocking")) {
      const auto b = get_as<std::string>(dj["blocking"], "dedup.blocking");
      if (b == "none") c.dedup.blocking = Blocking::none;
      else if (b == "length_bands") c.dedup.blocking = Blocking::length_bands;
      else throw ConfigError("unknown dedup blocking '" + b + "'");
    }
    if (dj.contains("scope")) {
      const auto s = get_as<std::string>(dj["scope"], "dedup.scope");
      if (s == "global") c.dedup.scope = DedupScope::global;
      else if (s == "per_label") c.dedup.scope = DedupScope::per_label;
      else throw ConfigError("unknown dedup scope '" + s + "'");
    }
  }

  if (j.contains("flatten") && !j["flatten"].is_null()) {
    const auto& fj = j["flatten"];
    check_keys(fj, {"enabled", "cap"}, "flatten");
    if (fj.contains("enabled")) c.flatten_enabled = get_as<bool>(fj["enabled"], "flatten.enabled");
    if (fj.contains("cap") && !fj["cap"].is_null()) {
      c.trigger_cap = get_as<std::size_t>(fj["cap"], "flatten.cap");
    }
  }

  if (j.contains("plan") && !j["plan"].is_null()) {
    const auto& pj = j["plan"];
    check_keys(pj, {"variant", "benchmark_train"}, "plan");
    if (pj.contains("variant")) {
      const auto v = get_as<std::string>(pj["variant"], "plan.variant");
      auto parsed = parse_plan_variant(v);
      if (!parsed) throw ConfigError("unknown plan variant '" + v + "'");
      c.variant = *parsed;
    }
    if (pj.contains("benchmark_train") && !pj["benchmark_train"].is_null()) {
      c.benchmark_train = resolve(base_dir, get_as<std::string>(pj["benchmark_train"], "plan.benchmark_train"));
    }
  }

  c.balance = default_balance(c.variant, c.rng_seed);
  if (j.contains("balance") && !j["balance"].is_null()) {
    for (const auto& [name, spec] : j["balance"].items()) {
      auto it = c.balance.find(name);
      if (it == c.balance.end()) {
        throw ConfigError("balance." + name + " is not an output of plan variant " +
                          std::string(to_string(c.variant)));
      }
      it->second = balance_spec(spec, it->second, name);
    }
  }

  c.validate();
  return c;
}

void RunConfig::validate() const {
  auto require_file = [](const std::string& path, const std::string& what) {
    if (!fs::is_regular_file(path)) throw ConfigError(what + " not found: " + path);
  };
  if (corpus.empty()) throw ConfigError("config lists no corpus files");
  for (const auto& p : corpus) require_file(p, "corpus file");
  if (abbreviations) require_file(*abbreviations, "abbreviation list");
  require_file(resources.lexicon, "lexicon");
  if (resources.seeds_positive) require_file(*resources.seeds_positive, "positive seed list");
  if (resources.seeds_negative) require_file(*resources.seeds_negative, "negative seed list");
  for (const auto& g : resources.gazetteers) require_file(g.path, "gazetteer");
  for (const auto& a : resources.annotations) require_file(a.path, "annotation file");
  if (length_reference) require_file(*length_reference, "length reference");
  if (fixed_bounds && fixed_bounds->min_tokens > fixed_bounds->max_tokens) {
    throw ConfigError("length.min_tokens exceeds length.max_tokens");
  }
  if (!(lower_quantile >= 0.0 && lower_quantile < upper_quantile && upper_quantile <= 1.0)) {
    throw ConfigError("length quantiles must satisfy 0 <= lower < upper <= 1");
  }
  resources.rules.validate();
  dedup.validate();
  if (variant != PlanVariant::additional_only) {
    if (!benchmark_train) {
      throw ConfigError("plan variant " + std::string(to_string(variant)) +
                        " needs plan.benchmark_train");
    }
    require_file(*benchmark_train, "benchmark training set");
  }
  for (const auto& [name, spec] : balance) spec.validate();
  if (output_dir.empty()) throw ConfigError("output_dir is empty");
}

RunConfig load_config(const fs::path& path, const std::vector<std::string>& overrides) {
  const auto ext = path.extension().string();
  if (ext != ".json") {
    throw ConfigError("unsupported config format '" + ext + "' (expected .json): " + path.string());
  }
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config: " + path.string());
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded()) throw ConfigError("config is not valid JSON: " + path.string());
  for (const auto& o : overrides) apply_override(j, o);
  return parse_config(j, fs::absolute(path).parent_path());
}

// ---------------------------------------------------------------------------
// Run
// ---------------------------------------------------------------------------

namespace {

// Prefixes error messages with the stage name, preserving the error type.
template <typename Fn>
auto stage(const char* name, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const ConfigError& e) {
    throw ConfigError(std::string(name) + ": " + e.what());
  } catch (const DataError& e) {
    throw DataError(std::string(name) + ": " + e.what());
  }
}

struct KeyedExample {
  std::string doc_id;
  std::size_t start;
  LabeledExample example;
};

struct ChunkResult {
  std::vector<KeyedExample> examples;
  IngestStats stats;
};

ChunkResult process_docs(std::span<const Document> docs, const IngestOptions& ingest,
                         const AnnotationResources& res) {
  ChunkResult r;
  for (const auto& doc : docs) {
    for (auto& s : ingest_document(doc, ingest, r.stats)) {
      for (auto& e : res.annotate(s)) r.examples.push_back({s.doc_id, s.span.start, std::move(e)});
    }
  }
  return r;
}

ordered_json counts_of(std::span<const LabeledExample> examples) {
  std::map<std::string, std::size_t> by_label, by_part, by_topic;
  for (auto l : kLabels) by_label[std::string(to_string(l))] = 0;
  for (const auto& e : examples) {
    ++by_label[std::string(to_string(e.label))];
    ++by_part[std::string(to_string(e.part))];
    ++by_topic[e.topic];
  }
  ordered_json j;
  j["count"] = examples.size();
  j["label"] = by_label;
  j["part"] = by_part;
  j["topic"] = by_topic;
  return j;
}

std::vector<LabeledExample> select(std::span<const LabeledExample> pool,
                                   const std::function<bool(const LabeledExample&)>& keep) {
  std::vector<LabeledExample> out;
  for (const auto& e : pool) {
    if (keep(e)) out.push_back(e);
  }
  return out;
}

void prepare_output(const fs::path& out) {
  if (fs::exists(out)) {
    if (!fs::is_directory(out)) throw ConfigError("output_dir is not a directory: " + out.string());
    if (!fs::is_empty(out) && !fs::exists(out / "manifest.json")) {
      throw ConfigError("refusing to replace non-empty directory without a manifest: " +
                        out.string());
    }
  }
}

}  // namespace

ordered_json run(const RunConfig& cfg) {
  cfg.validate();
  prepare_output(cfg.output_dir);

  const fs::path tmp = cfg.output_dir.string() + ".partial";
  fs::remove_all(tmp);
  fs::create_directories(tmp);

  try {
    ordered_json manifest;
    manifest["tool_version"] = kToolVersion;
    manifest["config_digest"] = sha256_hex(cfg.source.dump());
    manifest["rng_seed"] = cfg.rng_seed;
    manifest["plan_variant"] = to_string(cfg.variant);

    // Resources.
    IngestOptions ingest;
    ingest.normalize = cfg.normalize;
    if (cfg.abbreviations) ingest.text.abbreviations = load_abbreviations(*cfg.abbreviations);
    const auto res = stage("resources", [&] { return load_resources(cfg.resources); });

    ingest.bounds = stage("ingest", [&]() -> std::optional<LengthBounds> {
      if (cfg.length_reference) {
        return bounds_from_reference(*cfg.length_reference, cfg.lower_quantile,
                                     cfg.upper_quantile, ingest);
      }
      return cfg.fixed_bounds;
    });

    // Ingest + annotate, streamed in chunks of documents.
    const auto workers = worker_count(cfg.threads);
    constexpr std::size_t kChunkDocs = 4096;
    IngestStats stats;
    std::vector<KeyedExample> keyed;
    stage("ingest", [&] {
      std::unordered_set<std::string> doc_ids;
      std::vector<Document> chunk;
      auto flush = [&] {
        const auto per = (chunk.size() + workers - 1) / workers;
        std::vector<ChunkResult> results(workers);
        std::vector<std::exception_ptr> errors(workers);
        {
          std::vector<std::jthread> pool;
          for (std::size_t w = 0; w < workers; ++w) {
            const auto begin = std::min(chunk.size(), w * per);
            const auto end = std::min(chunk.size(), begin + per);
            if (begin == end) continue;
            pool.emplace_back([&, w, begin, end] {
              try {
                results[w] = process_docs(std::span(chunk).subspan(begin, end - begin), ingest, res);
              } catch (...) {
                errors[w] = std::current_exception();
              }
            });
          }
        }
        for (auto& e : errors) {
          if (e) std::rethrow_exception(e);
        }
        for (auto& r : results) {
          stats.documents += r.stats.documents;
          stats.sentences += r.stats.sentences;
          stats.kept += r.stats.kept;
          keyed.insert(keyed.end(), std::make_move_iterator(r.examples.begin()),
                       std::make_move_iterator(r.examples.end()));
        }
        chunk.clear();
      };
      for (const auto& path : cfg.corpus) {
        CorpusReader reader(path, cfg.corpus_format);
        Document doc;
        while (reader.next(doc)) {
          if (!doc_ids.insert(doc.id).second) {
            throw DataError(path + ":" + std::to_string(reader.line_number()) +
                            ": duplicate document id '" + doc.id + "'");
          }
          chunk.push_back(std::move(doc));
          if (chunk.size() == kChunkDocs) flush();
        }
      }
      if (!chunk.empty()) flush();
      if (stats.kept == 0) throw DataError("no sentences after ingest");
    });

    ordered_json ingest_report;
    ingest_report["documents"] = stats.documents;
    ingest_report["sentences"] = stats.sentences;
    ingest_report["kept_sentences"] = stats.kept;
    if (ingest.bounds) {
      ingest_report["length_bounds"] = {{"min_tokens", ingest.bounds->min_tokens},
                                        {"max_tokens", ingest.bounds->max_tokens}};
    } else {
      ingest_report["length_bounds"] = nullptr;
    }
    manifest["ingest"] = ingest_report;

    std::stable_sort(keyed.begin(), keyed.end(), [](const KeyedExample& a, const KeyedExample& b) {
      if (a.doc_id != b.doc_id) return a.doc_id < b.doc_id;
      return a.start < b.start;
    });
    std::vector<LabeledExample> annotated;
    annotated.reserve(keyed.size());
    for (auto& k : keyed) annotated.push_back(std::move(k.example));
    keyed = {};

    ordered_json datasets;
    auto emit = [&](const std::string& name, std::span<const LabeledExample> examples) {
      io::write_examples((tmp / name).string(), examples);
      datasets[name] = counts_of(examples);
    };
    emit("annotated.jsonl", annotated);

    // Dedup.
    std::vector<LabeledExample> pool;
    if (cfg.dedup_enabled && !annotated.empty()) {
      pool = stage("dedup", [&] { return dedup(annotated, cfg.dedup); });
    } else {
      pool = annotated;
    }
    manifest["dedup"] = {{"enabled", cfg.dedup_enabled},
                         {"threshold", cfg.dedup.threshold},
                         {"input", annotated.size()},
                         {"removed", annotated.size() - pool.size()},
                         {"survivors", pool.size()}};
    emit("deduped.jsonl", pool);

    // Samples per plan variant.
    using Pred = std::function<bool(const LabeledExample&)>;
    const Pred general_and_neutral = [](const LabeledExample& e) {
      return e.part == Part::general || e.label == Label::neutral;
    };
    const Pred everything = [](const LabeledExample&) { return true; };
    const Pred general_part = [](const LabeledExample& e) { return e.part == Part::general; };
    const Pred thematic_part = [](const LabeledExample& e) { return e.part == Part::thematic; };

    std::map<std::string, Pred> sources;
    switch (cfg.variant) {
      case PlanVariant::additional_only:
      case PlanVariant::mixed_general:
        sources["additional"] = general_and_neutral;
        break;
      case PlanVariant::mixed_full:
      case PlanVariant::two_step:
        sources["additional"] = everything;
        break;
      case PlanVariant::three_step:
        sources["general"] = general_part;
        sources["thematic"] = thematic_part;
        break;
    }

    ordered_json flatten_report = ordered_json::object();
    PlanPaths paths;
    for (const auto& [name, keep] : sources) {
      const auto& spec = cfg.balance.at(name);
      auto sample = stage("balance", [&] {
        auto candidates = select(pool, keep);
        if (cfg.flatten_enabled) {
          std::map<Label, FlattenStats> fs;
          candidates = flatten_to_targets(candidates, spec, cfg.trigger_cap, &fs);
          ordered_json rep = ordered_json::object();
          for (const auto& [label, st] : fs) {
            rep[std::string(to_string(label))] = {{"cap", st.cap},
                                                  {"triggers", st.triggers},
                                                  {"before", st.before},
                                                  {"after", st.after}};
          }
          flatten_report[name] = rep;
        }
        try {
          return balance(candidates, spec);
        } catch (const DataError& e) {
          throw DataError(name + " sample: " + e.what());
        }
      });
      const auto file = name + ".jsonl";
      emit(file, sample);
      const auto full = (tmp / file).string();
      if (name == "additional") paths.additional = full;
      if (name == "general") paths.general = full;
      if (name == "thematic") paths.thematic = full;
    }
    manifest["flatten"] = flatten_report;

    if (cfg.benchmark_train) {
      auto bench = stage("plan", [&] { return io::read_examples(*cfg.benchmark_train); });
      for (auto& e : bench) {
        e.part = Part::benchmark;
        if (cfg.normalize) e.text = normalize(e.text, ingest.text);
      }
      emit("benchmark_train.jsonl", bench);
      paths.benchmark_train = (tmp / "benchmark_train.jsonl").string();

      if (cfg.variant == PlanVariant::mixed_general || cfg.variant == PlanVariant::mixed_full) {
        auto mixed = io::read_examples(paths.additional);
        mixed.insert(mixed.end(), bench.begin(), bench.end());
        emit("mixed.jsonl", mixed);
        paths.mixed = (tmp / "mixed.jsonl").string();
      }
    }

    auto plan = stage("plan", [&] { return make_plan(cfg.variant, paths); });
    // Dataset paths are relative to the plan file.
    for (auto& s : plan.stages) s.dataset_path = fs::path(s.dataset_path).filename().string();
    io::write_plan((tmp / "plan.json").string(), plan);

    manifest["datasets"] = datasets;
    manifest["plan"] = io::to_json(plan);
    io::write_text((tmp / "manifest.json").string(), manifest.dump(2));

    fs::remove_all(cfg.output_dir);
    if (cfg.output_dir.has_parent_path()) fs::create_directories(cfg.output_dir.parent_path());
    fs::rename(tmp, cfg.output_dir);
    return manifest;
  } catch (...) {
    std::error_code ec;
    fs::remove_all(tmp, ec);
    throw;
  }
}

}  // namespace dsf
