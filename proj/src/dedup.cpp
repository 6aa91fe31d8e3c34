#include "dsf/dedup.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "dsf/error.hpp"
#include "dsf/random.hpp"
#include "dsf/utf8.hpp"

namespace dsf {

std::vector<std::string> tfidf_terms(std::string_view text, std::string_view mask_token) {
  std::vector<std::string> out;
  for (const auto& t : tokenize(text)) {
    if (!is_word(t) || t.text == mask_token) continue;
    out.push_back(utf8::to_lower(t.text));
  }
  return out;
}

TfIdfModel fit_tfidf(std::span<const std::string> texts, std::string_view mask_token) {
  if (texts.empty()) throw DataError("tf-idf needs at least one example");
  TfIdfModel m;
  m.mask_token_ = std::string(mask_token);
  m.documents_ = texts.size();

  // Term ids follow sorted term order so vectors are independent of input order.
  std::map<std::string, std::size_t> df;
  for (const auto& text : texts) {
    auto terms = tfidf_terms(text, mask_token);
    std::sort(terms.begin(), terms.end());
    terms.erase(std::unique(terms.begin(), terms.end()), terms.end());
    for (auto& t : terms) ++df[std::move(t)];
  }
  m.idf_.reserve(df.size());
  const auto n = static_cast<double>(texts.size());
  for (const auto& [term, count] : df) {
    m.vocab_.emplace(term, static_cast<std::uint32_t>(m.idf_.size()));
    m.idf_.push_back(std::log(n / static_cast<double>(count)) + 1.0);
  }
  return m;
}

TfIdfModel fit_tfidf(std::span<const LabeledExample> examples, std::string_view mask_token) {
  std::vector<std::string> texts;
  texts.reserve(examples.size());
  for (const auto& e : examples) texts.push_back(e.text);
  return fit_tfidf(texts, mask_token);
}

double TfIdfModel::idf(std::string_view term) const {
  auto it = vocab_.find(std::string(term));
  return it == vocab_.end() ? -1.0 : idf_[it->second];
}

TfIdfVector TfIdfModel::vectorize(std::string_view text) const {
  std::map<std::uint32_t, std::size_t> tf;
  TfIdfVector v;
  for (const auto& t : tfidf_terms(text, mask_token_)) {
    ++v.length;
    if (auto it = vocab_.find(t); it != vocab_.end()) ++tf[it->second];
  }
  double sq = 0.0;
  v.weights.reserve(tf.size());
  for (const auto& [id, count] : tf) {
    const double w = static_cast<double>(count) * idf_[id];
    v.weights.emplace_back(id, w);
    sq += w * w;
  }
  v.norm = std::sqrt(sq);
  return v;
}

double cosine(const TfIdfVector& a, const TfIdfVector& b) {
  if (a.norm <= 0.0 || b.norm <= 0.0) {
    throw DataError("empty text after vocabulary filtering");
  }
  double dot = 0.0;
  auto i = a.weights.begin();
  auto j = b.weights.begin();
  while (i != a.weights.end() && j != b.weights.end()) {
    if (i->first < j->first) {
      ++i;
    } else if (j->first < i->first) {
      ++j;
    } else {
      dot += i->second * j->second;
      ++i;
      ++j;
    }
  }
  return std::clamp(dot / (a.norm * b.norm), 0.0, 1.0);
}

void DedupConfig::validate() const {
  if (!(threshold > 0.0 && threshold <= 1.0)) {
    throw ConfigError("dedup threshold must lie in (0, 1]");
  }
}

bool same_length_band(std::size_t a, std::size_t b) {
  const auto hi = std::max(a, b);
  const auto lo = std::min(a, b);
  return 2 * (hi - lo) <= hi;
}

bool drop_second(std::uint64_t seed, std::string_view first_id, std::string_view second_id) {
  const auto h = splitmix64(keyed_hash(seed, first_id) ^ (fnv1a64(second_id) * 0x9e3779b97f4a7c15ULL));
  return (h >> 63) == 0;
}

namespace {

// Pair scan over one group of examples. `members` holds indices into
// `examples`; survivors are flagged in `alive`.
void dedup_group(std::span<const LabeledExample> examples, std::vector<std::size_t> members,
                 const DedupConfig& cfg, std::vector<bool>& alive) {
  if (members.size() < 2) return;
  std::sort(members.begin(), members.end(), [&](std::size_t a, std::size_t b) {
    return examples[a].id < examples[b].id;
  });

  std::vector<std::string> texts;
  texts.reserve(members.size());
  for (auto m : members) texts.push_back(examples[m].text);
  const auto model = fit_tfidf(texts, cfg.mask_token);

  const auto n = members.size();
  std::vector<TfIdfVector> vecs;
  vecs.reserve(n);
  for (const auto& t : texts) vecs.push_back(model.vectorize(t));

  // Postings hold ranks (positions in id order), ascending.
  std::vector<std::vector<std::pair<std::uint32_t, double>>> postings(model.vocabulary_size());
  for (std::uint32_t r = 0; r < n; ++r) {
    for (const auto& [term, w] : vecs[r].weights) postings[term].emplace_back(r, w);
  }

  std::vector<double> dot(n, 0.0);
  std::vector<std::uint32_t> touched;
  for (std::uint32_t r = 0; r < n; ++r) {
    const auto i = members[r];
    if (!alive[i] || vecs[r].norm <= 0.0) continue;

    // Summation runs over terms of r in id order for every partner, which
    // reproduces a merge-based dot product bit for bit.
    touched.clear();
    for (const auto& [term, w] : vecs[r].weights) {
      const auto& plist = postings[term];
      auto it = std::upper_bound(plist.begin(), plist.end(), r,
                                 [](std::uint32_t v, const auto& p) { return v < p.first; });
      for (; it != plist.end(); ++it) {
        if (dot[it->first] == 0.0) touched.push_back(it->first);
        dot[it->first] += w * it->second;
      }
    }
    std::sort(touched.begin(), touched.end());

    for (auto s : touched) {
      const auto j = members[s];
      const double d = dot[s];
      dot[s] = 0.0;
      if (!alive[i] || !alive[j]) continue;
      if (cfg.blocking == Blocking::length_bands &&
          !same_length_band(vecs[r].length, vecs[s].length)) {
        continue;
      }
      const double c = std::clamp(d / (vecs[r].norm * vecs[s].norm), 0.0, 1.0);
      if (c <= cfg.threshold) continue;
      if (drop_second(cfg.rng_seed, examples[i].id, examples[j].id)) {
        alive[j] = false;
      } else {
        alive[i] = false;
      }
    }
  }
}

}  // namespace

std::vector<std::size_t> dedup_indices(std::span<const LabeledExample> examples,
                                       const DedupConfig& config) {
  config.validate();
  std::vector<bool> alive(examples.size(), true);
  if (config.scope == DedupScope::global) {
    std::vector<std::size_t> all(examples.size());
    std::iota(all.begin(), all.end(), 0);
    dedup_group(examples, std::move(all), config, alive);
  } else {
    std::vector<std::size_t> groups[3];
    for (std::size_t i = 0; i < examples.size(); ++i) {
      groups[index_of(examples[i].label)].push_back(i);
    }
    for (auto& g : groups) dedup_group(examples, std::move(g), config, alive);
  }
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < examples.size(); ++i) {
    if (alive[i]) kept.push_back(i);
  }
  return kept;
}

std::vector<LabeledExample> dedup(std::span<const LabeledExample> examples,
                                  const DedupConfig& config) {
  std::vector<LabeledExample> out;
  for (auto i : dedup_indices(examples, config)) out.push_back(examples[i]);
  return out;
}

}  // namespace dsf
