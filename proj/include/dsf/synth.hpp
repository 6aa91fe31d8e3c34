#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "dsf/corpus.hpp"

namespace dsf::synth {

// Synthetic Russian-like corpus built from a small fixed vocabulary: sentiment
// words (including multi-word and ambiguous terms), seed nouns, organization
// and person names, negation particles, quoted spans, numbers, URLs and user
// mentions. Every sentence ends with an ordinary word and a terminator, so the
// splitter recovers exactly the generated sentences.
struct CorpusSpec {
  std::size_t sentences = 2000;
  std::size_t max_sentences_per_doc = 5;
  std::uint64_t seed = 1;
};

// Fixed 30-term lexicon TSV.
std::string lexicon_tsv();
// Gazetteers: banks (organizations and persons) and telecom operators.
std::string banks_gazetteer_tsv();
std::string telecom_gazetteer_tsv();

// Streams documents; `fn(const Document&)` is called once per document.
template <typename Fn>
void generate(const CorpusSpec& spec, Fn&& fn);

std::vector<Document> generate(const CorpusSpec& spec);

// Writes corpus.jsonl, lexicon.tsv, banks.tsv and telecom.tsv into `dir`.
void write_fixture(const std::filesystem::path& dir, const CorpusSpec& spec);

namespace detail {
class Generator {
 public:
  explicit Generator(std::uint64_t seed) : state_(seed) {}
  std::string sentence();
  std::uint64_t next();
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(next() % n); }

 private:
  std::uint64_t state_;
};
}  // namespace detail

template <typename Fn>
void generate(const CorpusSpec& spec, Fn&& fn) {
  detail::Generator g(spec.seed);
  std::size_t made = 0;
  std::size_t doc_no = 0;
  while (made < spec.sentences) {
    const auto n = std::min(spec.sentences - made, 1 + g.below(spec.max_sentences_per_doc));
    Document doc;
    doc.id = "synth-" + std::to_string(doc_no++);
    for (std::size_t i = 0; i < n; ++i) {
      if (i) doc.text += g.below(8) == 0 ? "  " : " ";
      doc.text += g.sentence();
    }
    made += n;
    fn(static_cast<const Document&>(doc));
  }
}

}  // namespace dsf::synth
