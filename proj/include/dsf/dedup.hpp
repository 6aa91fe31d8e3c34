#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "dsf/annotator.hpp"

namespace dsf {

// Sparse tf-idf vector; entries sorted by term id, all weights > 0.
struct TfIdfVector {
  std::vector<std::pair<std::uint32_t, double>> weights;
  double norm = 0.0;
  std::size_t length = 0;  // word tokens counted, for length banding
};

// Vocabulary and idf weights fitted on a set of texts.
//   idf(t) = ln(N / df(t)) + 1,  weight = raw count * idf
class TfIdfModel {
 public:
  std::size_t documents() const { return documents_; }
  std::size_t vocabulary_size() const { return idf_.size(); }
  const std::unordered_map<std::string, std::uint32_t>& vocabulary() const { return vocab_; }

  // nullopt-like: returns -1 for unknown terms.
  double idf(std::string_view term) const;

  // Out-of-vocabulary terms are ignored.
  TfIdfVector vectorize(std::string_view text) const;

  friend TfIdfModel fit_tfidf(std::span<const std::string> texts, std::string_view mask_token);

 private:
  std::unordered_map<std::string, std::uint32_t> vocab_;
  std::vector<double> idf_;
  std::size_t documents_ = 0;
  std::string mask_token_;
};

// Word and number tokens of `text`, lower-cased, mask token excluded.
std::vector<std::string> tfidf_terms(std::string_view text, std::string_view mask_token = "MASK");

TfIdfModel fit_tfidf(std::span<const std::string> texts, std::string_view mask_token = "MASK");
TfIdfModel fit_tfidf(std::span<const LabeledExample> examples,
                     std::string_view mask_token = "MASK");

double cosine(const TfIdfVector& a, const TfIdfVector& b);

enum class Blocking { none, length_bands };
enum class DedupScope { global, per_label };

struct DedupConfig {
  double threshold = 0.8;
  std::uint64_t rng_seed = 0;
  Blocking blocking = Blocking::none;
  DedupScope scope = DedupScope::global;
  std::string mask_token = "MASK";

  void validate() const;
};

// Token counts a, b fall in the same band when they differ by at most half
// of the larger one.
bool same_length_band(std::size_t a, std::size_t b);

// Which member of a near-duplicate pair is dropped: true drops `second`.
// Keyed on the pair's ids, so the choice does not depend on scan position.
bool drop_second(std::uint64_t seed, std::string_view first_id, std::string_view second_id);

// Indices (into `examples`) of the survivors, ascending. Pairs are scanned in
// lexicographic id order; a pair with cosine strictly above the threshold
// loses one member. Texts with no vocabulary terms are never duplicates.
std::vector<std::size_t> dedup_indices(std::span<const LabeledExample> examples,
                                       const DedupConfig& config);

std::vector<LabeledExample> dedup(std::span<const LabeledExample> examples,
                                  const DedupConfig& config);

}  // namespace dsf
