#pragma once

#include <cstddef>
#include <fstream>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace dsf {

// Half-open byte range [start, end).
struct Span {
  std::size_t start = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - start; }
  friend bool operator==(const Span&, const Span&) = default;
};

enum class TokenKind { word, number, punctuation, quote, url, user_mention, special };

std::string_view to_string(TokenKind kind);

struct Token {
  std::string text;
  Span span;  // offsets into the text that was tokenized
  TokenKind kind = TokenKind::word;
};

// Tokens that count as words for distance and window rules.
inline bool is_word(const Token& t) {
  return t.kind == TokenKind::word || t.kind == TokenKind::number;
}

struct Document {
  std::string id;
  std::string text;
  std::optional<std::string> source;
};

struct Sentence {
  std::string id;
  std::string doc_id;
  std::string text;
  std::vector<Token> tokens;  // spans relative to `text`
  Span span;                  // offsets into the document text
  std::size_t index = 0;      // position within the document
};

struct QuotePair {
  std::string open;
  std::string close;
};

// Everything the tokenizer, splitter and normalizer can be configured with.
struct TextConfig {
  std::vector<QuotePair> quote_pairs = default_quote_pairs();
  std::unordered_set<std::string> abbreviations = default_abbreviations();
  std::string url_token = "URL";
  std::string user_token = "USER";
  std::string number_token = "NUM";
  std::string mask_token = "MASK";
  // Non-alphanumeric glyphs that survive normalization. Quote glyphs are
  // always kept.
  // A dash or lower-case word after a terminator suppresses the break.
  bool lowercase_continues = true;
  std::string allowed_punctuation = ".,!?…:;-–—()[]{}%/&+=№$€₽@#*<>_'\"";

  bool is_quote(std::string_view glyph) const;

  static std::vector<QuotePair> default_quote_pairs();
  static std::unordered_set<std::string> default_abbreviations();
};

// Reads an abbreviation list: one entry per line, '#' comments, trailing
// periods ignored, case-folded.
std::unordered_set<std::string> load_abbreviations(const std::string& path);

std::vector<Token> tokenize(std::string_view text, const TextConfig& cfg = {});

std::vector<Sentence> split_sentences(const Document& doc,
                                      const TextConfig& cfg = {});

// Builds a Sentence from already segmented text (e.g. a benchmark row).
Sentence make_sentence(std::string id, std::string text,
                       const TextConfig& cfg = {});

std::string normalize(std::string_view text, const TextConfig& cfg = {});

struct NormalizedText {
  std::string text;
  std::vector<Token> tokens;  // equal to tokenize(text, cfg)
};

// normalize() plus the tokens of its output. `raw_tokens`, if given, must be
// tokenize(raw, cfg); it saves a tokenizer pass.
NormalizedText normalize_with_tokens(std::string_view raw, const TextConfig& cfg = {},
                                     const std::vector<Token>* raw_tokens = nullptr);

struct LengthBounds {
  std::size_t min_tokens = 1;
  std::size_t max_tokens = 1;
  double lower_quantile = 0.05;
  double upper_quantile = 0.95;

  bool contains(std::size_t n) const {
    return n >= min_tokens && n <= max_tokens;
  }
};

// Nearest-rank quantiles of the given token counts.
LengthBounds fit_length_bounds(std::span<const std::size_t> lengths,
                               double lower_quantile = 0.05,
                               double upper_quantile = 0.95);
LengthBounds fit_length_bounds(std::span<const Sentence> reference,
                               double lower_quantile = 0.05,
                               double upper_quantile = 0.95);

std::vector<Sentence> length_filter(std::vector<Sentence> sentences,
                                    const LengthBounds& bounds);

// Streams documents from JSON-lines ({"id","text","source"?}) or plain text
// (one document per line, ids "doc-<line>"). Blank documents are skipped.
class CorpusReader {
 public:
  enum class Format { automatic, jsonl, text };

  explicit CorpusReader(const std::string& path, Format format = Format::automatic);

  bool next(Document& doc);
  std::size_t line_number() const { return line_no_; }
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::ifstream in_;
  Format format_;
  std::size_t line_no_ = 0;
};

}  // namespace dsf
