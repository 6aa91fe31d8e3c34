#include "dsf/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>

#include "dsf/error.hpp"
#include "dsf/utf8.hpp"

namespace dsf {

namespace {

using utf8::decode;

bool starts_with_ci(std::string_view s, std::size_t pos, std::string_view prefix) {
  if (s.size() - pos < prefix.size()) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    char c = s[pos + i];
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c + 32);
    if (c != prefix[i]) return false;
  }
  return true;
}

bool is_separator(char32_t cp) { return utf8::is_space(cp) || utf8::is_control(cp); }

bool is_alnum(char32_t cp) { return utf8::is_letter(cp) || utf8::is_digit(cp); }

// Glyphs that are stripped from the tail of a URL.
bool url_trailer(char32_t cp) {
  switch (cp) {
    case '.': case ',': case ';': case ':': case '!': case '?': case ')':
    case ']': case '}': case '"': case '\'': case 0x00BB: case 0x2026:
    case 0x201C: case 0x201D: case 0x2019:
      return true;
    default:
      return false;
  }
}

std::size_t scan_url(std::string_view s, std::size_t pos) {
  std::size_t end = pos;
  std::size_t last_good = pos;
  while (end < s.size()) {
    const auto d = decode(s, end);
    if (is_separator(d.cp)) break;
    end += d.length;
    if (!url_trailer(d.cp)) last_good = end;
  }
  return last_good;
}

std::size_t scan_alnum(std::string_view s, std::size_t pos, bool& has_letter) {
  has_letter = false;
  std::size_t end = pos;
  char32_t prev = 0;
  while (end < s.size()) {
    const auto d = decode(s, end);
    if (is_alnum(d.cp)) {
      has_letter |= utf8::is_letter(d.cp);
      prev = d.cp;
      end += d.length;
      continue;
    }
    // Decimal separator between two digits stays inside the number.
    if ((d.cp == '.' || d.cp == ',') && utf8::is_digit(prev) &&
        end + 1 < s.size() && utf8::is_digit(static_cast<unsigned char>(s[end + 1]))) {
      prev = d.cp;
      end += 1;
      continue;
    }
    break;
  }
  return end;
}

bool is_terminator(const Token& t) {
  return t.text == "." || t.text == "!" || t.text == "?" || t.text == "…";
}

bool is_closer(const Token& t, const TextConfig& cfg) {
  if (t.text == ")" || t.text == "]") return true;
  for (const auto& q : cfg.quote_pairs) {
    if (t.text == q.close) return true;
  }
  return false;
}

// tokens[i] ends exactly where tokens[i + 1] starts.
bool touching(std::span<const Token> tokens, std::size_t i) {
  return tokens[i].span.end == tokens[i + 1].span.start;
}

// A dash or a lower-case word right after a terminator continues the
// sentence, as in direct speech followed by attribution.
bool continues_sentence(const Token& next) {
  if (next.kind == TokenKind::punctuation) {
    return next.text == "—" || next.text == "–" || next.text == "-";
  }
  if (next.kind != TokenKind::word) return false;
  const auto cp = decode(next.text, 0).cp;
  return utf8::is_letter(cp) && utf8::to_lower(cp) == cp &&
         !(cp >= 0x0300 && cp <= 0x036F);
}

bool is_initial(const Token& t) {
  if (t.kind != TokenKind::word) return false;
  const auto d = decode(t.text, 0);
  return d.length == t.text.size() && utf8::is_upper(d.cp);
}

}  // namespace

std::string_view to_string(TokenKind kind) {
  switch (kind) {
    case TokenKind::word: return "word";
    case TokenKind::number: return "number";
    case TokenKind::punctuation: return "punctuation";
    case TokenKind::quote: return "quote";
    case TokenKind::url: return "url";
    case TokenKind::user_mention: return "user_mention";
    case TokenKind::special: return "special";
  }
  return "special";
}

bool TextConfig::is_quote(std::string_view glyph) const {
  for (const auto& q : quote_pairs) {
    if (glyph == q.open || glyph == q.close) return true;
  }
  return false;
}

std::vector<QuotePair> TextConfig::default_quote_pairs() {
  return {{"«", "»"}, {"„", "“"}, {"“", "”"}, {"\"", "\""}, {"‘", "’"}};
}

std::unordered_set<std::string> TextConfig::default_abbreviations() {
  return {"т",   "г",   "гг",  "руб", "коп", "тыс", "млн", "млрд", "см",
          "ул",  "д",   "стр", "им",  "пр",  "др",  "проф", "акад", "доц",
          "св",  "ст",  "кв",  "обл", "р",   "н",   "э",   "e",    "g",
          "mr",  "mrs", "dr",  "vs",  "etc", "inc", "ltd", "co",   "долл",
          "ж",   "пос", "пер", "рис", "табл", "ред", "изд", "т.е",  "т.д", "т.п", "т.к", "т.н", "и.о"};
}

std::unordered_set<std::string> load_abbreviations(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open abbreviation list: " + path);
  std::unordered_set<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    auto last = line.find_last_not_of(" \t\r.");
    if (last == std::string::npos || last < first) continue;
    out.insert(utf8::to_lower(std::string_view(line).substr(first, last - first + 1)));
  }
  return out;
}

// "@name", also "@@name": a run of '@' followed by a handle character.
namespace {
bool is_handle_start(std::string_view text, std::size_t pos) {
  const auto at_end = text.find_first_not_of('@', pos);
  if (at_end == std::string_view::npos) return false;
  return text[at_end] == '_' || is_alnum(decode(text, at_end).cp);
}
}  // namespace

std::vector<Token> tokenize(std::string_view text, const TextConfig& cfg) {
  std::vector<Token> tokens;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto d = decode(text, pos);
    if (is_separator(d.cp)) {
      pos += d.length;
      continue;
    }

    Token tok;
    std::size_t end;
    const auto c0 = d.cp | 0x20;
    if ((c0 == 'h' && (starts_with_ci(text, pos, "http://") ||
                       starts_with_ci(text, pos, "https://"))) ||
        (c0 == 'w' && starts_with_ci(text, pos, "www."))) {
      end = scan_url(text, pos);
      tok.kind = TokenKind::url;
    } else if (d.cp == '@' && is_handle_start(text, pos)) {
      end = text.find_first_not_of('@', pos);
      while (end < text.size()) {
        const auto n = decode(text, end);
        if (!is_alnum(n.cp) && n.cp != '_') break;
        end += n.length;
      }
      tok.kind = TokenKind::user_mention;
    } else if (is_alnum(d.cp)) {
      bool has_letter = false;
      end = scan_alnum(text, pos, has_letter);
      tok.kind = has_letter ? TokenKind::word : TokenKind::number;
    } else {
      end = pos + d.length;
      if (d.cp == utf8::kReplacement) {
        tok.kind = TokenKind::special;
      } else if (cfg.is_quote(text.substr(pos, d.length))) {
        tok.kind = TokenKind::quote;
      } else {
        tok.kind = TokenKind::punctuation;
      }
    }

    tok.text = std::string(text.substr(pos, end - pos));
    tok.span = {pos, end};
    if (tok.kind == TokenKind::word) {
      if (tok.text == cfg.url_token) tok.kind = TokenKind::url;
      else if (tok.text == cfg.user_token) tok.kind = TokenKind::user_mention;
      else if (tok.text == cfg.number_token) tok.kind = TokenKind::number;
      else if (tok.text == cfg.mask_token) tok.kind = TokenKind::special;
    }
    tokens.push_back(std::move(tok));
    pos = end;
  }
  return tokens;
}

namespace {

Sentence sentence_from_tokens(const Document& doc, std::span<const Token> toks,
                              std::size_t index) {
  Sentence s;
  s.doc_id = doc.id;
  s.index = index;
  s.id = doc.id + ":" + std::to_string(index);
  s.span = {toks.front().span.start, toks.back().span.end};
  s.text = doc.text.substr(s.span.start, s.span.size());
  s.tokens.reserve(toks.size());
  for (const auto& t : toks) {
    Token r = t;
    r.span = {t.span.start - s.span.start, t.span.end - s.span.start};
    s.tokens.push_back(std::move(r));
  }
  return s;
}

}  // namespace

std::vector<Sentence> split_sentences(const Document& doc, const TextConfig& cfg) {
  const auto tokens = tokenize(doc.text, cfg);
  std::vector<Sentence> out;
  std::size_t begin = 0;
  std::size_t i = 0;
  while (i < tokens.size()) {
    if (!is_terminator(tokens[i])) {
      ++i;
      continue;
    }
    std::size_t last = i;
    while (last + 1 < tokens.size() && is_terminator(tokens[last + 1]) &&
           tokens[last + 1].span.start == tokens[last].span.end) {
      ++last;
    }
    while (last + 1 < tokens.size() && is_closer(tokens[last + 1], cfg) &&
           tokens[last + 1].span.start == tokens[last].span.end) {
      ++last;
    }

    bool boundary = last + 1 == tokens.size() ||
                    tokens[last + 1].span.start > tokens[last].span.end;
    if (boundary && tokens[i].text == "." && i > begin && touching(tokens, i - 1)) {
      const Token& prev = tokens[i - 1];
      if (prev.kind == TokenKind::word &&
          (cfg.abbreviations.count(utf8::to_lower(prev.text)) || is_initial(prev))) {
        boundary = false;
      }
      // Dotted abbreviations such as "т.е." arrive as word . word .
      if (boundary && prev.kind == TokenKind::word && i >= begin + 3 && touching(tokens, i - 2) &&
          touching(tokens, i - 3) && tokens[i - 2].text == "." &&
          tokens[i - 3].kind == TokenKind::word &&
          cfg.abbreviations.count(utf8::to_lower(tokens[i - 3].text + "." + prev.text))) {
        boundary = false;
      }
    }
    if (boundary && cfg.lowercase_continues && last + 1 < tokens.size() &&
        continues_sentence(tokens[last + 1])) {
      boundary = false;
    }
    if (boundary) {
      out.push_back(sentence_from_tokens(
          doc, std::span(tokens).subspan(begin, last + 1 - begin), out.size()));
      begin = last + 1;
    }
    i = last + 1;
  }
  if (begin < tokens.size()) {
    out.push_back(sentence_from_tokens(doc, std::span(tokens).subspan(begin), out.size()));
  }
  return out;
}

Sentence make_sentence(std::string id, std::string text, const TextConfig& cfg) {
  Sentence s;
  s.id = std::move(id);
  s.doc_id = s.id;
  s.text = std::move(text);
  s.tokens = tokenize(s.text, cfg);
  s.span = {0, s.text.size()};
  return s;
}

namespace {

// Kind the tokenizer gives `text` when it is a single alphanumeric run;
// nullopt when it would not come back as one token.
std::optional<TokenKind> single_token_kind(std::string_view text, const TextConfig& cfg) {
  if (text.empty()) return std::nullopt;
  bool has_letter = false;
  for (std::size_t pos = 0; pos < text.size();) {
    const auto d = decode(text, pos);
    if (!is_alnum(d.cp)) return std::nullopt;
    has_letter |= utf8::is_letter(d.cp);
    pos += d.length;
  }
  if (!has_letter) return TokenKind::number;
  if (text == cfg.url_token) return TokenKind::url;
  if (text == cfg.user_token) return TokenKind::user_mention;
  if (text == cfg.number_token) return TokenKind::number;
  if (text == cfg.mask_token) return TokenKind::special;
  return TokenKind::word;
}

char32_t last_code_point(std::string_view s) {
  std::size_t pos = s.size();
  while (pos > 0 && (static_cast<unsigned char>(s[pos - 1]) & 0xC0) == 0x80) --pos;
  return pos > 0 ? decode(s, pos - 1).cp : 0;
}

}  // namespace

NormalizedText normalize_with_tokens(std::string_view raw, const TextConfig& cfg,
                                     const std::vector<Token>* raw_tokens) {
  // Drop control characters outright; whitespace controls become spaces.
  std::string text;
  text.reserve(raw.size());
  for (std::size_t pos = 0; pos < raw.size();) {
    const auto d = decode(raw, pos);
    if (utf8::is_space(d.cp)) {
      text.push_back(' ');
    } else if (!utf8::is_control(d.cp)) {
      text.append(raw.substr(pos, d.length));
    }
    pos += d.length;
  }
  std::vector<Token> scratch;
  if (!raw_tokens || text != raw) {
    scratch = tokenize(text, cfg);
    raw_tokens = &scratch;
  }

  NormalizedText out;
  out.text.reserve(text.size());
  out.tokens.reserve(raw_tokens->size());
  // Emitted tokens are the output's tokens unless a replacement glues onto an
  // alphanumeric neighbour ("abc@x" -> "abcUSER"); then re-tokenize.
  bool exact = true;
  std::size_t prev_end = 0;
  bool gap = false;
  for (const auto& tok : *raw_tokens) {
    if (tok.span.start > prev_end) gap = true;
    prev_end = tok.span.end;

    std::string_view emit;
    TokenKind kind = tok.kind;
    bool replaced = false;
    switch (tok.kind) {
      case TokenKind::url: emit = cfg.url_token; replaced = true; break;
      case TokenKind::user_mention: emit = cfg.user_token; replaced = true; break;
      case TokenKind::number: emit = cfg.number_token; replaced = true; break;
      case TokenKind::word:
      case TokenKind::quote:
        emit = tok.text;
        break;
      case TokenKind::special:
        if (tok.text == cfg.mask_token) emit = tok.text;
        break;
      case TokenKind::punctuation:
        if (cfg.allowed_punctuation.find(tok.text) != std::string::npos) emit = tok.text;
        break;
    }
    if (emit.empty()) {
      gap = true;
      continue;
    }
    if (replaced && exact) {
      const auto k = single_token_kind(emit, cfg);
      if (k) kind = *k;
      else exact = false;
    }
    if (gap && !out.text.empty()) {
      out.text.push_back(' ');
    } else if (exact && !out.tokens.empty() && is_alnum(last_code_point(out.text)) &&
               is_alnum(decode(emit, 0).cp)) {
      exact = false;
    }
    gap = false;
    const auto start = out.text.size();
    out.text.append(emit);
    if (exact) out.tokens.push_back({std::string(emit), {start, out.text.size()}, kind});
  }
  if (!exact) out.tokens = tokenize(out.text, cfg);
  return out;
}

std::string normalize(std::string_view raw, const TextConfig& cfg) {
  return normalize_with_tokens(raw, cfg).text;
}

LengthBounds fit_length_bounds(std::span<const std::size_t> lengths,
                               double lower_quantile, double upper_quantile) {
  if (!(lower_quantile >= 0.0 && lower_quantile < 1.0 && upper_quantile > 0.0 &&
        upper_quantile <= 1.0 && lower_quantile < upper_quantile)) {
    throw ConfigError("invalid quantile pair");
  }
  if (lengths.empty()) throw DataError("no reference sample");
  std::vector<std::size_t> sorted(lengths.begin(), lengths.end());
  std::sort(sorted.begin(), sorted.end());
  const auto n = sorted.size();
  auto nearest_rank = [&](double q) {
    // The epsilon absorbs representation error in q*n (0.95*100 etc.).
    auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(n) - 1e-9));
    rank = std::clamp<std::size_t>(rank, 1, n);
    return sorted[rank - 1];
  };
  return {nearest_rank(lower_quantile), nearest_rank(upper_quantile), lower_quantile,
          upper_quantile};
}

LengthBounds fit_length_bounds(std::span<const Sentence> reference,
                               double lower_quantile, double upper_quantile) {
  std::vector<std::size_t> lengths;
  lengths.reserve(reference.size());
  for (const auto& s : reference) lengths.push_back(s.tokens.size());
  return fit_length_bounds(lengths, lower_quantile, upper_quantile);
}

std::vector<Sentence> length_filter(std::vector<Sentence> sentences,
                                    const LengthBounds& bounds) {
  std::erase_if(sentences,
                [&](const Sentence& s) { return !bounds.contains(s.tokens.size()); });
  return sentences;
}

CorpusReader::CorpusReader(const std::string& path, Format format)
    : path_(path), in_(path), format_(format) {
  if (!in_) throw ConfigError("cannot open corpus: " + path);
  if (format_ == Format::automatic) {
    const bool json_ext = path.ends_with(".jsonl") || path.ends_with(".json") ||
                          path.ends_with(".ndjson");
    format_ = json_ext ? Format::jsonl : Format::text;
  }
}

bool CorpusReader::next(Document& doc) {
  std::string line;
  while (std::getline(in_, line)) {
    ++line_no_;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;

    if (format_ == Format::text) {
      doc.id = "doc-" + std::to_string(line_no_);
      doc.text = std::move(line);
      doc.source.reset();
      return true;
    }

    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw DataError(path_ + ":" + std::to_string(line_no_) + ": invalid JSON: " + e.what());
    }
    if (!j.is_object() || !j.contains("id") || !j["id"].is_string() ||
        !j.contains("text") || !j["text"].is_string()) {
      throw DataError(path_ + ":" + std::to_string(line_no_) +
                      ": document needs string fields \"id\" and \"text\"");
    }
    doc.id = j["id"].get<std::string>();
    if (doc.id.empty()) {
      throw DataError(path_ + ":" + std::to_string(line_no_) + ": empty document id");
    }
    doc.text = j["text"].get<std::string>();
    doc.source.reset();
    if (auto it = j.find("source"); it != j.end() && it->is_string()) {
      doc.source = it->get<std::string>();
    }
    if (doc.text.find_first_not_of(" \t\r\n") == std::string::npos) continue;
    return true;
  }
  return false;
}

}  // namespace dsf
