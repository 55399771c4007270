#include "stylo/textstats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <unordered_map>

namespace stylo {
namespace {

constexpr char32_t kInvalid = 0xFFFD;

struct Decoded {
  char32_t cp;
  std::size_t len;
};

// Decodes one UTF-8 sequence; malformed input yields U+FFFD of length 1.
Decoded decode(std::string_view s, std::size_t pos) {
  const auto b0 = static_cast<unsigned char>(s[pos]);
  if (b0 < 0x80) return {b0, 1};
  std::size_t len = 0;
  char32_t cp = 0;
  if ((b0 & 0xE0) == 0xC0) {
    len = 2;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3;
    cp = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4;
    cp = b0 & 0x07;
  } else {
    return {kInvalid, 1};
  }
  if (pos + len > s.size()) return {kInvalid, 1};
  for (std::size_t k = 1; k < len; ++k) {
    const auto b = static_cast<unsigned char>(s[pos + k]);
    if ((b & 0xC0) != 0x80) return {kInvalid, 1};
    cp = (cp << 6) | (b & 0x3F);
  }
  return {cp, len};
}

bool is_space(char32_t c) {
  switch (c) {
    case ' ': case '\t': case '\v': case '\f': case '\r':
    case 0x00A0: case 0x1680: case 0x2028: case 0x2029: case 0x202F: case 0x205F: case 0x3000:
      return true;
    default:
      return c >= 0x2000 && c <= 0x200A;
  }
}

bool is_ascii_alnum(char32_t c) {
  return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

bool is_ascii_digit(char32_t c) { return c >= '0' && c <= '9'; }

bool is_ascii_punct(char32_t c) {
  return (c >= 0x21 && c <= 0x2F) || (c >= 0x3A && c <= 0x40) || (c >= 0x5B && c <= 0x60) ||
         (c >= 0x7B && c <= 0x7E);
}

// Non-ASCII code points treated as letters: everything outside the
// punctuation, symbol, emoji and control blocks below.
bool is_unicode_letter(char32_t c) {
  if (c < 0x80) return false;
  if (c <= 0xBF || c == 0xD7 || c == 0xF7) return false;
  if (c >= 0x2000 && c <= 0x2BFF) return false;
  if (c >= 0x3000 && c <= 0x303F) return false;
  if (c >= 0xFE00 && c <= 0xFE0F) return false;
  if (c >= 0xFF00 && c <= 0xFF0F) return false;
  if (c >= 0x1F000 && c <= 0x1FAFF) return false;
  if (c >= 0xE0000 && c <= 0xE007F) return false;
  if (c == kInvalid || c == 0xFEFF) return false;
  return true;
}

bool is_word_char(char32_t c) { return is_ascii_alnum(c) || c == '_' || is_unicode_letter(c); }

// Canonical mark for a single non-ASCII punctuation code point.
std::optional<std::string_view> unicode_mark(char32_t c) {
  switch (c) {
    case 0x2026: return "\xE2\x80\xA6";
    case 0x2018: case 0x2019: return "'";
    case 0x201C: case 0x201D: return "\"";
    case 0x2013: return "\xE2\x80\x93";
    case 0x2014: return "\xE2\x80\x94";
    default: return std::nullopt;
  }
}

bool starts_with_ci(std::string_view s, std::string_view prefix) {
  if (s.size() < prefix.size()) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    char c = s[i];
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    if (c != prefix[i]) return false;
  }
  return true;
}

bool has_alnum(std::string_view token) {
  for (std::size_t i = 0; i < token.size();) {
    const auto d = decode(token, i);
    if (is_ascii_alnum(d.cp) || is_unicode_letter(d.cp)) return true;
    i += d.len;
  }
  return false;
}

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\v\f";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

bool is_blank(std::string_view line) {
  for (std::size_t i = 0; i < line.size();) {
    const auto d = decode(line, i);
    if (!is_space(d.cp)) return false;
    i += d.len;
  }
  return true;
}

// Tokenizes one paragraph (no '\n' inside) into `unit`.
class ParagraphScanner {
 public:
  ParagraphScanner(std::string_view text, TextUnit& unit) : text_(text), unit_(unit) {}

  void run() {
    Paragraph para;
    para.text = std::string(trim(text_));
    para.first_sentence = unit_.sentences.size();
    const std::size_t words_before = unit_.words.size();

    std::size_t pos = 0;
    while (pos < text_.size()) {
      const auto d = decode(text_, pos);
      const char32_t c = d.cp;

      if (is_space(c)) {
        flush_word();
        pos += d.len;
        continue;
      }

      if (word_.empty()) {
        if (const auto end = url_end(pos)) {
          emit_word(std::string(text_.substr(pos, *end - pos)), pos);
          pos = *end;
          continue;
        }
        if ((c == '@' || c == '#') && pos + 1 < text_.size() &&
            is_word_char(decode(text_, pos + 1).cp)) {
          std::size_t end = pos + 1;
          while (end < text_.size()) {
            const auto n = decode(text_, end);
            if (!is_word_char(n.cp)) break;
            end += n.len;
          }
          add_mark(c == '@' ? "@" : "#", 1);
          emit_word(std::string(text_.substr(pos, end - pos)), pos);
          pos = end;
          continue;
        }
      }

      if (is_word_char(c)) {
        if (word_.empty()) word_start_ = pos;
        word_.append(text_.substr(pos, d.len));
        last_word_cp_ = c;
        pos += d.len;
        continue;
      }

      if (!word_.empty() && joins(c, pos + d.len)) {
        add_mark(c == '-' ? "-" : c == '.' ? "." : "'", 1);
        word_.append(text_.substr(pos, d.len));
        last_word_cp_ = c;
        pos += d.len;
        continue;
      }

      flush_word();

      if (c == '-' && pos + 1 < text_.size() && text_[pos + 1] == '-') {
        add_mark("--", 2);
        pos += 2;
        continue;
      }
      if (is_ascii_punct(c) && c != '_') {
        add_mark(std::string(1, static_cast<char>(c)), 1);
        pos += d.len;
        if (c == '.' || c == '!' || c == '?') close_sentence(pos);
        continue;
      }
      if (const auto mark = unicode_mark(c)) {
        add_mark(std::string(*mark), 1);
      }
      pos += d.len;
    }
    flush_word();
    close_sentence(text_.size());

    para.sentence_count = unit_.sentences.size() - para.first_sentence;
    para.word_count = unit_.words.size() - words_before;
    unit_.paragraphs.push_back(std::move(para));
  }

 private:
  // End offset of a URL starting at pos, after peeling trailing punctuation.
  std::optional<std::size_t> url_end(std::size_t pos) const {
    const auto rest = text_.substr(pos);
    if (!starts_with_ci(rest, "http://") && !starts_with_ci(rest, "https://") &&
        !starts_with_ci(rest, "www.")) {
      return std::nullopt;
    }
    std::size_t end = pos;
    while (end < text_.size()) {
      const auto d = decode(text_, end);
      if (is_space(d.cp)) break;
      end += d.len;
    }
    constexpr std::string_view peel = ".,!?;:)\"'";
    while (end > pos + 1 && peel.find(text_[end - 1]) != std::string_view::npos) --end;
    return end;
  }

  bool joins(char32_t c, std::size_t next_pos) const {
    if (next_pos >= text_.size()) return false;
    const char32_t next = decode(text_, next_pos).cp;
    switch (c) {
      case '\'':
      case 0x2019:
      case '-':
        return is_word_char(next);
      case '.':
        return is_ascii_digit(last_word_cp_) && is_ascii_digit(next);
      default:
        return false;
    }
  }

  void add_mark(std::string mark, std::size_t chars) {
    unit_.punct_marks.push_back(PunctMark{std::move(mark), chars});
  }

  void emit_word(std::string token, std::size_t start) {
    if (!has_alnum(token)) return;
    if (!sentence_open_) {
      sentence_open_ = true;
      sentence_first_word_ = unit_.words.size();
      sentence_start_ = start;
    }
    unit_.words.push_back(std::move(token));
  }

  void flush_word() {
    if (word_.empty()) return;
    emit_word(std::move(word_), word_start_);
    word_.clear();
    last_word_cp_ = 0;
  }

  void close_sentence(std::size_t end) {
    if (sentence_open_) {
      Sentence s;
      s.first_word = sentence_first_word_;
      s.word_count = unit_.words.size() - sentence_first_word_;
      s.text = std::string(trim(text_.substr(sentence_start_, end - sentence_start_)));
      unit_.sentences.push_back(std::move(s));
      sentence_open_ = false;
      last_sentence_end_ = end;
      return;
    }
    // Extra terminators ("!!", "?!") belong to the previous sentence.
    if (unit_.sentences.size() > paragraph_floor_ && end > last_sentence_end_ &&
        trim(text_.substr(last_sentence_end_, end - last_sentence_end_)).find_first_not_of(".!?") ==
            std::string_view::npos) {
      auto& prev = unit_.sentences.back();
      prev.text.append(trim(text_.substr(last_sentence_end_, end - last_sentence_end_)));
      last_sentence_end_ = end;
    }
  }

  std::string_view text_;
  TextUnit& unit_;
  std::string word_;
  std::size_t word_start_ = 0;
  char32_t last_word_cp_ = 0;
  bool sentence_open_ = false;
  std::size_t sentence_first_word_ = 0;
  std::size_t sentence_start_ = 0;
  std::size_t last_sentence_end_ = 0;
  std::size_t paragraph_floor_ = unit_.sentences.size();
};

struct MeanStdev {
  double mean = 0.0;
  double stdev = 0.0;
};

// Population statistics; summation in index order.
template <typename Getter>
MeanStdev population_stats(std::size_t n, Getter get) {
  if (n == 0) return {};
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) sum += get(i);
  const double mean = sum / static_cast<double>(n);
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = get(i) - mean;
    ss += d * d;
  }
  return {mean, std::sqrt(ss / static_cast<double>(n))};
}

char fold(char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c; }

std::string case_fold(std::string_view w) {
  std::string out(w);
  std::transform(out.begin(), out.end(), out.begin(), fold);
  return out;
}

}  // namespace

std::size_t TextUnit::punctuation_chars() const {
  std::size_t total = 0;
  for (const auto& m : punct_marks) total += m.chars;
  return total;
}

TextUnit tokenize(std::string_view raw) {
  TextUnit unit;
  unit.raw = std::string(raw);
  std::size_t start = 0;
  while (start <= raw.size()) {
    auto nl = raw.find('\n', start);
    if (nl == std::string_view::npos) nl = raw.size();
    auto line = raw.substr(start, nl - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!is_blank(line)) ParagraphScanner(line, unit).run();
    start = nl + 1;
  }
  return unit;
}

const std::array<std::string_view, kFeatureCount>& feature_names() {
  static const std::array<std::string_view, kFeatureCount> names = {
      "word_count",
      "sentence_count",
      "paragraph_count",
      "mean_words_per_sentence",
      "stdev_words_per_sentence",
      "mean_words_per_paragraph",
      "stdev_words_per_paragraph",
      "mean_sentences_per_paragraph",
      "stdev_sentences_per_paragraph",
      "punct_total",
      "punct_exclamation",
      "punct_apostrophe",
      "punct_comma",
      "punct_colon",
      "punct_semicolon",
      "punct_question",
      "punct_quote",
      "punct_hyphen",
      "punct_double_hyphen",
      "punct_at",
      "punct_hash",
      "punct_period",
      "mttr",
      "flesch",
  };
  return names;
}

FeatureCategory feature_category(std::size_t index) {
  if (index < kPhraseologyCount) return FeatureCategory::phraseology;
  if (index < kPhraseologyCount + kPunctuationCount) return FeatureCategory::punctuation;
  return FeatureCategory::lexical;
}

std::string_view category_name(FeatureCategory category) {
  switch (category) {
    case FeatureCategory::phraseology: return "phraseology";
    case FeatureCategory::punctuation: return "punctuation";
    case FeatureCategory::lexical: return "lexical";
  }
  return "unknown";
}

const std::array<std::string_view, kPunctuationCount - 1>& tracked_marks() {
  static const std::array<std::string_view, kPunctuationCount - 1> marks = {
      "!", "'", ",", ":", ";", "?", "\"", "-", "--", "@", "#", "."};
  return marks;
}

std::array<double, kPhraseologyCount> phraseology(const TextUnit& unit) {
  std::array<double, kPhraseologyCount> out{};
  const auto& paras = unit.paragraphs;
  const auto& sents = unit.sentences;
  if (sents.empty() || paras.empty()) return out;

  const auto per_sentence = population_stats(
      sents.size(), [&](std::size_t i) { return static_cast<double>(sents[i].word_count); });
  const auto words_per_para = population_stats(
      paras.size(), [&](std::size_t i) { return static_cast<double>(paras[i].word_count); });
  const auto sents_per_para = population_stats(
      paras.size(), [&](std::size_t i) { return static_cast<double>(paras[i].sentence_count); });

  out[0] = static_cast<double>(unit.words.size());
  out[1] = static_cast<double>(sents.size());
  out[2] = static_cast<double>(paras.size());
  out[3] = per_sentence.mean;
  out[4] = per_sentence.stdev;
  out[5] = words_per_para.mean;
  out[6] = words_per_para.stdev;
  out[7] = sents_per_para.mean;
  out[8] = sents_per_para.stdev;
  return out;
}

std::array<double, kPunctuationCount> punctuation(const TextUnit& unit) {
  std::array<double, kPunctuationCount> out{};
  if (unit.sentences.empty()) return out;
  const auto& marks = tracked_marks();
  std::array<std::size_t, kPunctuationCount - 1> counts{};
  for (const auto& m : unit.punct_marks) {
    const auto it = std::find(marks.begin(), marks.end(), m.mark);
    if (it != marks.end()) ++counts[static_cast<std::size_t>(it - marks.begin())];
  }
  const auto n = static_cast<double>(unit.sentences.size());
  out[0] = static_cast<double>(unit.punctuation_chars());
  for (std::size_t k = 0; k < counts.size(); ++k) out[k + 1] = static_cast<double>(counts[k]) / n;
  return out;
}

double mttr(std::span<const std::string> words, std::size_t window) {
  if (words.empty()) return 0.0;
  window = std::max<std::size_t>(window, 1);
  std::vector<std::string> folded;
  folded.reserve(words.size());
  for (const auto& w : words) folded.push_back(case_fold(w));

  if (folded.size() < window) {
    std::unordered_map<std::string_view, int> seen;
    for (const auto& w : folded) ++seen[w];
    return static_cast<double>(seen.size()) / static_cast<double>(folded.size());
  }

  std::unordered_map<std::string_view, std::size_t> counts;
  std::uint64_t unique_total = 0;
  for (std::size_t i = 0; i < folded.size(); ++i) {
    ++counts[folded[i]];
    if (i >= window) {
      auto it = counts.find(folded[i - window]);
      if (--it->second == 0) counts.erase(it);
    }
    if (i + 1 >= window) unique_total += counts.size();
  }
  const std::uint64_t windows = folded.size() - window + 1;
  return static_cast<double>(unique_total) / static_cast<double>(windows * window);
}

std::size_t syllables(std::string_view word) {
  std::string letters;
  for (char c : word) {
    const char f = fold(c);
    if (f >= 'a' && f <= 'z') letters.push_back(f);
  }
  constexpr std::string_view vowels = "aeiouy";
  std::size_t groups = 0;
  bool in_vowel = false;
  for (char c : letters) {
    const bool v = vowels.find(c) != std::string_view::npos;
    if (v && !in_vowel) ++groups;
    in_vowel = v;
  }
  if (!letters.empty() && letters.back() == 'e' && groups > 0) --groups;
  return std::max<std::size_t>(groups, 1);
}

double flesch(const TextUnit& unit) {
  if (unit.words.empty() || unit.sentences.empty()) return 0.0;
  std::size_t syl = 0;
  for (const auto& w : unit.words) syl += syllables(w);
  const auto words = static_cast<double>(unit.words.size());
  const auto sentences = static_cast<double>(unit.sentences.size());
  const double score =
      206.835 - 1.015 * (words / sentences) - 84.6 * (static_cast<double>(syl) / words);
  return std::clamp(score, -100.0, 121.22);
}

StyloVector extract(const TextUnit& unit, std::size_t mttr_window) {
  StyloVector v;
  const auto p = phraseology(unit);
  const auto q = punctuation(unit);
  std::copy(p.begin(), p.end(), v.values.begin());
  std::copy(q.begin(), q.end(), v.values.begin() + kPhraseologyCount);
  v[Feature::mttr] = mttr(unit.words, mttr_window);
  v[Feature::flesch] = flesch(unit);
  for (auto& x : v.values) {
    if (!std::isfinite(x)) x = 0.0;
  }
  return v;
}

}  // namespace stylo
