#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace stylo {

/*
 * Tokenization rules
 * ------------------
 * Input is UTF-8. Invalid byte sequences are skipped as non-text.
 *
 *  - Paragraphs: the raw text split on '\n' (a trailing '\r' is dropped).
 *    Paragraphs that are empty or whitespace-only are discarded.
 *  - URLs: a run of non-space characters starting with "http://",
 *    "https://" or "www." (case-insensitive), beginning at a position that is
 *    not inside a word. Trailing characters from  . , ! ? ; : ) " '  are
 *    peeled off and tokenized normally. A URL is one word token; characters
 *    inside it are never punctuation and never sentence boundaries.
 *  - Mentions and hashtags: '@' or '#' not inside a word and followed by a
 *    word character, plus the maximal run of word characters after it
 *    ("@who", "#vax"). One word token; the leading '@' / '#' also counts as
 *    a punctuation mark.
 *  - Word characters: ASCII letters and digits, '_', and non-ASCII code
 *    points outside punctuation, symbol and emoji blocks. A word token is a
 *    maximal run of word characters; an apostrophe (' or U+2019), a single
 *    hyphen, or a '.' between two digits joins two runs into one token
 *    ("don't", "well-known", "3.5") and is still counted as punctuation.
 *    A word token must contain an ASCII letter or digit or a non-ASCII
 *    letter; underscore-only runs are dropped.
 *  - Punctuation marks: ASCII punctuation characters, the ellipsis U+2026,
 *    curly quotes (U+2018/U+2019 count as ', U+201C/U+201D as "), and the
 *    dashes U+2013/U+2014. "--" is matched before "-", so "---" is one "--"
 *    plus one "-". Emoji and other symbols are ignored.
 *  - Sentences: a boundary is an ASCII '.', '!' or '?' that is not part of
 *    a token (URL, digit joiner), or the end of a paragraph. Sentences with
 *    no words are dropped; runs of terminators attach to the preceding
 *    sentence's text.
 */

// One punctuation token. `mark` is the canonical spelling ("--", "'", ...)
// and `chars` the number of characters it occupied in the source.
struct PunctMark {
  std::string mark;
  std::size_t chars = 1;

  bool operator==(const PunctMark&) const = default;
};

struct Sentence {
  std::string text;
  std::size_t first_word = 0;
  std::size_t word_count = 0;
};

struct Paragraph {
  std::string text;
  std::size_t first_sentence = 0;
  std::size_t sentence_count = 0;
  std::size_t word_count = 0;
};

// A tokenized text unit: one tweet, or a whole timeline joined with '\n'.
struct TextUnit {
  std::string raw;
  std::vector<Paragraph> paragraphs;
  std::vector<Sentence> sentences;
  std::vector<std::string> words;
  std::vector<PunctMark> punct_marks;

  // Total punctuation characters (a "--" contributes 2).
  std::size_t punctuation_chars() const;
};

TextUnit tokenize(std::string_view raw);

inline constexpr std::size_t kFeatureCount = 24;
inline constexpr std::size_t kPhraseologyCount = 9;
inline constexpr std::size_t kPunctuationCount = 13;
inline constexpr std::size_t kLexicalCount = 2;
inline constexpr std::size_t kDefaultMttrWindow = 10;

// Feature order of a StyloVector. Stable: model files and CSV dumps rely on it.
enum class Feature : std::size_t {
  word_count,
  sentence_count,
  paragraph_count,
  mean_words_per_sentence,
  stdev_words_per_sentence,
  mean_words_per_paragraph,
  stdev_words_per_paragraph,
  mean_sentences_per_paragraph,
  stdev_sentences_per_paragraph,
  punct_total,
  punct_exclamation,
  punct_apostrophe,
  punct_comma,
  punct_colon,
  punct_semicolon,
  punct_question,
  punct_quote,
  punct_hyphen,
  punct_double_hyphen,
  punct_at,
  punct_hash,
  punct_period,
  mttr,
  flesch,
};

enum class FeatureCategory : std::size_t { phraseology, punctuation, lexical };
inline constexpr std::size_t kCategoryCount = 3;

const std::array<std::string_view, kFeatureCount>& feature_names();
FeatureCategory feature_category(std::size_t index);
std::string_view category_name(FeatureCategory category);

// Marks with a per-sentence slot, in slot order (slots 1..12 of punctuation()).
const std::array<std::string_view, kPunctuationCount - 1>& tracked_marks();

struct StyloVector {
  std::array<double, kFeatureCount> values{};

  double& operator[](std::size_t i) { return values[i]; }
  double operator[](std::size_t i) const { return values[i]; }
  double& operator[](Feature f) { return values[static_cast<std::size_t>(f)]; }
  double operator[](Feature f) const { return values[static_cast<std::size_t>(f)]; }

  bool operator==(const StyloVector&) const = default;
};

// word count, sentence count, paragraph count, then population mean/stdev of
// words per sentence, words per paragraph and sentences per paragraph.
// All zeros when the unit has no sentences or no paragraphs.
std::array<double, kPhraseologyCount> phraseology(const TextUnit& unit);

// Slot 0: punctuation character total. Slots 1..12: occurrences of each
// tracked mark divided by the sentence count. All zeros without sentences.
std::array<double, kPunctuationCount> punctuation(const TextUnit& unit);

// Moving-average type-token ratio over case-folded tokens. Falls back to the
// plain type-token ratio when there are fewer than `window` tokens.
double mttr(std::span<const std::string> words, std::size_t window);

// Vowel-group syllable estimate: maximal runs of a/e/i/o/u/y over the ASCII
// letters of the word, minus one for a trailing 'e', at least 1.
std::size_t syllables(std::string_view word);

// Flesch Reading Ease clamped to [-100, 121.22]; 0 for units without words
// or sentences.
double flesch(const TextUnit& unit);

StyloVector extract(const TextUnit& unit, std::size_t mttr_window = kDefaultMttrWindow);
inline StyloVector extract(std::string_view raw, std::size_t mttr_window = kDefaultMttrWindow) {
  return extract(tokenize(raw), mttr_window);
}

}  // namespace stylo
