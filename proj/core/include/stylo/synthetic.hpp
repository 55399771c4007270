#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "stylo/corpus.hpp"

namespace stylo {

// Style parameters of a templated tweet generator. Every count range is
// inclusive and sampled uniformly per tweet (or per sentence).
struct StyleProfile {
  std::size_t min_sentences = 1;
  std::size_t max_sentences = 2;
  std::size_t min_words = 4;
  std::size_t max_words = 12;

  // Sentence terminator weights: '.', '!', '?', none.
  double weight_period = 1.0;
  double weight_exclamation = 0.0;
  double weight_question = 0.0;
  double weight_none = 0.0;

  double p_comma = 0.0;           // after each non-final word
  double p_semicolon = 0.0;       // per sentence, joins two clauses
  double p_colon = 0.0;           // per sentence
  double p_quote = 0.0;           // per sentence, quotes one word
  double p_double_hyphen = 0.0;   // per sentence
  double p_hyphen = 0.0;          // per word, hyphenated compound
  double p_contraction = 0.0;     // per word
  double p_repeat = 0.0;          // per word, reuse a word already in the tweet
  double p_long_word = 0.0;       // per word, draw from the polysyllabic list
  double p_topic_word = 0.1;      // per word

  std::size_t min_mentions = 0;
  std::size_t max_mentions = 0;
  std::size_t min_hashtags = 0;
  std::size_t max_hashtags = 0;
  double p_url = 0.0;
};

// Casual human-like and formal AI-like profiles used for mixed timelines.
// They are built so that sentence count, sentences per paragraph and the
// per-sentence rates of '!', '.', '@' and '#' differ by a wide margin
// between the two sources.
StyleProfile human_timeline_profile();
StyleProfile ai_timeline_profile();

// Overlapping profiles for tweet classification: the sources differ in
// punctuation rates and word repetition but share length ranges.
StyleProfile human_classifier_profile();
StyleProfile ai_classifier_profile();

std::string generate_tweet(const StyleProfile& profile, const std::string& topic,
                           std::uint64_t seed);

TweetPool generate_pool(const StyleProfile& profile, Source source, const std::string& topic,
                        std::size_t size, std::uint64_t seed);

// Default pools for the CLI and the test suites.
TweetPool default_human_pool(std::size_t size, std::uint64_t seed, const std::string& topic = "covid");
TweetPool default_ai_pool(std::size_t size, std::uint64_t seed, const std::string& topic = "covid");

}  // namespace stylo
