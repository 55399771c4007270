#include "stylo/synthetic.hpp"

#include <array>
#include <string_view>

#include "stylo/error.hpp"
#include "stylo/random.hpp"

namespace stylo {
namespace {

constexpr std::array<std::string_view, 96> kShortWords = {
    "the",  "a",     "to",    "and",   "we",    "you",   "it",    "is",    "so",    "my",
    "this", "that",  "just",  "got",   "get",   "new",   "all",   "now",   "day",   "out",
    "can",  "not",   "one",   "big",   "lol",   "yes",   "no",    "way",   "go",    "see",
    "was",  "for",   "on",    "in",    "at",    "up",    "off",   "how",   "why",   "what",
    "who",  "were",  "they",  "them",  "our",   "us",    "me",    "he",    "she",   "his",
    "her",  "did",   "do",    "had",   "has",   "man",   "guys",  "folks", "love",  "hate",
    "good", "bad",   "best",  "sick",  "home",  "work",  "kids",  "mom",   "dad",   "town",
    "week", "year",  "time",  "lot",   "more",  "less",  "too",   "very",  "real",  "fake",
    "news", "told",  "said",  "look",  "wait",  "stop",  "run",   "shot",  "line",  "wow",
    "omg",  "tbh",   "idk",   "btw",   "like",  "really"};

constexpr std::array<std::string_view, 48> kLongWords = {
    "significant",   "information",    "community",     "individuals",    "particularly",
    "important",     "additionally",   "development",   "considerable",   "responsibility",
    "government",    "population",     "environmental", "continuously",   "approximately",
    "opportunity",   "communication",  "organization",  "understanding",  "recommendation",
    "necessary",     "evidence",       "officials",     "administration", "institutions",
    "implications",  "unprecedented",  "strategies",    "initiatives",    "essential",
    "effectively",   "potentially",    "consequences",  "measures",       "availability",
    "demonstrated",  "researchers",    "international", "perspective",    "regulations",
    "comprehensive", "infrastructure", "ultimately",    "facilitate",     "collaboration",
    "determination", "increasingly",   "accessibility"};

constexpr std::array<std::string_view, 12> kContractions = {
    "don't", "can't", "it's", "I'm", "we're", "that's", "won't", "isn't", "you're", "they're", "didn't", "let's"};

constexpr std::array<std::string_view, 10> kCompounds = {
    "well-known", "long-term", "self-care", "real-time", "follow-up",
    "high-risk",  "so-called", "full-time", "up-to-date", "two-week"};

constexpr std::array<std::string_view, 10> kHandles = {
    "who", "cdcgov", "nytimes", "drsmith", "janedoe", "newsdesk", "mayor", "nurse_amy", "joe_b", "citydesk"};

std::vector<std::string_view> topic_words(const std::string& topic) {
  if (topic == "climate") return {"climate", "warming", "carbon", "emissions", "weather", "planet", "heat"};
  if (topic == "vaccine") return {"vaccine", "vax", "dose", "booster", "jab", "immunity", "pharma"};
  return {"covid", "virus", "masks", "lockdown", "cases", "pandemic", "testing"};
}

std::vector<std::string_view> topic_tags(const std::string& topic) {
  if (topic == "climate") return {"climate", "ClimateAction", "globalwarming"};
  if (topic == "vaccine") return {"vaccine", "vax", "GetVaccinated"};
  return {"covid19", "COVID", "StaySafe"};
}

template <typename Container>
std::string_view pick(const Container& c, Rng& rng) {
  return c[static_cast<std::size_t>(rng.uniform_index(c.size()))];
}

std::size_t range(std::size_t lo, std::size_t hi, Rng& rng) {
  if (hi <= lo) return lo;
  return static_cast<std::size_t>(rng.uniform_int(static_cast<std::int64_t>(lo), static_cast<std::int64_t>(hi)));
}

std::string terminator(const StyleProfile& p, Rng& rng) {
  const double total = p.weight_period + p.weight_exclamation + p.weight_question + p.weight_none;
  double u = rng.uniform01() * total;
  if ((u -= p.weight_period) < 0.0) return ".";
  if ((u -= p.weight_exclamation) < 0.0) return "!";
  if ((u -= p.weight_question) < 0.0) return "?";
  return "";
}

std::string capitalized(std::string w) {
  if (!w.empty() && w[0] >= 'a' && w[0] <= 'z') w[0] = static_cast<char>(w[0] - 'a' + 'A');
  return w;
}

std::string short_url(Rng& rng) {
  constexpr std::string_view alphabet = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789";
  std::string url = "https://t.co/";
  for (int i = 0; i < 8; ++i) url.push_back(alphabet[static_cast<std::size_t>(rng.uniform_index(alphabet.size()))]);
  return url;
}

}  // namespace

StyleProfile human_timeline_profile() {
  StyleProfile p;
  p.min_sentences = p.max_sentences = 1;
  p.min_words = 5;
  p.max_words = 14;
  p.weight_period = 0.0;
  p.weight_exclamation = 1.0;
  p.p_comma = 0.03;
  p.p_quote = 0.10;
  p.p_hyphen = 0.04;
  p.p_contraction = 0.12;
  p.p_repeat = 0.03;
  p.p_long_word = 0.03;
  p.min_mentions = p.max_mentions = 1;
  p.min_hashtags = p.max_hashtags = 1;
  p.p_url = 0.3;
  return p;
}

StyleProfile ai_timeline_profile() {
  StyleProfile p;
  p.min_sentences = p.max_sentences = 3;
  p.min_words = 9;
  p.max_words = 18;
  p.weight_period = 1.0;
  p.p_comma = 0.10;
  p.p_semicolon = 0.15;
  p.p_colon = 0.10;
  p.p_quote = 0.05;
  p.p_double_hyphen = 0.10;
  p.p_hyphen = 0.05;
  p.p_contraction = 0.01;
  p.p_repeat = 0.15;
  p.p_long_word = 0.25;
  return p;
}

StyleProfile human_classifier_profile() {
  StyleProfile p;
  p.min_sentences = 2;
  p.max_sentences = 4;
  p.min_words = 5;
  p.max_words = 14;
  p.weight_period = 0.35;
  p.weight_exclamation = 0.35;
  p.weight_question = 0.2;
  p.weight_none = 0.1;
  p.p_comma = 0.03;
  p.p_quote = 0.1;
  p.p_hyphen = 0.04;
  p.p_contraction = 0.1;
  p.p_repeat = 0.03;
  p.p_long_word = 0.08;
  p.max_mentions = 1;
  p.max_hashtags = 2;
  p.p_url = 0.2;
  return p;
}

StyleProfile ai_classifier_profile() {
  StyleProfile p = human_classifier_profile();
  p.weight_period = 0.8;
  p.weight_exclamation = 0.05;
  p.weight_question = 0.05;
  p.weight_none = 0.1;
  p.p_comma = 0.18;
  p.p_semicolon = 0.3;
  p.p_contraction = 0.03;
  p.p_repeat = 0.25;
  return p;
}

std::string generate_tweet(const StyleProfile& p, const std::string& topic, std::uint64_t seed) {
  Rng rng(seed);
  const auto topical = topic_words(topic);
  const auto tags = topic_tags(topic);
  const std::size_t sentences = std::max<std::size_t>(range(p.min_sentences, p.max_sentences, rng), 1);
  const std::size_t mentions = range(p.min_mentions, p.max_mentions, rng);
  const std::size_t hashtags = range(p.min_hashtags, p.max_hashtags, rng);

  std::vector<std::string> used;
  std::string tweet;
  for (std::size_t s = 0; s < sentences; ++s) {
    std::vector<std::string> words;
    const std::size_t count = range(p.min_words, p.max_words, rng);
    for (std::size_t w = 0; w < count; ++w) {
      std::string word;
      if (!used.empty() && rng.bernoulli(p.p_repeat)) {
        word = used[static_cast<std::size_t>(rng.uniform_index(used.size()))];
      } else if (rng.bernoulli(p.p_contraction)) {
        word = pick(kContractions, rng);
      } else if (rng.bernoulli(p.p_hyphen)) {
        word = pick(kCompounds, rng);
      } else if (rng.bernoulli(p.p_topic_word)) {
        word = pick(topical, rng);
      } else if (rng.bernoulli(p.p_long_word)) {
        word = pick(kLongWords, rng);
      } else {
        word = pick(kShortWords, rng);
      }
      used.push_back(word);
      words.push_back(std::move(word));
    }
    if (rng.bernoulli(p.p_quote)) {
      auto& w = words[static_cast<std::size_t>(rng.uniform_index(words.size()))];
      w = "\"" + w + "\"";
    }

    // Separator after each word but the last.
    std::vector<std::string> gaps(words.size() > 0 ? words.size() - 1 : 0, " ");
    for (auto& g : gaps) {
      if (rng.bernoulli(p.p_comma)) g = ", ";
    }
    if (!gaps.empty()) {
      if (rng.bernoulli(p.p_semicolon)) gaps[static_cast<std::size_t>(rng.uniform_index(gaps.size()))] = "; ";
      if (rng.bernoulli(p.p_colon)) gaps[static_cast<std::size_t>(rng.uniform_index(gaps.size()))] = ": ";
      if (rng.bernoulli(p.p_double_hyphen)) gaps[static_cast<std::size_t>(rng.uniform_index(gaps.size()))] = " -- ";
    }

    std::string sentence;
    if (s == 0) {
      for (std::size_t m = 0; m < mentions; ++m) sentence += "@" + std::string(pick(kHandles, rng)) + " ";
    }
    for (std::size_t w = 0; w < words.size(); ++w) {
      sentence += (w == 0 && (s > 0 || mentions == 0)) ? capitalized(words[w]) : words[w];
      if (w < gaps.size()) sentence += gaps[w];
    }
    if (s + 1 == sentences) {
      for (std::size_t h = 0; h < hashtags; ++h) sentence += " #" + std::string(pick(tags, rng));
      if (rng.bernoulli(p.p_url)) sentence += " " + short_url(rng);
    }
    sentence += terminator(p, rng);
    if (!tweet.empty()) tweet += ' ';
    tweet += sentence;
  }
  return tweet;
}

TweetPool generate_pool(const StyleProfile& profile, Source source, const std::string& topic,
                        std::size_t size, std::uint64_t seed) {
  if (size == 0) throw InputError("pool size must be positive");
  TweetPool pool{source, topic, {}};
  pool.tweets.reserve(size);
  for (std::size_t i = 0; i < size; ++i) pool.tweets.push_back(generate_tweet(profile, topic, derive_seed(seed, i)));
  return pool;
}

TweetPool default_human_pool(std::size_t size, std::uint64_t seed, const std::string& topic) {
  return generate_pool(human_timeline_profile(), Source::human, topic, size, seed);
}

TweetPool default_ai_pool(std::size_t size, std::uint64_t seed, const std::string& topic) {
  return generate_pool(ai_timeline_profile(), Source::ai, topic, size, derive_seed(seed, 0xA1));
}

}  // namespace stylo
