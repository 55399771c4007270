#include "stylo/corpus.hpp"

#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>

#include <nlohmann/json.hpp>

#include "stylo/error.hpp"
#include "stylo/random.hpp"

namespace stylo {
namespace {

using nlohmann::json;

std::string source_name(Source s) { return s == Source::ai ? "ai" : "human"; }

// k distinct indices from [0, pool_size), partial Fisher-Yates.
std::vector<std::size_t> sample_without_replacement(std::size_t pool_size, std::size_t k, Rng& rng) {
  std::vector<std::size_t> idx(pool_size);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  for (std::size_t i = 0; i < k; ++i) {
    const auto j = i + static_cast<std::size_t>(rng.uniform_index(pool_size - i));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(k);
  return idx;
}

std::string padded(std::size_t i) {
  std::string s = std::to_string(i);
  return std::string(s.size() < 5 ? 5 - s.size() : 0, '0') + s;
}

}  // namespace

void Timeline::validate() const {
  const auto where = [&] { return "timeline '" + id + "': "; };
  if (tweets.empty()) throw ValidationError(where() + "must contain at least one tweet");
  for (std::size_t i = 0; i < tweets.size(); ++i) {
    if (tweets[i].label && *tweets[i].label != kHumanLabel && *tweets[i].label != kAiLabel) {
      throw ValidationError(where() + "tweet " + std::to_string(i) + " has label " +
                            std::to_string(*tweets[i].label) + " (expected 0 or 1)");
    }
  }
  if (!change_point) return;
  const std::size_t cp = *change_point;
  if (cp < 1 || cp + 1 > tweets.size()) {
    throw ValidationError(where() + "change_point " + std::to_string(cp) + " outside [1, " +
                          std::to_string(tweets.size() > 0 ? tweets.size() - 1 : 0) + "]");
  }
  for (std::size_t i = 0; i < tweets.size(); ++i) {
    if (!tweets[i].label) continue;
    const int expected = i < cp ? kHumanLabel : kAiLabel;
    if (*tweets[i].label != expected) {
      throw ValidationError(where() + "tweet " + std::to_string(i) + " label contradicts change_point " +
                            std::to_string(cp));
    }
  }
}

std::string Timeline::joined_text() const {
  std::string out;
  for (std::size_t i = 0; i < tweets.size(); ++i) {
    if (i > 0) out.push_back('\n');
    out += tweets[i].text;
  }
  return out;
}

std::optional<int> Timeline::uniform_label() const {
  std::optional<int> label;
  for (const auto& t : tweets) {
    if (!t.label) return std::nullopt;
    if (label && *label != *t.label) return std::nullopt;
    label = t.label;
  }
  return label;
}

json to_json(const Timeline& tl) {
  json j;
  j["id"] = tl.id;
  json tweets = json::array();
  for (const auto& t : tl.tweets) {
    json tj;
    tj["text"] = t.text;
    if (t.label) tj["label"] = *t.label;
    tweets.push_back(std::move(tj));
  }
  j["tweets"] = std::move(tweets);
  if (tl.change_point) j["change_point"] = *tl.change_point;
  if (tl.topic) j["topic"] = *tl.topic;
  return j;
}

Timeline timeline_from_json(const json& j) {
  if (!j.is_object()) throw ValidationError("timeline record must be a JSON object");
  Timeline tl;
  const auto id = j.find("id");
  if (id == j.end() || !id->is_string()) throw ValidationError("field 'id' must be a string");
  tl.id = id->get<std::string>();

  const auto tweets = j.find("tweets");
  if (tweets == j.end() || !tweets->is_array()) {
    throw ValidationError("field 'tweets' must be an array");
  }
  for (const auto& t : *tweets) {
    if (!t.is_object()) throw ValidationError("each tweet must be an object");
    const auto text = t.find("text");
    if (text == t.end() || !text->is_string()) {
      throw ValidationError("tweet field 'text' must be a string");
    }
    Tweet tw{text->get<std::string>(), std::nullopt};
    if (const auto label = t.find("label"); label != t.end() && !label->is_null()) {
      if (!label->is_number_integer()) throw ValidationError("tweet field 'label' must be 0 or 1");
      tw.label = label->get<int>();
    }
    tl.tweets.push_back(std::move(tw));
  }

  if (const auto cp = j.find("change_point"); cp != j.end() && !cp->is_null()) {
    if (!cp->is_number_integer()) throw ValidationError("field 'change_point' must be an integer");
    const auto v = cp->get<long long>();
    if (v < 0) throw ValidationError("change_point " + std::to_string(v) + " is negative");
    tl.change_point = static_cast<std::size_t>(v);
  }
  if (const auto topic = j.find("topic"); topic != j.end() && !topic->is_null()) {
    if (!topic->is_string()) throw ValidationError("field 'topic' must be a string");
    tl.topic = topic->get<std::string>();
  }
  tl.validate();
  return tl;
}

std::vector<Timeline> parse_jsonl(std::istream& in) {
  std::vector<Timeline> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(std::string("malformed JSON: ") + e.what(), line_no);
    }
    try {
      out.push_back(timeline_from_json(j));
    } catch (const ValidationError& e) {
      throw ParseError(e.what(), line_no);
    }
  }
  return out;
}

std::vector<Timeline> load_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open timeline file: " + path.string());
  try {
    return parse_jsonl(in);
  } catch (const ParseError& e) {
    throw ParseError(e.detail(), e.line(), path.string());
  }
}

void write_jsonl(std::ostream& out, const std::vector<Timeline>& timelines) {
  for (const auto& tl : timelines) out << to_json(tl).dump() << '\n';
}

void save_jsonl(const std::filesystem::path& path, const std::vector<Timeline>& timelines) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write timeline file: " + path.string());
  write_jsonl(out, timelines);
}

TweetPool pool_from_timelines(const std::vector<Timeline>& timelines, Source source,
                              std::string topic) {
  TweetPool pool{source, std::move(topic), {}};
  for (const auto& tl : timelines) {
    for (const auto& t : tl.tweets) pool.tweets.push_back(t.text);
  }
  return pool;
}

std::vector<Timeline> synth_pure(const TweetPool& pool, std::size_t n, std::size_t budget,
                                 std::uint64_t seed) {
  if (n == 0) throw InputError("timeline length must be positive");
  if (pool.tweets.size() < n) {
    throw InputError("pool of " + std::to_string(pool.tweets.size()) +
                     " tweets is too small for timelines of length " + std::to_string(n));
  }
  const std::size_t m = budget / n;
  Rng rng(seed);
  std::vector<Timeline> out;
  out.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    Timeline tl;
    tl.id = source_name(pool.source) + "-n" + std::to_string(n) + "-" + padded(i);
    if (!pool.topic.empty()) tl.topic = pool.topic;
    for (auto k : sample_without_replacement(pool.tweets.size(), n, rng)) {
      tl.tweets.push_back({pool.tweets[k], pool.label()});
    }
    out.push_back(std::move(tl));
  }
  return out;
}

std::vector<Timeline> synth_mixed(const TweetPool& human, const TweetPool& ai, std::size_t n,
                                  std::size_t count, std::uint64_t seed) {
  if (n < 2) throw InputError("mixed timelines need at least 2 tweets");
  if (human.tweets.size() < n - 1 || ai.tweets.size() < n - 1) {
    throw InputError("mixed timelines of length " + std::to_string(n) +
                     " need at least " + std::to_string(n - 1) + " tweets in each pool");
  }
  Rng rng(seed);
  std::vector<Timeline> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const auto ai_count = static_cast<std::size_t>(rng.uniform_int(1, static_cast<std::int64_t>(n) - 1));
    const std::size_t cp = n - ai_count;
    Timeline tl;
    tl.id = "mixed-n" + std::to_string(n) + "-" + padded(i);
    if (!human.topic.empty()) tl.topic = human.topic;
    tl.change_point = cp;
    for (auto k : sample_without_replacement(human.tweets.size(), cp, rng)) {
      tl.tweets.push_back({human.tweets[k], kHumanLabel});
    }
    for (auto k : sample_without_replacement(ai.tweets.size(), ai_count, rng)) {
      tl.tweets.push_back({ai.tweets[k], kAiLabel});
    }
    out.push_back(std::move(tl));
  }
  return out;
}

}  // namespace stylo
