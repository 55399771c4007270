#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace stylo {

inline constexpr int kHumanLabel = 0;
inline constexpr int kAiLabel = 1;

struct Tweet {
  std::string text;
  std::optional<int> label;  // 0 human, 1 AI

  bool operator==(const Tweet&) const = default;
};

// Ordered tweets of one account. When present, change_point is the index of
// the first AI tweet: tweets[0, cp) are human and tweets[cp, N) are AI.
struct Timeline {
  std::string id;
  std::vector<Tweet> tweets;
  std::optional<std::size_t> change_point;
  std::optional<std::string> topic;

  std::size_t size() const { return tweets.size(); }

  // Throws ValidationError on N == 0, cp outside [1, N-1], labels outside
  // {0,1} or labels inconsistent with cp.
  void validate() const;

  // Tweets joined with '\n'; the text unit for timeline-level features.
  std::string joined_text() const;

  // The shared label when every tweet is labeled and all labels agree.
  std::optional<int> uniform_label() const;

  bool operator==(const Timeline&) const = default;
};

enum class Source { human, ai };

struct TweetPool {
  Source source = Source::human;
  std::string topic;
  std::vector<std::string> tweets;

  int label() const { return source == Source::ai ? kAiLabel : kHumanLabel; }
};

nlohmann::json to_json(const Timeline& tl);
// Schema check for one object; throws ValidationError.
Timeline timeline_from_json(const nlohmann::json& j);

// Parse errors and schema violations carry the 1-based line number. Blank
// lines are skipped.
std::vector<Timeline> parse_jsonl(std::istream& in);
std::vector<Timeline> load_jsonl(const std::filesystem::path& path);
void write_jsonl(std::ostream& out, const std::vector<Timeline>& timelines);
void save_jsonl(const std::filesystem::path& path, const std::vector<Timeline>& timelines);

// All tweet texts of the given timelines, as a pool of the given source.
TweetPool pool_from_timelines(const std::vector<Timeline>& timelines, Source source,
                              std::string topic = {});

// floor(budget / n) timelines of n tweets each, sampled without replacement
// within a timeline and labeled by the pool's source.
std::vector<Timeline> synth_pure(const TweetPool& pool, std::size_t n, std::size_t budget,
                                 std::uint64_t seed);

// `count` timelines of n tweets: n - l human tweets followed by l AI
// tweets, l uniform on [1, n-1]; change_point = n - l.
std::vector<Timeline> synth_mixed(const TweetPool& human, const TweetPool& ai, std::size_t n,
                                  std::size_t count, std::uint64_t seed);

}  // namespace stylo
