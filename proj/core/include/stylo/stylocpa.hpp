#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "stylo/changepoint.hpp"
#include "stylo/corpus.hpp"
#include "stylo/textstats.hpp"

namespace stylo {

inline constexpr double kDefaultGamma = 0.15;

// K x N matrix: row k is feature k across the timeline's tweets.
struct StyloMatrix {
  std::vector<std::vector<double>> rows;

  std::size_t features() const { return rows.size(); }
  std::size_t length() const { return rows.empty() ? 0 : rows.front().size(); }
};

// Column t is extract(tweet t). Throws InputError for timelines shorter than 2.
StyloMatrix build_matrix(const Timeline& tl, std::size_t mttr_window = kDefaultMttrWindow);
StyloMatrix build_matrix(std::span<const StyloVector> columns);

// Per-row penalty: automatic (default_penalty of each row), one value for
// every row, or an explicit value per row.
class PenaltyRule {
 public:
  static PenaltyRule automatic() { return PenaltyRule{}; }
  static PenaltyRule constant(double value);
  static PenaltyRule per_row(std::vector<double> values);

  bool is_automatic() const { return values_.empty(); }
  double for_row(std::size_t row, const Series& s) const;

 private:
  std::vector<double> values_;
  bool broadcast_ = false;
};

struct DetectOptions {
  double gamma = kDefaultGamma;
  PenaltyRule penalty = PenaltyRule::automatic();
  std::size_t min_seg = kDefaultMinSegment;
  std::uint64_t seed = 0;
};

struct ChangePointReport {
  std::vector<std::vector<std::size_t>> per_feature_breakpoints;
  std::size_t agreeing_feature_count = 0;
  bool change_detected = false;
  std::optional<std::size_t> localization;
  double agreement_threshold = kDefaultGamma;
  // True when no index was shared by two voting features and the
  // localization was drawn at random.
  bool random_localization = false;

  bool operator==(const ChangePointReport&) const = default;
};

// Number of voting features needed: ceil(gamma * K), robust to the
// representation error of gamma (0.15 * 24 -> 4).
std::size_t quorum(double gamma, std::size_t features);

// Throws ConfigError unless 0 < gamma <= 1.
void check_gamma(double gamma);

// PELT on every row of the matrix.
std::vector<std::vector<std::size_t>> row_breakpoints(const StyloMatrix& m,
                                                      const PenaltyRule& penalty,
                                                      std::size_t min_seg);

// Agreement vote over precomputed per-feature breakpoints.
//
// A feature votes when it reports at least one breakpoint. The support of an
// index j is the number of voting features with a breakpoint within +-1 of
// j; the localization is the reported index of maximal support (ties: more
// exact reports, then the smaller index). When no index has support >= 2,
// one (feature, breakpoint) pair is drawn uniformly with `seed`.
ChangePointReport vote(std::vector<std::vector<std::size_t>> per_feature_breakpoints,
                       double gamma, std::uint64_t seed);

ChangePointReport detect(const StyloMatrix& m, const DetectOptions& options = {});

struct TuneOptions {
  std::size_t mttr_window = kDefaultMttrWindow;
  PenaltyRule penalty = PenaltyRule::automatic();
  std::size_t min_seg = kDefaultMinSegment;
  std::uint64_t seed = 0;
  std::size_t jobs = 1;
};

// Grid value with the best localization accuracy at W=0 over the dev set.
// A timeline with a change point scores when detected at exactly that index;
// one without scores when no change is detected. Ties go to the smaller
// gamma. Throws ConfigError on an empty grid, InputError on an empty dev set.
double tune_gamma(const std::vector<Timeline>& dev_set, std::span<const double> grid,
                  const TuneOptions& options = {});

nlohmann::json to_json(const ChangePointReport& report);
ChangePointReport report_from_json(const nlohmann::json& j);

}  // namespace stylo
