#include "stylo/stylocpa.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <nlohmann/json.hpp>

#include "stylo/error.hpp"
#include "stylo/parallel.hpp"
#include "stylo/random.hpp"

namespace stylo {

StyloMatrix build_matrix(std::span<const StyloVector> columns) {
  if (columns.size() < 2) throw InputError("a stylometry matrix needs at least 2 tweets");
  StyloMatrix m;
  m.rows.assign(kFeatureCount, std::vector<double>(columns.size()));
  for (std::size_t t = 0; t < columns.size(); ++t) {
    for (std::size_t k = 0; k < kFeatureCount; ++k) m.rows[k][t] = columns[t][k];
  }
  return m;
}

StyloMatrix build_matrix(const Timeline& tl, std::size_t mttr_window) {
  if (tl.size() < 2) {
    throw InputError("timeline '" + tl.id + "' has " + std::to_string(tl.size()) +
                     " tweet(s); change-point analysis needs at least 2");
  }
  std::vector<StyloVector> columns;
  columns.reserve(tl.size());
  for (const auto& t : tl.tweets) columns.push_back(extract(t.text, mttr_window));
  return build_matrix(columns);
}

PenaltyRule PenaltyRule::constant(double value) {
  if (!(value >= 0.0) || !std::isfinite(value)) throw ConfigError("penalty must be non-negative");
  PenaltyRule r;
  r.values_ = {value};
  r.broadcast_ = true;
  return r;
}

PenaltyRule PenaltyRule::per_row(std::vector<double> values) {
  if (values.empty()) throw ConfigError("per-row penalty list is empty");
  for (double v : values) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw ConfigError("penalty must be non-negative");
  }
  PenaltyRule r;
  r.values_ = std::move(values);
  return r;
}

double PenaltyRule::for_row(std::size_t row, const Series& s) const {
  if (values_.empty()) return default_penalty(s);
  if (broadcast_) return values_.front();
  if (row >= values_.size()) {
    throw ConfigError("no penalty given for row " + std::to_string(row));
  }
  return values_[row];
}

void check_gamma(double gamma) {
  if (!(gamma > 0.0 && gamma <= 1.0)) {
    throw ConfigError("agreement threshold gamma must lie in (0, 1], got " + std::to_string(gamma));
  }
}

std::size_t quorum(double gamma, std::size_t features) {
  const double raw = gamma * static_cast<double>(features);
  return static_cast<std::size_t>(std::ceil(raw - 1e-9));
}

std::vector<std::vector<std::size_t>> row_breakpoints(const StyloMatrix& m,
                                                      const PenaltyRule& penalty,
                                                      std::size_t min_seg) {
  std::vector<std::vector<std::size_t>> out;
  out.reserve(m.features());
  for (std::size_t k = 0; k < m.features(); ++k) {
    const Series s(m.rows[k]);
    out.push_back(pelt(s, penalty.for_row(k, s), min_seg).breakpoints);
  }
  return out;
}

ChangePointReport vote(std::vector<std::vector<std::size_t>> per_feature_breakpoints, double gamma,
                       std::uint64_t seed) {
  check_gamma(gamma);
  ChangePointReport report;
  report.agreement_threshold = gamma;
  report.per_feature_breakpoints = std::move(per_feature_breakpoints);
  const auto& bps = report.per_feature_breakpoints;

  std::vector<std::size_t> reported;
  for (const auto& row : bps) {
    if (!row.empty()) ++report.agreeing_feature_count;
    reported.insert(reported.end(), row.begin(), row.end());
  }
  report.change_detected = report.agreeing_feature_count > 0 &&
                           report.agreeing_feature_count >= quorum(gamma, bps.size());
  if (!report.change_detected) return report;

  std::sort(reported.begin(), reported.end());
  reported.erase(std::unique(reported.begin(), reported.end()), reported.end());

  std::size_t best_index = 0;
  std::size_t best_support = 0;
  std::size_t best_exact = 0;
  for (const std::size_t j : reported) {
    std::size_t support = 0;
    std::size_t exact = 0;
    for (const auto& row : bps) {
      bool near = false;
      for (const std::size_t b : row) {
        if (b + 1 >= j && b <= j + 1) near = true;
        if (b == j) ++exact;
      }
      if (near) ++support;
    }
    if (support > best_support || (support == best_support && exact > best_exact)) {
      best_index = j;
      best_support = support;
      best_exact = exact;
    }
  }

  if (best_support >= 2) {
    report.localization = best_index;
    return report;
  }

  std::vector<std::size_t> pool;
  for (const auto& row : bps) pool.insert(pool.end(), row.begin(), row.end());
  Rng rng(seed);
  report.localization = pool[static_cast<std::size_t>(rng.uniform_index(pool.size()))];
  report.random_localization = true;
  return report;
}

ChangePointReport detect(const StyloMatrix& m, const DetectOptions& options) {
  check_gamma(options.gamma);
  if (m.length() < 2) throw InputError("a stylometry matrix needs at least 2 columns");
  return vote(row_breakpoints(m, options.penalty, options.min_seg), options.gamma, options.seed);
}

double tune_gamma(const std::vector<Timeline>& dev_set, std::span<const double> grid,
                  const TuneOptions& options) {
  if (grid.empty()) throw ConfigError("gamma grid is empty");
  for (double g : grid) check_gamma(g);
  if (dev_set.empty()) throw InputError("development set is empty");

  // Row breakpoints do not depend on gamma; compute them once per timeline.
  const auto breakpoints = parallel_map(dev_set.size(), options.jobs, [&](std::size_t i) {
    return row_breakpoints(build_matrix(dev_set[i], options.mttr_window), options.penalty,
                           options.min_seg);
  });

  std::vector<double> sorted(grid.begin(), grid.end());
  std::sort(sorted.begin(), sorted.end());
  double best_gamma = sorted.front();
  double best_accuracy = -1.0;
  for (const double g : sorted) {
    std::size_t hits = 0;
    for (std::size_t i = 0; i < dev_set.size(); ++i) {
      const auto report = vote(breakpoints[i], g, derive_seed(options.seed, i));
      const auto& truth = dev_set[i].change_point;
      if (truth ? (report.change_detected && report.localization == truth)
                : !report.change_detected) {
        ++hits;
      }
    }
    const double accuracy = static_cast<double>(hits) / static_cast<double>(dev_set.size());
    if (accuracy > best_accuracy) {
      best_accuracy = accuracy;
      best_gamma = g;
    }
  }
  return best_gamma;
}

nlohmann::json to_json(const ChangePointReport& report) {
  nlohmann::json j;
  j["per_feature_breakpoints"] = report.per_feature_breakpoints;
  j["agreeing_feature_count"] = report.agreeing_feature_count;
  j["change_detected"] = report.change_detected;
  j["localization"] = report.localization ? nlohmann::json(*report.localization) : nlohmann::json();
  j["agreement_threshold"] = report.agreement_threshold;
  return j;
}

ChangePointReport report_from_json(const nlohmann::json& j) {
  try {
    ChangePointReport r;
    r.per_feature_breakpoints = j.at("per_feature_breakpoints").get<std::vector<std::vector<std::size_t>>>();
    r.agreeing_feature_count = j.at("agreeing_feature_count").get<std::size_t>();
    r.change_detected = j.at("change_detected").get<bool>();
    if (!j.at("localization").is_null()) r.localization = j.at("localization").get<std::size_t>();
    r.agreement_threshold = j.at("agreement_threshold").get<double>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed change-point report: ") + e.what());
  }
}

}  // namespace stylo
