#include "stylo/eval.hpp"

#include <ostream>

#include <nlohmann/json.hpp>

#include "stylo/error.hpp"
#include "stylo/parallel.hpp"
#include "stylo/random.hpp"

namespace stylo {

double accuracy(std::span<const int> predictions, std::span<const int> truth) {
  if (predictions.size() != truth.size()) {
    throw InputError("prediction and truth lengths differ (" + std::to_string(predictions.size()) +
                     " vs " + std::to_string(truth.size()) + ")");
  }
  if (predictions.empty()) throw InputError("accuracy of empty vectors is undefined");
  std::size_t correct = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) correct += predictions[i] == truth[i] ? 1 : 0;
  return static_cast<double>(correct) / static_cast<double>(truth.size());
}

double windowed_localization_accuracy(std::span<const LocalizationResult> results, std::size_t window) {
  if (results.empty()) throw InputError("no localization results");
  std::size_t hits = 0;
  for (const auto& r : results) {
    if (!r.true_cp) throw InputError("result '" + r.timeline_id + "' has no true change point");
    if (!r.detected || !r.predicted_cp) continue;
    const std::size_t p = *r.predicted_cp;
    const std::size_t t = *r.true_cp;
    if ((p > t ? p - t : t - p) <= window) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(results.size());
}

DetectionReport detection_report(std::span<const LocalizationResult> results) {
  DetectionReport r;
  for (const auto& x : results) {
    const bool actual = x.true_cp.has_value();
    if (actual && x.detected) ++r.true_positive;
    else if (!actual && x.detected) ++r.false_positive;
    else if (!actual) ++r.true_negative;
    else ++r.false_negative;
  }
  const auto ratio = [](std::size_t num, std::size_t den) {
    return den == 0 ? 1.0 : static_cast<double>(num) / static_cast<double>(den);
  };
  r.accuracy = results.empty() ? 0.0 : ratio(r.true_positive + r.true_negative, results.size());
  r.precision = ratio(r.true_positive, r.true_positive + r.false_positive);
  r.recall = ratio(r.true_positive, r.true_positive + r.false_negative);
  return r;
}

LocalizationRun run_localization(const std::vector<Timeline>& timelines, const DetectOptions& options,
                                 std::size_t mttr_window, std::size_t jobs) {
  check_gamma(options.gamma);
  LocalizationRun run;
  run.reports = parallel_map(timelines.size(), jobs, [&](std::size_t i) {
    DetectOptions o = options;
    o.seed = derive_seed(options.seed, i);
    return detect(build_matrix(timelines[i], mttr_window), o);
  });
  run.results.reserve(timelines.size());
  for (std::size_t i = 0; i < timelines.size(); ++i) {
    const auto& rep = run.reports[i];
    run.results.push_back({timelines[i].id, timelines[i].change_point, rep.localization, rep.change_detected});
  }
  return run;
}

nlohmann::json to_json(const DetectionReport& r) {
  return {{"accuracy", r.accuracy},
          {"precision", r.precision},
          {"recall", r.recall},
          {"true_positive", r.true_positive},
          {"false_positive", r.false_positive},
          {"true_negative", r.true_negative},
          {"false_negative", r.false_negative}};
}

void write_results_csv(std::ostream& out, std::span<const LocalizationResult> results) {
  out << "timeline_id,true_cp,predicted_cp,detected\n";
  for (const auto& r : results) {
    out << r.timeline_id << ',';
    if (r.true_cp) out << *r.true_cp;
    out << ',';
    if (r.predicted_cp) out << *r.predicted_cp;
    out << ',' << (r.detected ? 1 : 0) << '\n';
  }
}

}  // namespace stylo
