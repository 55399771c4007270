#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "stylo/corpus.hpp"
#include "stylo/stylocpa.hpp"

namespace stylo {

// Fraction of equal entries. Throws InputError on empty or unequal inputs.
double accuracy(std::span<const int> predictions, std::span<const int> truth);

struct LocalizationResult {
  std::string timeline_id;
  std::optional<std::size_t> true_cp;
  std::optional<std::size_t> predicted_cp;
  bool detected = false;
};

// Fraction of results detected with |predicted - true| <= window. An
// undetected change is a miss at every window. Throws InputError when a
// result lacks true_cp or the list is empty.
double windowed_localization_accuracy(std::span<const LocalizationResult> results,
                                      std::size_t window);

// Binary "change exists" metrics: positives are results with a true_cp.
struct DetectionReport {
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  std::size_t true_positive = 0;
  std::size_t false_positive = 0;
  std::size_t true_negative = 0;
  std::size_t false_negative = 0;
};

// Precision (recall) is 1 when nothing was predicted (nothing was there).
DetectionReport detection_report(std::span<const LocalizationResult> results);

struct LocalizationRun {
  std::vector<ChangePointReport> reports;
  std::vector<LocalizationResult> results;
};

// StyloCPA over every timeline; timeline i uses seed derive_seed(seed, i).
// Results are in input order regardless of `jobs`.
LocalizationRun run_localization(const std::vector<Timeline>& timelines,
                                 const DetectOptions& options, std::size_t mttr_window,
                                 std::size_t jobs = 1);

nlohmann::json to_json(const DetectionReport& report);
// CSV: timeline_id,true_cp,predicted_cp,detected (empty cell for absent).
void write_results_csv(std::ostream& out, std::span<const LocalizationResult> results);

}  // namespace stylo
