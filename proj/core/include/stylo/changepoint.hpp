#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace stylo {

// A finite univariate series: one stylometric feature across a timeline or
// any external score sequence.
class Series {
 public:
  // Throws InputError if empty or if any value is NaN/inf.
  explicit Series(std::vector<double> values);

  std::span<const double> values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }

 private:
  std::vector<double> values_;
};

struct Segmentation {
  // Strictly increasing start indices of every segment but the first.
  std::vector<std::size_t> breakpoints;
  // Sum of segment costs plus penalty per breakpoint.
  double total_cost = 0.0;

  bool operator==(const Segmentation&) const = default;
};

// Sum of squared deviations from the segment mean, evaluated in O(1) from
// prefix sums of the mean-centred series. Exactly 0 on constant segments.
class L2Cost {
 public:
  explicit L2Cost(std::span<const double> values);

  // Cost of the half-open range [a, b). Throws RangeError unless 0 <= a < b <= N.
  double operator()(std::size_t a, std::size_t b) const;
  // Same without the range check; for inner loops that own the invariant.
  double unchecked(std::size_t a, std::size_t b) const;
  std::size_t size() const { return n_; }

 private:

  std::size_t n_;
  std::vector<double> sum_;
  std::vector<double> sum_sq_;
  std::vector<std::size_t> changes_;  // changes_[i]: # of j < i with x[j] != x[j-1]
};

inline constexpr std::size_t kDefaultMinSegment = 2;
inline constexpr std::size_t kBruteForceLimit = 2000;

double segment_cost(const Series& s, std::size_t a, std::size_t b);

// Optimal penalized segmentation by PELT. Ties go to the earliest last
// change point, matching brute_force_optimal exactly.
// Throws InputError when N < min_seg, penalty < 0 or min_seg == 0.
Segmentation pelt(const Series& s, double penalty, std::size_t min_seg = kDefaultMinSegment);

// Unpruned O(N^2) optimal partitioning. Refuses N > kBruteForceLimit.
Segmentation brute_force_optimal(const Series& s, double penalty,
                                 std::size_t min_seg = kDefaultMinSegment);

// 2 * var * log N, with var the mean squared first difference.
// Throws InputError when N < 2.
double default_penalty(const Series& s);

}  // namespace stylo
