#include "stylo/changepoint.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "stylo/error.hpp"

namespace stylo {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kNever = std::numeric_limits<std::size_t>::max();

void check_arguments(const Series& s, double penalty, std::size_t min_seg) {
  if (min_seg == 0) throw InputError("min_seg must be positive");
  if (!(penalty >= 0.0) || !std::isfinite(penalty)) {
    throw InputError("penalty must be a finite non-negative number");
  }
  if (s.size() < min_seg) {
    throw InputError("series length " + std::to_string(s.size()) + " is below min_seg " +
                     std::to_string(min_seg));
  }
}

// A boundary t can end a valid prefix iff t == 0 or t >= min_seg.
bool reachable(std::size_t t, std::size_t min_seg) { return t == 0 || t >= min_seg; }

Segmentation backtrack(const std::vector<std::size_t>& last, double total) {
  Segmentation seg;
  seg.total_cost = total;
  for (std::size_t t = last.size() - 1; t > 0; t = last[t]) {
    if (last[t] > 0) seg.breakpoints.push_back(last[t]);
  }
  std::reverse(seg.breakpoints.begin(), seg.breakpoints.end());
  return seg;
}

}  // namespace

Series::Series(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw InputError("series must contain at least one value");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw InputError("series value at index " + std::to_string(i) + " is not finite");
    }
  }
}

L2Cost::L2Cost(std::span<const double> values)
    : n_(values.size()), sum_(n_ + 1, 0.0), sum_sq_(n_ + 1, 0.0), changes_(n_ + 1, 0) {
  double mean = 0.0;
  for (double x : values) mean += x;
  if (n_ > 0) mean /= static_cast<double>(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    const double c = values[i] - mean;
    sum_[i + 1] = sum_[i] + c;
    sum_sq_[i + 1] = sum_sq_[i] + c * c;
    changes_[i + 1] = changes_[i] + ((i > 0 && values[i] != values[i - 1]) ? 1 : 0);
  }
}

double L2Cost::operator()(std::size_t a, std::size_t b) const {
  if (a >= b || b > n_) {
    throw RangeError("invalid segment [" + std::to_string(a) + ", " + std::to_string(b) +
                     ") for series of length " + std::to_string(n_));
  }
  return unchecked(a, b);
}

double L2Cost::unchecked(std::size_t a, std::size_t b) const {
  // values[a..b) is constant iff no change occurs at indices a+1..b-1.
  if (changes_[b] - changes_[a + 1] == 0) return 0.0;
  const double s = sum_[b] - sum_[a];
  const double cost = (sum_sq_[b] - sum_sq_[a]) - s * s / static_cast<double>(b - a);
  return std::max(cost, 0.0);
}

double segment_cost(const Series& s, std::size_t a, std::size_t b) {
  return L2Cost(s.values())(a, b);
}

Segmentation pelt(const Series& s, double penalty, std::size_t min_seg) {
  check_arguments(s, penalty, min_seg);
  const std::size_t n = s.size();
  const L2Cost cost(s.values());

  // Pruning is skipped unless the candidate loses by more than `slack`, so
  // rounding in the prefix-sum costs can never prune a true minimizer.
  const double slack = 1e-9 * (1.0 + cost.unchecked(0, n));

  struct Candidate {
    std::size_t tau;
    std::size_t expiry;  // first t at which the candidate is dropped
  };

  std::vector<double> best(n + 1, kInf);
  std::vector<std::size_t> last(n + 1, 0);
  std::vector<Candidate> candidates;
  best[0] = -penalty;

  for (std::size_t t = min_seg; t <= n; ++t) {
    const std::size_t fresh = t - min_seg;
    if (reachable(fresh, min_seg)) candidates.push_back({fresh, kNever});
    std::erase_if(candidates, [t](const Candidate& c) { return c.expiry <= t; });

    double f = kInf;
    std::size_t arg = 0;
    for (const auto& c : candidates) {
      const double v = best[c.tau] + cost.unchecked(c.tau, t) + penalty;
      if (v < f) {
        f = v;
        arg = c.tau;
      }
    }
    best[t] = f;
    last[t] = arg;

    // A candidate beaten at t stays beaten for every t' >= t + min_seg, the
    // first end point from which t itself is an admissible last change.
    for (auto& c : candidates) {
      if (c.expiry == kNever && best[c.tau] + cost.unchecked(c.tau, t) > f + slack) {
        c.expiry = t + min_seg;
      }
    }
  }
  return backtrack(last, best[n]);
}

Segmentation brute_force_optimal(const Series& s, double penalty, std::size_t min_seg) {
  check_arguments(s, penalty, min_seg);
  const std::size_t n = s.size();
  if (n > kBruteForceLimit) {
    throw InputError("brute-force segmentation refused for N=" + std::to_string(n) +
                     " (limit " + std::to_string(kBruteForceLimit) + ")");
  }
  const L2Cost cost(s.values());
  std::vector<double> best(n + 1, kInf);
  std::vector<std::size_t> last(n + 1, 0);
  best[0] = -penalty;
  for (std::size_t t = min_seg; t <= n; ++t) {
    for (std::size_t tau = 0; tau + min_seg <= t; ++tau) {
      if (!reachable(tau, min_seg)) continue;
      const double v = best[tau] + cost.unchecked(tau, t) + penalty;
      if (v < best[t]) {
        best[t] = v;
        last[t] = tau;
      }
    }
  }
  return backtrack(last, best[n]);
}

double default_penalty(const Series& s) {
  const std::size_t n = s.size();
  if (n < 2) throw InputError("default penalty needs at least 2 points");
  double ss = 0.0;
  for (std::size_t i = 1; i < n; ++i) {
    const double d = s[i] - s[i - 1];
    ss += d * d;
  }
  const double variance = ss / static_cast<double>(n - 1);
  return 2.0 * variance * std::log(static_cast<double>(n));
}

}  // namespace stylo
