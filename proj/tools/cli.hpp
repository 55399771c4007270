#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>

#include "stylo/fusion.hpp"
#include "stylo/stylocpa.hpp"

namespace stylo::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

// Settings shared by every subcommand. Values come from an optional
// key=value file (--config) and are overridden by flags.
struct Config {
  std::size_t mttr_window = kDefaultMttrWindow;
  double gamma = kDefaultGamma;
  std::string penalty = "auto";
  std::size_t min_seg = kDefaultMinSegment;
  std::uint64_t seed = 0;
  std::size_t jobs = 1;
  Hyperparams hyperparams;

  // Throws ConfigError.
  void validate() const;
  PenaltyRule penalty_rule() const;
};

// args excludes the program name. Reports go to `out` unless a path flag
// names a file; diagnostics go to `err`.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace stylo::cli
