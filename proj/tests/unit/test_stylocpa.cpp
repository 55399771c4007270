#include <doctest.h>

#include <cmath>
#include <set>
#include <vector>

#include <nlohmann/json.hpp>

#include "stylo/error.hpp"
#include "stylo/random.hpp"
#include "stylo/stylocpa.hpp"
#include "stylo/synthetic.hpp"
#include "support.hpp"

using namespace stylo;

namespace {

StyloMatrix constant_matrix(std::size_t n, double value = 1.0) {
  StyloMatrix m;
  m.rows.assign(kFeatureCount, std::vector<double>(n, value));
  return m;
}

// `stepping` rows jump by `jump` at index j over unit Gaussian noise; the
// other rows are pure noise.
StyloMatrix step_matrix(Rng& rng, std::size_t n, std::size_t j, std::size_t stepping, double jump,
                        double noise = 1.0) {
  StyloMatrix m;
  m.rows.resize(kFeatureCount);
  for (std::size_t k = 0; k < kFeatureCount; ++k) {
    auto& row = m.rows[k];
    row.resize(n);
    for (std::size_t t = 0; t < n; ++t) {
      row[t] = rng.normal(0.0, noise) + (k < stepping && t >= j ? jump : 0.0);
    }
  }
  return m;
}

Timeline timeline_of(const std::vector<std::string>& texts) {
  Timeline tl;
  tl.id = "t";
  for (const auto& s : texts) tl.tweets.push_back({s, std::nullopt});
  return tl;
}

}  // namespace

TEST_CASE("quorum rounding") {
  CHECK(quorum(0.15, 24) == 4);
  CHECK(quorum(1.0, 24) == 24);
  CHECK(quorum(0.25, 24) == 6);
  CHECK(quorum(5.0 / 24.0, 24) == 5);
  CHECK(quorum(0.01, 24) == 1);
  CHECK_THROWS_AS(check_gamma(0.0), ConfigError);
  CHECK_THROWS_AS(check_gamma(1.5), ConfigError);
  CHECK_THROWS_AS(check_gamma(std::nan("")), ConfigError);
  CHECK_NOTHROW(check_gamma(1.0));
}

TEST_CASE("build_matrix") {
  SUBCASE("identical tweets give constant rows") {
    const auto m = build_matrix(timeline_of({"Same text here!", "Same text here!"}));
    REQUIRE(m.features() == kFeatureCount);
    for (const auto& row : m.rows) CHECK(row[0] == row[1]);
  }
  SUBCASE("empty tweet gives a zero column") {
    const auto m = build_matrix(timeline_of({"Hello there.", "", "Bye now!"}));
    CHECK(m.length() == 3);
    for (const auto& row : m.rows) CHECK(row[1] == 0.0);
  }
  SUBCASE("too short") { CHECK_THROWS_AS(build_matrix(timeline_of({"one"})), InputError); }
  SUBCASE("fixture timeline equals stacked golden vectors") {
    const auto golden = test::load_json("golden_features.json").at("timeline");
    const auto m = build_matrix(timeline_of(golden.at("tweets").get<std::vector<std::string>>()));
    const auto& columns = golden.at("columns");
    REQUIRE(m.length() == 25);
    for (std::size_t t = 0; t < 25; ++t) {
      for (std::size_t k = 0; k < kFeatureCount; ++k) {
        INFO("tweet " << t << " feature " << feature_names()[k]);
        CHECK(m.rows[k][t] == doctest::Approx(columns[t][k].get<double>()).epsilon(1e-9).scale(1.0));
      }
    }
  }
}

TEST_CASE("detect examples") {
  SUBCASE("all-constant matrix") {
    const auto r = detect(constant_matrix(25));
    CHECK_FALSE(r.change_detected);
    CHECK_FALSE(r.localization.has_value());
    CHECK(r.agreeing_feature_count == 0);
  }
  SUBCASE("ten stepping rows") {
    StyloMatrix m = constant_matrix(25);
    for (std::size_t k = 0; k < 10; ++k) {
      for (std::size_t t = 12; t < 25; ++t) m.rows[k][t] = 5.0 + static_cast<double>(k);
    }
    // Constant rows have zero default penalty, so use a fixed one.
    DetectOptions o;
    o.penalty = PenaltyRule::constant(1.0);
    for (std::size_t k = 0; k < 10; ++k) {
      CHECK(brute_force_optimal(Series(m.rows[k]), 1.0).breakpoints == std::vector<std::size_t>{12});
    }
    const auto r = detect(m, o);
    CHECK(r.change_detected);
    CHECK(r.agreeing_feature_count == 10);
    CHECK(r.localization == std::optional<std::size_t>{12});
    CHECK_FALSE(r.random_localization);
    o.gamma = 1.0;
    const auto strict = detect(m, o);
    CHECK_FALSE(strict.change_detected);
    CHECK_FALSE(strict.localization.has_value());
  }
  SUBCASE("bad gamma") {
    DetectOptions o;
    o.gamma = 0.0;
    CHECK_THROWS_AS(detect(constant_matrix(5), o), ConfigError);
  }
}

TEST_CASE("vote rules") {
  const std::vector<std::size_t> none;
  auto rows = [&](std::vector<std::vector<std::size_t>> nonempty) {
    nonempty.resize(kFeatureCount, none);
    return nonempty;
  };
  SUBCASE("agreement within one") {
    const auto r = vote(rows({{10}, {11}, {11}, {3}}), 0.15, 0);
    CHECK(r.change_detected);
    CHECK(r.localization == std::optional<std::size_t>{11});
  }
  SUBCASE("support ties go to more exact reports") {
    const auto r = vote(rows({{10}, {10}, {11}, {20}, {20}, {21}}), 0.15, 0);
    // 10: support 3 exact 2; 11: support 3 exact 1; 20: support 3 exact 2.
    CHECK(r.localization == std::optional<std::size_t>{10});
  }
  SUBCASE("a feature with many breakpoints is one vote") {
    const auto r = vote(rows({{2, 5, 9}, {5}}), 0.15, 0);
    CHECK(r.agreeing_feature_count == 2);
    CHECK_FALSE(r.change_detected);
  }
  SUBCASE("random fallback when nothing is shared") {
    const auto bps = rows({{2}, {7}, {12}, {17}});
    const auto a = vote(bps, 0.15, 42);
    CHECK(a.change_detected);
    CHECK(a.random_localization);
    REQUIRE(a.localization.has_value());
    CHECK((*a.localization == 2 || *a.localization == 7 || *a.localization == 12 || *a.localization == 17));
    CHECK(vote(bps, 0.15, 42) == a);
    std::set<std::size_t> seen;
    for (std::uint64_t s = 0; s < 200; ++s) seen.insert(*vote(bps, 0.15, s).localization);
    CHECK(seen.size() == 4);
  }
  SUBCASE("invariant: detected iff quorum reached, localization iff detected") {
    Rng rng(3);
    for (int trial = 0; trial < 500; ++trial) {
      std::vector<std::vector<std::size_t>> bps(kFeatureCount);
      for (auto& row : bps) {
        if (rng.bernoulli(0.2)) row.push_back(1 + rng.uniform_index(23));
      }
      const double gamma = 0.05 + 0.95 * rng.uniform01();
      const auto r = vote(bps, gamma, trial);
      CHECK(r.change_detected == (r.agreeing_feature_count >= quorum(gamma, kFeatureCount)));
      CHECK(r.localization.has_value() == r.change_detected);
    }
  }
}

TEST_CASE("detection is non-increasing in gamma") {
  Rng rng(17);
  for (int trial = 0; trial < 40; ++trial) {
    const auto m = step_matrix(rng, 25, 1 + rng.uniform_index(23), rng.uniform_index(12), 4.0);
    const auto bps = row_breakpoints(m, PenaltyRule::automatic(), kDefaultMinSegment);
    bool previous = true;
    for (double g = 0.02; g <= 1.0; g += 0.02) {
      const bool detected = vote(bps, g, 0).change_detected;
      CHECK((previous || !detected));
      previous = detected;
    }
  }
}

TEST_CASE("row permutation invariance") {
  Rng rng(23);
  for (int trial = 0; trial < 60; ++trial) {
    StyloMatrix m = step_matrix(rng, 25, 5 + rng.uniform_index(15), 3 + rng.uniform_index(10), 6.0);
    const auto before = detect(m);
    rng.shuffle(std::span<std::vector<double>>(m.rows));
    const auto after = detect(m);
    CHECK(before.change_detected == after.change_detected);
    CHECK(before.agreeing_feature_count == after.agreeing_feature_count);
    if (!before.random_localization && !after.random_localization) CHECK(before.localization == after.localization);
  }
}

TEST_CASE("reports are deterministic under a seed") {
  Rng rng(29);
  for (int trial = 0; trial < 20; ++trial) {
    const auto m = step_matrix(rng, 25, 12, rng.uniform_index(6), 2.0);
    DetectOptions o;
    o.seed = 1000 + static_cast<std::uint64_t>(trial);
    CHECK(detect(m, o) == detect(m, o));
  }
}

TEST_CASE("ground truth recovery on synthetic step matrices") {
  std::size_t hits = 0;
  const std::size_t trials = 200;
  for (std::uint64_t trial = 0; trial < trials; ++trial) {
    Rng rng(derive_seed(77, trial));
    const std::size_t j = 2 + rng.uniform_index(21);
    const auto m = step_matrix(rng, 25, j, quorum(kDefaultGamma, kFeatureCount), 10.0);
    DetectOptions o;
    o.seed = trial;
    const auto r = detect(m, o);
    if (r.localization && (*r.localization + 1 >= j && *r.localization <= j + 1)) ++hits;
  }
  CHECK(static_cast<double>(hits) >= 0.95 * trials);
}

TEST_CASE("tune_gamma") {
  const auto human = default_human_pool(400, 1);
  const auto ai = default_ai_pool(400, 1);
  const auto dev = synth_mixed(human, ai, 25, 30, 5);
  SUBCASE("singleton grid") {
    const std::vector<double> grid{0.15};
    CHECK(tune_gamma(dev, grid) == 0.15);
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(tune_gamma(dev, std::vector<double>{}), ConfigError);
    CHECK_THROWS_AS(tune_gamma({}, std::vector<double>{0.15}), InputError);
  }
  SUBCASE("five always-shifting features cap the choice") {
    // With a fixed penalty only the five shifting rows report breakpoints.
    std::vector<Timeline> five;
    std::vector<double> grid;
    for (int g = 1; g <= 20; ++g) grid.push_back(0.05 * g);
    Rng rng(8);
    for (int i = 0; i < 10; ++i) {
      Timeline tl;
      tl.id = "five-" + std::to_string(i);
      const std::size_t cp = 3 + rng.uniform_index(19);
      for (std::size_t t = 0; t < 25; ++t) {
        // Same words; only the total and the ',', ';', ':' and '"' rates differ.
        tl.tweets.push_back({t < cp ? "aa bb cc dd" : "aa, bb; cc: \"dd\"", std::nullopt});
      }
      tl.change_point = cp;
      five.push_back(tl);
    }
    const auto m = build_matrix(five.front());
    std::size_t shifting = 0;
    for (const auto& row : m.rows) shifting += row.front() != row.back();
    REQUIRE(shifting == 5);
    TuneOptions to;
    to.penalty = PenaltyRule::constant(0.5);
    const double chosen = tune_gamma(five, grid, to);
    CHECK(chosen <= 5.0 / 24.0);
    // Every grid value that still detects scores perfectly here, so the
    // smallest one wins the tie.
    CHECK(chosen == grid.front());
  }
}

TEST_CASE("report json round trip") {
  Rng rng(3);
  const auto m = step_matrix(rng, 25, 10, 8, 8.0);
  const auto r = detect(m);
  const auto j = to_json(r);
  CHECK(j.at("per_feature_breakpoints").size() == kFeatureCount);
  CHECK(j.contains("agreeing_feature_count"));
  CHECK(j.contains("change_detected"));
  CHECK(j.contains("localization"));
  CHECK(j.contains("agreement_threshold"));
  auto back = report_from_json(j);
  back.random_localization = r.random_localization;
  CHECK(back == r);
  const auto none = to_json(detect(constant_matrix(5)));
  CHECK(none.at("localization").is_null());
}
