#include <doctest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include <nlohmann/json.hpp>

#include "gradcheck.hpp"
#include "stylo/error.hpp"
#include "stylo/fusion.hpp"
#include "stylo/random.hpp"
#include "support.hpp"

using namespace stylo;

namespace {

// Two Gaussian classes that differ in the first few stylometric features
// and, when e > 0, in the mean of every embedding column.
std::vector<Example> blobs(std::size_t n, std::size_t e, std::uint64_t seed, double separation = 2.0) {
  Rng rng(seed);
  std::vector<Example> out;
  for (std::size_t i = 0; i < n; ++i) {
    Example ex;
    ex.label = static_cast<int>(i % 2);
    const double shift = ex.label == kAiLabel ? separation : 0.0;
    for (std::size_t k = 0; k < kFeatureCount; ++k) {
      ex.style[k] = 10.0 * static_cast<double>(k + 1) + rng.normal() + (k < 3 ? shift : 0.0);
    }
    for (std::size_t d = 0; d < e; ++d) ex.embedding.push_back(rng.normal() + shift * 0.5);
    out.push_back(std::move(ex));
  }
  return out;
}

Hyperparams small(std::size_t epochs = 30) {
  Hyperparams hp;
  hp.epochs = epochs;
  hp.reduce_width = 32;
  hp.classify_width = 16;
  hp.learning_rate = 1e-2;
  return hp;
}

}  // namespace

TEST_CASE("analytic gradients match central differences") {
  for (std::size_t e : {std::size_t{0}, std::size_t{16}}) {
    const auto probes = test::probe_gradients(e, 7 + e);
    CHECK(probes.size() == 40);
    for (const auto& p : probes) {
      INFO("e=" << e << " layer " << p.layer << " analytic " << p.analytic << " numeric " << p.numeric);
      CHECK(p.relative_error < 1e-4);
    }
  }
}

TEST_CASE("softmax outputs a distribution") {
  const FusionModel m = FusionModel::initialize(4, Hyperparams{});
  Rng rng(2);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> x(m.input_dim());
    for (auto& v : x) v = rng.normal(0.0, 5.0);
    const auto p = m.forward(x);
    CHECK(p.ai + p.human == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(p.ai >= 0.0);
    CHECK(p.human >= 0.0);
  }
}

TEST_CASE("zero final layer predicts one half") {
  FusionModel m = FusionModel::initialize(3, Hyperparams{});
  m.layers().back().weights.setZero();
  m.layers().back().bias.setZero();
  const std::vector<double> x(m.input_dim(), 1.5);
  const auto p = m.forward(x);
  CHECK(p.ai == 0.5);
  CHECK(p.human == 0.5);
  CHECK(p.label() == kHumanLabel);
}

TEST_CASE("layer shapes") {
  const FusionModel m = FusionModel::initialize(16, Hyperparams{});
  REQUIRE(m.layers().size() == 4);
  CHECK(m.layers()[0].inputs() == 40);
  CHECK(m.layers()[0].outputs() == 128);
  CHECK(m.layers()[1].outputs() == 128);
  CHECK(m.layers()[2].outputs() == 64);
  CHECK(m.layers()[3].outputs() == 2);
  CHECK(m.layers()[3].activation == Activation::identity);
  CHECK(m.layers()[0].activation == Activation::relu);
}

TEST_CASE("normalizer") {
  std::vector<StyloVector> data(4);
  for (std::size_t i = 0; i < 4; ++i) {
    data[i][0] = static_cast<double>(i);
    data[i][1] = 7.0;
  }
  FusionModel m = FusionModel::initialize(0, Hyperparams{});
  CHECK_THROWS_AS(m.normalize(data[0]), StateError);
  m.fit_normalizer(data);
  CHECK(m.normalizer().constant[1]);
  CHECK(m.normalizer().stdev[1] == 1.0);
  double sum = 0.0;
  double sq = 0.0;
  for (const auto& v : data) {
    const auto z = m.normalize(v);
    CHECK(z[1] == 0.0);
    sum += z[0];
    sq += z[0] * z[0];
  }
  CHECK(sum == doctest::Approx(0.0).scale(1.0));
  CHECK(sq / 4.0 == doctest::Approx(1.0));
  CHECK_THROWS_AS(m.fit_normalizer(std::vector<StyloVector>{}), InputError);
}

TEST_CASE("training memorizes a small separable set") {
  const auto data = blobs(16, 0, 3, 6.0);
  auto hp = small(300);
  const auto result = train(data, hp);
  CHECK(accuracy(result.model, data) == 1.0);
}

TEST_CASE("training loss stays non-increasing within tolerance") {
  const auto data = blobs(200, 8, 5);
  const auto result = train(data, small(40));
  REQUIRE(result.epoch_loss.size() == 40);
  for (std::size_t i = 1; i < result.epoch_loss.size(); ++i) {
    CHECK(result.epoch_loss[i] <= result.epoch_loss[i - 1] * 1.05);
  }
  CHECK(result.epoch_loss.back() < result.epoch_loss.front());
}

TEST_CASE("identical seeds give identical models") {
  const auto data = blobs(64, 4, 9);
  const auto a = train(data, small(5));
  const auto b = train(data, small(5));
  CHECK(a.model.checksum() == b.model.checksum());
  CHECK(a.epoch_loss == b.epoch_loss);
  auto hp = small(5);
  hp.seed = 2;
  CHECK(train(data, hp).model.checksum() != a.model.checksum());
  CHECK(FusionModel::initialize(4, Hyperparams{}).checksum() == FusionModel::initialize(4, Hyperparams{}).checksum());
}

TEST_CASE("predictions are invariant to positive rescaling of the style inputs") {
  const auto data = blobs(80, 0, 13);
  const auto base = train(data, small(10));
  for (double a : {0.25, 2.0, 8.0}) {
    auto scaled = data;
    for (auto& ex : scaled) {
      for (auto& v : ex.style.values) v *= a;
    }
    const auto other = train(scaled, small(10));
    for (std::size_t l = 0; l < base.model.layers().size(); ++l) {
      CHECK(other.model.layers()[l].weights == base.model.layers()[l].weights);
    }
    for (std::size_t i = 0; i < data.size(); ++i) {
      CHECK(other.model.predict(scaled[i].style, {}).ai == base.model.predict(data[i].style, {}).ai);
    }
  }
  // A general affine map changes rounding only.
  auto shifted = data;
  for (auto& ex : shifted) {
    for (auto& v : ex.style.values) v = 3.0 * v - 17.0;
  }
  const auto other = train(shifted, small(10));
  for (std::size_t i = 0; i < data.size(); ++i) {
    CHECK(other.model.predict(shifted[i].style, {}).ai ==
          doctest::Approx(base.model.predict(data[i].style, {}).ai).epsilon(1e-6));
  }
}

TEST_CASE("training input errors") {
  auto data = blobs(10, 2, 1);
  CHECK_THROWS_AS(train(std::vector<Example>(data.begin(), data.begin() + 1), small()), InputError);
  auto one_class = data;
  for (auto& ex : one_class) ex.label = kAiLabel;
  CHECK_THROWS_AS(train(one_class, small()), InputError);
  auto ragged = data;
  ragged[3].embedding.push_back(0.0);
  CHECK_THROWS_AS(train(ragged, small()), InputError);
  Hyperparams bad;
  bad.learning_rate = 0.0;
  CHECK_THROWS_AS(train(data, bad), ConfigError);
  bad = Hyperparams{};
  bad.momentum = 1.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("model file round trip") {
  const auto data = blobs(40, 3, 21);
  const auto result = train(data, small(3));
  test::TempDir dir("fusion");
  result.model.save(dir / "m.json");
  const FusionModel back = FusionModel::load(dir / "m.json");
  CHECK(back.checksum() == result.model.checksum());
  CHECK(back.embedding_dim() == 3);
  for (const auto& ex : data) {
    CHECK(back.predict(ex.style, ex.embedding).ai == result.model.predict(ex.style, ex.embedding).ai);
  }
  CHECK_THROWS_AS(FusionModel::load(dir / "missing.json"), InputError);
  std::ofstream(dir / "bad.json") << "{\"format\": \"other\"}";
  CHECK_THROWS_AS(FusionModel::load(dir / "bad.json"), ValidationError);
  std::ofstream(dir / "broken.json") << "{";
  CHECK_THROWS_AS(FusionModel::load(dir / "broken.json"), ParseError);
}

TEST_CASE("embedding table") {
  std::istringstream ok("id,e,v_0,v_1\na,2,1.5,-2\nb,2,0,3e-2\n");
  const auto t = EmbeddingTable::parse_csv(ok);
  CHECK(t.dim() == 2);
  CHECK(t.size() == 2);
  CHECK(t.lookup("a")[0] == 1.5);
  CHECK(t.lookup("b")[1] == 0.03);
  CHECK_THROWS_AS(t.lookup("zz"), LookupError);
  try {
    (void)t.lookup("zz");
  } catch (const LookupError& e) {
    CHECK(std::string(e.what()).find("zz") != std::string::npos);
  }

  std::ostringstream out;
  t.write_csv(out);
  std::istringstream again(out.str());
  const auto t2 = EmbeddingTable::parse_csv(again);
  CHECK(t2.lookup("a")[1] == -2.0);
  CHECK(t2.lookup("b")[1] == 0.03);

  std::istringstream bad_header("name,e,v_0\n");
  CHECK_THROWS_AS(EmbeddingTable::parse_csv(bad_header), ParseError);
  std::istringstream bad_dim("id,e,v_0\na,2,1\n");
  try {
    EmbeddingTable::parse_csv(bad_dim);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
  std::istringstream bad_value("id,e,v_0\na,1,1\nb,1,x\n");
  try {
    EmbeddingTable::parse_csv(bad_value);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
  EmbeddingTable manual(2);
  CHECK_THROWS_AS(manual.insert("x", {1.0}), InputError);
  CHECK_THROWS_AS(manual.insert("x", {1.0, std::nan("")}), InputError);
}

TEST_CASE("timeline prediction needs embeddings when the model uses them") {
  const auto data = blobs(20, 2, 4);
  const auto result = train(data, small(2));
  Timeline tl{"acct", {{"Hello there.", std::nullopt}}, std::nullopt, std::nullopt};
  CHECK_THROWS_AS(predict_timeline(tl, result.model, nullptr), LookupError);
  EmbeddingTable table(2);
  CHECK_THROWS_AS(predict_timeline(tl, result.model, &table), LookupError);
  table.insert("acct", {0.1, 0.2});
  const auto p = predict_timeline(tl, result.model, &table);
  CHECK(p.p_ai >= 0.0);
  CHECK(p.p_ai <= 1.0);
  CHECK(p.label == (p.p_ai > 0.5 ? kAiLabel : kHumanLabel));
}

TEST_CASE("permutation importance") {
  auto data = blobs(120, 0, 17, 5.0);
  // Feature 10 is constant, so shuffling it changes nothing.
  for (auto& ex : data) ex.style[10] = 1.0;
  const auto result = train(data, small(60));
  const auto imp = permutation_importance(result.model, data, 3, 5);
  CHECK(imp.baseline_accuracy == accuracy(result.model, data));
  CHECK(imp.per_feature[10] == 0.0);
  const double informative = std::max({imp.per_feature[0], imp.per_feature[1], imp.per_feature[2]});
  CHECK(informative > 0.05);
  double phraseology = 0.0;
  for (std::size_t k = 0; k < kPhraseologyCount; ++k) phraseology += imp.per_feature[k];
  CHECK(imp.per_category[0] == doctest::Approx(phraseology / kPhraseologyCount));
  const auto again = permutation_importance(result.model, data, 3, 5);
  CHECK(again.per_feature == imp.per_feature);
  CHECK_THROWS_AS(permutation_importance(result.model, std::vector<Example>{}, 1), InputError);
}
