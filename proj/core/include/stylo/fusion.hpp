#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json_fwd.hpp>

#include "stylo/corpus.hpp"
#include "stylo/textstats.hpp"

namespace stylo {

// Externally produced text embeddings keyed by timeline (or tweet) id.
//
// CSV layout: header "id,e,v_0,...,v_{e-1}", then one row per record with
// the id, the dimension e repeated, and e values.
class EmbeddingTable {
 public:
  explicit EmbeddingTable(std::size_t dim = 0) : dim_(dim) {}

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return rows_.size(); }
  bool contains(const std::string& id) const { return rows_.contains(id); }

  // Throws InputError on a dimension mismatch or non-finite value.
  void insert(const std::string& id, std::vector<double> vector);
  // Throws LookupError naming the id.
  std::span<const double> lookup(const std::string& id) const;

  static EmbeddingTable parse_csv(std::istream& in);
  static EmbeddingTable load_csv(const std::filesystem::path& path);
  // Rows in insertion order.
  void write_csv(std::ostream& out) const;

 private:
  std::size_t dim_;
  std::unordered_map<std::string, std::vector<double>> rows_;
  std::vector<std::string> order_;
};

enum class Activation { relu, identity };

struct DenseLayer {
  Eigen::MatrixXd weights;  // out x in
  Eigen::VectorXd bias;     // out
  Activation activation = Activation::relu;

  std::size_t inputs() const { return static_cast<std::size_t>(weights.cols()); }
  std::size_t outputs() const { return static_cast<std::size_t>(weights.rows()); }
};

struct Hyperparams {
  double learning_rate = 1e-3;
  double momentum = 0.9;
  std::size_t epochs = 50;
  std::size_t batch_size = 32;
  std::uint64_t seed = 1;
  std::size_t reduce_width = 128;
  std::size_t classify_width = 64;

  // Throws ConfigError on non-positive sizes or rates.
  void validate() const;
};

// z-score statistics of the stylometric block, fitted on training data.
struct Normalizer {
  std::array<double, kFeatureCount> mean{};
  std::array<double, kFeatureCount> stdev{};
  // Features constant in training: stdev forced to 1, output forced to 0.
  std::array<bool, kFeatureCount> constant{};
};

struct Probabilities {
  double ai = 0.5;
  double human = 0.5;

  // 1 (AI) when p(AI) > 0.5, else 0.
  int label() const { return ai > 0.5 ? kAiLabel : kHumanLabel; }
};

// Normalized stylometric vector concatenated with an embedding, passed
// through a two-layer reduce network and a two-layer classification network
// ending in a 2-way softmax (row 0 = AI, row 1 = human).
class FusionModel {
 public:
  FusionModel() = default;

  // He-initialized layers for K + embedding_dim inputs; normalizer unfitted.
  static FusionModel initialize(std::size_t embedding_dim, const Hyperparams& hp);

  std::size_t embedding_dim() const { return embedding_dim_; }
  std::size_t input_dim() const { return kFeatureCount + embedding_dim_; }
  const Hyperparams& hyperparams() const { return hyperparams_; }

  bool fitted() const { return fitted_; }
  void fit_normalizer(std::span<const StyloVector> training);
  void set_normalizer(const Normalizer& n);
  const Normalizer& normalizer() const { return normalizer_; }

  // Throws StateError if the normalizer is unfitted.
  std::array<double, kFeatureCount> normalize(const StyloVector& v) const;

  // Network input for one example. Throws InputError on embedding size mismatch.
  Eigen::VectorXd assemble(const StyloVector& style, std::span<const double> embedding) const;

  // x is an already assembled input of input_dim() values.
  Probabilities forward(std::span<const double> x) const;
  Probabilities predict(const StyloVector& style, std::span<const double> embedding) const;

  // Logits (2 x B) for a batch of assembled inputs (input_dim x B).
  Eigen::MatrixXd logits(const Eigen::MatrixXd& inputs) const;

  std::vector<DenseLayer>& layers() { return layers_; }
  const std::vector<DenseLayer>& layers() const { return layers_; }

  // FNV-1a over every parameter's bytes.
  std::uint64_t checksum() const;

  nlohmann::json to_json() const;
  static FusionModel from_json(const nlohmann::json& j);
  void save(const std::filesystem::path& path) const;
  static FusionModel load(const std::filesystem::path& path);

 private:
  std::size_t embedding_dim_ = 0;
  Hyperparams hyperparams_;
  Normalizer normalizer_;
  bool fitted_ = false;
  std::vector<DenseLayer> layers_;
};

struct LayerGradient {
  Eigen::MatrixXd weights;
  Eigen::VectorXd bias;
};

struct LossGradient {
  double loss = 0.0;
  std::vector<LayerGradient> layers;
};

// Mean cross-entropy of a batch of assembled inputs (input_dim x B).
double cross_entropy(const FusionModel& model, const Eigen::MatrixXd& inputs,
                     std::span<const int> labels);
LossGradient loss_and_gradient(const FusionModel& model, const Eigen::MatrixXd& inputs,
                               std::span<const int> labels);

struct Example {
  StyloVector style;
  std::vector<double> embedding;
  int label = kHumanLabel;
};

struct TrainResult {
  FusionModel model;
  // Full training-set cross-entropy after each epoch.
  std::vector<double> epoch_loss;
};

// Mini-batch gradient descent with momentum. Throws InputError unless there
// are >= 2 examples covering both classes with equal embedding sizes.
TrainResult train(std::span<const Example> data, const Hyperparams& hp);

double accuracy(const FusionModel& model, std::span<const Example> data);

struct Prediction {
  int label = kHumanLabel;
  double p_ai = 0.5;
};

// Features over the newline-joined timeline text; the embedding is looked up
// by timeline id when the model uses one.
Prediction predict_timeline(const Timeline& tl, const FusionModel& model,
                            const EmbeddingTable* embeddings,
                            std::size_t mttr_window = kDefaultMttrWindow);

struct Importance {
  double baseline_accuracy = 0.0;
  std::array<double, kFeatureCount> per_feature{};
  std::array<double, kCategoryCount> per_category{};
};

// Accuracy drop when one stylometric column is shuffled across the eval set,
// averaged over `repeats` seeded shuffles; category scores are member means.
Importance permutation_importance(const FusionModel& model, std::span<const Example> eval_set,
                                  std::uint64_t seed, std::size_t repeats = 10);

}  // namespace stylo
