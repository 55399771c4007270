#include "stylo/fusion.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "stylo/error.hpp"
#include "stylo/random.hpp"

namespace stylo {
namespace {

using nlohmann::json;

constexpr std::string_view kModelFormat = "stylo-fusion";
constexpr int kModelVersion = 1;

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

std::string strip_cr(std::string s) {
  if (!s.empty() && s.back() == '\r') s.pop_back();
  return s;
}

double parse_double(const std::string& field, std::size_t line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(field, &used);
    if (used != field.size()) throw std::invalid_argument(field);
    return v;
  } catch (const std::exception&) {
    throw ParseError("not a number: '" + field + "'", line);
  }
}

Eigen::MatrixXd activate(const Eigen::MatrixXd& z, Activation a) {
  return a == Activation::relu ? Eigen::MatrixXd(z.cwiseMax(0.0)) : z;
}

// Column-wise softmax with max subtraction.
Eigen::MatrixXd softmax(const Eigen::MatrixXd& logits) {
  Eigen::MatrixXd p(logits.rows(), logits.cols());
  for (Eigen::Index c = 0; c < logits.cols(); ++c) {
    const double m = logits.col(c).maxCoeff();
    p.col(c) = (logits.col(c).array() - m).exp().matrix();
    p.col(c) /= p.col(c).sum();
  }
  return p;
}

Eigen::Index target_row(int label) { return label == kAiLabel ? 0 : 1; }

void check_batch(const FusionModel& model, const Eigen::MatrixXd& inputs, std::span<const int> labels) {
  if (static_cast<std::size_t>(inputs.rows()) != model.input_dim()) {
    throw InputError("input has " + std::to_string(inputs.rows()) + " rows, model expects " +
                     std::to_string(model.input_dim()));
  }
  if (static_cast<std::size_t>(inputs.cols()) != labels.size() || labels.empty()) {
    throw InputError("batch and label counts differ or are zero");
  }
}

DenseLayer he_layer(std::size_t in, std::size_t out, Activation act, Rng& rng) {
  DenseLayer layer;
  layer.weights.resize(static_cast<Eigen::Index>(out), static_cast<Eigen::Index>(in));
  layer.bias = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(out));
  layer.activation = act;
  const double scale = std::sqrt(2.0 / static_cast<double>(in));
  // Row-major fill so the sequence of draws is independent of Eigen's storage order.
  for (Eigen::Index r = 0; r < layer.weights.rows(); ++r) {
    for (Eigen::Index c = 0; c < layer.weights.cols(); ++c) layer.weights(r, c) = scale * rng.normal();
  }
  return layer;
}

void hash_bytes(std::uint64_t& h, const void* data, std::size_t n) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 0x100000001B3ULL;
  }
}

std::string activation_name(Activation a) { return a == Activation::relu ? "relu" : "identity"; }

Activation parse_activation(const std::string& s) {
  if (s == "relu") return Activation::relu;
  if (s == "identity") return Activation::identity;
  throw ValidationError("unknown activation '" + s + "'");
}

}  // namespace

// ---- EmbeddingTable -------------------------------------------------------

void EmbeddingTable::insert(const std::string& id, std::vector<double> vector) {
  if (vector.size() != dim_) {
    throw InputError("embedding '" + id + "' has " + std::to_string(vector.size()) +
                     " values, table dimension is " + std::to_string(dim_));
  }
  for (double v : vector) {
    if (!std::isfinite(v)) throw InputError("embedding '" + id + "' contains a non-finite value");
  }
  if (!rows_.contains(id)) order_.push_back(id);
  rows_[id] = std::move(vector);
}

std::span<const double> EmbeddingTable::lookup(const std::string& id) const {
  const auto it = rows_.find(id);
  if (it == rows_.end()) throw LookupError("no embedding for id '" + id + "'");
  return it->second;
}

EmbeddingTable EmbeddingTable::parse_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("embedding file is empty; expected a header", 1);
  const auto header = split_csv_line(strip_cr(line));
  if (header.size() < 2 || header[0] != "id" || header[1] != "e") {
    throw ParseError("embedding header must start with 'id,e'", 1);
  }
  const std::size_t dim = header.size() - 2;
  for (std::size_t k = 0; k < dim; ++k) {
    if (header[k + 2] != "v_" + std::to_string(k)) {
      throw ParseError("embedding header column " + std::to_string(k + 2) + " must be 'v_" +
                           std::to_string(k) + "'",
                       1);
    }
  }
  EmbeddingTable table(dim);
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != dim + 2) {
      throw ParseError("expected " + std::to_string(dim + 2) + " fields, found " +
                           std::to_string(fields.size()),
                       line_no);
    }
    if (fields[0].empty()) throw ParseError("empty id", line_no);
    if (fields[1] != std::to_string(dim)) {
      throw ParseError("declared dimension '" + fields[1] + "' differs from header (" +
                           std::to_string(dim) + ")",
                       line_no);
    }
    std::vector<double> v(dim);
    for (std::size_t k = 0; k < dim; ++k) v[k] = parse_double(fields[k + 2], line_no);
    try {
      table.insert(fields[0], std::move(v));
    } catch (const InputError& e) {
      throw ParseError(e.what(), line_no);
    }
  }
  return table;
}

EmbeddingTable EmbeddingTable::load_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open embedding file: " + path.string());
  try {
    return parse_csv(in);
  } catch (const ParseError& e) {
    throw ParseError(e.detail(), e.line(), path.string());
  }
}

void EmbeddingTable::write_csv(std::ostream& out) const {
  out << "id,e";
  for (std::size_t k = 0; k < dim_; ++k) out << ",v_" << k;
  out << '\n';
  char buf[32];
  for (const auto& id : order_) {
    out << id << ',' << dim_;
    for (double v : rows_.at(id)) {
      std::snprintf(buf, sizeof buf, "%.17g", v);
      out << ',' << buf;
    }
    out << '\n';
  }
}

// ---- Hyperparams ----------------------------------------------------------

void Hyperparams::validate() const {
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw ConfigError("learning rate must be positive");
  }
  if (!(momentum >= 0.0 && momentum < 1.0)) throw ConfigError("momentum must lie in [0, 1)");
  if (epochs == 0) throw ConfigError("epochs must be positive");
  if (batch_size == 0) throw ConfigError("batch size must be positive");
  if (reduce_width == 0 || classify_width == 0) throw ConfigError("hidden widths must be positive");
}

// ---- FusionModel ----------------------------------------------------------

FusionModel FusionModel::initialize(std::size_t embedding_dim, const Hyperparams& hp) {
  hp.validate();
  FusionModel m;
  m.embedding_dim_ = embedding_dim;
  m.hyperparams_ = hp;
  Rng rng(derive_seed(hp.seed, 0));
  m.layers_.push_back(he_layer(m.input_dim(), hp.reduce_width, Activation::relu, rng));
  m.layers_.push_back(he_layer(hp.reduce_width, hp.reduce_width, Activation::relu, rng));
  m.layers_.push_back(he_layer(hp.reduce_width, hp.classify_width, Activation::relu, rng));
  m.layers_.push_back(he_layer(hp.classify_width, 2, Activation::identity, rng));
  return m;
}

void FusionModel::fit_normalizer(std::span<const StyloVector> training) {
  if (training.empty()) throw InputError("cannot fit normalization on an empty set");
  const auto n = static_cast<double>(training.size());
  for (std::size_t k = 0; k < kFeatureCount; ++k) {
    double sum = 0.0;
    for (const auto& v : training) sum += v[k];
    const double mean = sum / n;
    double ss = 0.0;
    bool constant = true;
    for (const auto& v : training) {
      const double d = v[k] - mean;
      ss += d * d;
      if (v[k] != training.front()[k]) constant = false;
    }
    const double sd = std::sqrt(ss / n);
    normalizer_.mean[k] = mean;
    normalizer_.constant[k] = constant || !(sd > 0.0);
    normalizer_.stdev[k] = normalizer_.constant[k] ? 1.0 : sd;
  }
  fitted_ = true;
}

void FusionModel::set_normalizer(const Normalizer& n) {
  for (std::size_t k = 0; k < kFeatureCount; ++k) {
    if (!(n.stdev[k] > 0.0)) throw InputError("normalizer stdev must be positive");
  }
  normalizer_ = n;
  fitted_ = true;
}

std::array<double, kFeatureCount> FusionModel::normalize(const StyloVector& v) const {
  if (!fitted_) throw StateError("model normalization statistics are not fitted");
  std::array<double, kFeatureCount> out{};
  for (std::size_t k = 0; k < kFeatureCount; ++k) {
    out[k] = normalizer_.constant[k] ? 0.0 : (v[k] - normalizer_.mean[k]) / normalizer_.stdev[k];
  }
  return out;
}

Eigen::VectorXd FusionModel::assemble(const StyloVector& style, std::span<const double> embedding) const {
  if (embedding.size() != embedding_dim_) {
    throw InputError("embedding has " + std::to_string(embedding.size()) +
                     " values, model expects " + std::to_string(embedding_dim_));
  }
  const auto z = normalize(style);
  Eigen::VectorXd x(static_cast<Eigen::Index>(input_dim()));
  for (std::size_t k = 0; k < kFeatureCount; ++k) x(static_cast<Eigen::Index>(k)) = z[k];
  for (std::size_t k = 0; k < embedding_dim_; ++k) {
    x(static_cast<Eigen::Index>(kFeatureCount + k)) = embedding[k];
  }
  return x;
}

Eigen::MatrixXd FusionModel::logits(const Eigen::MatrixXd& inputs) const {
  if (static_cast<std::size_t>(inputs.rows()) != input_dim()) {
    throw InputError("input has " + std::to_string(inputs.rows()) + " values, model expects " +
                     std::to_string(input_dim()));
  }
  Eigen::MatrixXd a = inputs;
  for (const auto& layer : layers_) {
    Eigen::MatrixXd z = layer.weights * a;
    z.colwise() += layer.bias;
    a = activate(z, layer.activation);
  }
  return a;
}

Probabilities FusionModel::forward(std::span<const double> x) const {
  if (x.size() != input_dim()) {
    throw InputError("input has " + std::to_string(x.size()) + " values, model expects " +
                     std::to_string(input_dim()));
  }
  const Eigen::Map<const Eigen::VectorXd> col(x.data(), static_cast<Eigen::Index>(x.size()));
  const Eigen::MatrixXd p = softmax(logits(col));
  return {p(0, 0), p(1, 0)};
}

Probabilities FusionModel::predict(const StyloVector& style, std::span<const double> embedding) const {
  const Eigen::VectorXd x = assemble(style, embedding);
  return forward(std::span<const double>(x.data(), static_cast<std::size_t>(x.size())));
}

std::uint64_t FusionModel::checksum() const {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (const auto& layer : layers_) {
    hash_bytes(h, layer.weights.data(), sizeof(double) * static_cast<std::size_t>(layer.weights.size()));
    hash_bytes(h, layer.bias.data(), sizeof(double) * static_cast<std::size_t>(layer.bias.size()));
  }
  hash_bytes(h, normalizer_.mean.data(), sizeof normalizer_.mean);
  hash_bytes(h, normalizer_.stdev.data(), sizeof normalizer_.stdev);
  return h;
}

json FusionModel::to_json() const {
  json j;
  j["format"] = kModelFormat;
  j["version"] = kModelVersion;
  j["embedding_dim"] = embedding_dim_;
  j["feature_names"] = feature_names();
  j["hyperparams"] = {
      {"learning_rate", hyperparams_.learning_rate}, {"momentum", hyperparams_.momentum},
      {"epochs", hyperparams_.epochs},               {"batch_size", hyperparams_.batch_size},
      {"seed", hyperparams_.seed},                   {"reduce_width", hyperparams_.reduce_width},
      {"classify_width", hyperparams_.classify_width},
  };
  if (fitted_) {
    j["normalizer"] = {{"mean", normalizer_.mean},
                       {"stdev", normalizer_.stdev},
                       {"constant", normalizer_.constant}};
  } else {
    j["normalizer"] = nullptr;
  }
  json layers = json::array();
  for (const auto& layer : layers_) {
    std::vector<double> w;
    w.reserve(static_cast<std::size_t>(layer.weights.size()));
    for (Eigen::Index r = 0; r < layer.weights.rows(); ++r) {
      for (Eigen::Index c = 0; c < layer.weights.cols(); ++c) w.push_back(layer.weights(r, c));
    }
    layers.push_back({{"inputs", layer.inputs()},
                      {"outputs", layer.outputs()},
                      {"activation", activation_name(layer.activation)},
                      {"weights", std::move(w)},
                      {"bias", std::vector<double>(layer.bias.data(), layer.bias.data() + layer.bias.size())}});
  }
  j["layers"] = std::move(layers);
  return j;
}

FusionModel FusionModel::from_json(const json& j) {
  try {
    if (j.at("format").get<std::string>() != kModelFormat) {
      throw ValidationError("not a stylo fusion model file");
    }
    if (j.at("version").get<int>() != kModelVersion) {
      throw ValidationError("unsupported model version " + std::to_string(j.at("version").get<int>()));
    }
    FusionModel m;
    m.embedding_dim_ = j.at("embedding_dim").get<std::size_t>();
    const auto& hp = j.at("hyperparams");
    m.hyperparams_.learning_rate = hp.at("learning_rate").get<double>();
    m.hyperparams_.momentum = hp.at("momentum").get<double>();
    m.hyperparams_.epochs = hp.at("epochs").get<std::size_t>();
    m.hyperparams_.batch_size = hp.at("batch_size").get<std::size_t>();
    m.hyperparams_.seed = hp.at("seed").get<std::uint64_t>();
    m.hyperparams_.reduce_width = hp.at("reduce_width").get<std::size_t>();
    m.hyperparams_.classify_width = hp.at("classify_width").get<std::size_t>();
    if (!j.at("normalizer").is_null()) {
      Normalizer n;
      n.mean = j.at("normalizer").at("mean").get<std::array<double, kFeatureCount>>();
      n.stdev = j.at("normalizer").at("stdev").get<std::array<double, kFeatureCount>>();
      n.constant = j.at("normalizer").at("constant").get<std::array<bool, kFeatureCount>>();
      m.set_normalizer(n);
    }
    std::size_t expected_in = m.input_dim();
    for (const auto& lj : j.at("layers")) {
      DenseLayer layer;
      const auto in = lj.at("inputs").get<std::size_t>();
      const auto out = lj.at("outputs").get<std::size_t>();
      if (in != expected_in) throw ValidationError("layer shapes do not chain");
      const auto w = lj.at("weights").get<std::vector<double>>();
      const auto b = lj.at("bias").get<std::vector<double>>();
      if (w.size() != in * out || b.size() != out) throw ValidationError("layer parameter count mismatch");
      layer.weights.resize(static_cast<Eigen::Index>(out), static_cast<Eigen::Index>(in));
      for (std::size_t r = 0; r < out; ++r) {
        for (std::size_t c = 0; c < in; ++c) {
          layer.weights(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = w[r * in + c];
        }
      }
      layer.bias = Eigen::Map<const Eigen::VectorXd>(b.data(), static_cast<Eigen::Index>(out));
      layer.activation = parse_activation(lj.at("activation").get<std::string>());
      m.layers_.push_back(std::move(layer));
      expected_in = out;
    }
    if (m.layers_.empty() || expected_in != 2) throw ValidationError("model must end in 2 outputs");
    return m;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed model file: ") + e.what());
  }
}

void FusionModel::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write model file: " + path.string());
  out << to_json().dump(1) << '\n';
}

FusionModel FusionModel::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open model file: " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed model JSON: ") + e.what(), 0, path.string());
  }
  return from_json(j);
}

// ---- loss and gradients ---------------------------------------------------

double cross_entropy(const FusionModel& model, const Eigen::MatrixXd& inputs, std::span<const int> labels) {
  check_batch(model, inputs, labels);
  const Eigen::MatrixXd z = model.logits(inputs);
  double total = 0.0;
  for (Eigen::Index c = 0; c < z.cols(); ++c) {
    const double m = z.col(c).maxCoeff();
    const double lse = m + std::log((z.col(c).array() - m).exp().sum());
    total += lse - z(target_row(labels[static_cast<std::size_t>(c)]), c);
  }
  return total / static_cast<double>(z.cols());
}

LossGradient loss_and_gradient(const FusionModel& model, const Eigen::MatrixXd& inputs,
                               std::span<const int> labels) {
  check_batch(model, inputs, labels);
  const auto& layers = model.layers();
  const auto batch = static_cast<double>(inputs.cols());

  std::vector<Eigen::MatrixXd> acts{inputs};
  std::vector<Eigen::MatrixXd> pre;
  for (const auto& layer : layers) {
    Eigen::MatrixXd z = layer.weights * acts.back();
    z.colwise() += layer.bias;
    acts.push_back(activate(z, layer.activation));
    pre.push_back(std::move(z));
  }

  LossGradient out;
  const Eigen::MatrixXd& z_out = pre.back();
  Eigen::MatrixXd delta = softmax(z_out);
  for (Eigen::Index c = 0; c < z_out.cols(); ++c) {
    const auto t = target_row(labels[static_cast<std::size_t>(c)]);
    const double m = z_out.col(c).maxCoeff();
    const double lse = m + std::log((z_out.col(c).array() - m).exp().sum());
    out.loss += lse - z_out(t, c);
    delta(t, c) -= 1.0;
  }
  out.loss /= batch;
  delta /= batch;

  out.layers.resize(layers.size());
  for (std::size_t l = layers.size(); l-- > 0;) {
    if (layers[l].activation == Activation::relu) {
      delta = delta.cwiseProduct((pre[l].array() > 0.0).cast<double>().matrix());
    }
    out.layers[l].weights = delta * acts[l].transpose();
    out.layers[l].bias = delta.rowwise().sum();
    if (l > 0) delta = layers[l].weights.transpose() * delta;
  }
  return out;
}

// ---- training ---------------------------------------------------------------

TrainResult train(std::span<const Example> data, const Hyperparams& hp) {
  hp.validate();
  if (data.size() < 2) throw InputError("training needs at least 2 examples");
  const std::size_t dim = data.front().embedding.size();
  bool has_ai = false;
  bool has_human = false;
  for (const auto& ex : data) {
    if (ex.embedding.size() != dim) throw InputError("examples have differing embedding sizes");
    if (ex.label == kAiLabel) has_ai = true;
    else if (ex.label == kHumanLabel) has_human = true;
    else throw InputError("label must be 0 or 1");
  }
  if (!has_ai || !has_human) throw InputError("training data must contain both classes");

  TrainResult result{FusionModel::initialize(dim, hp), {}};
  FusionModel& model = result.model;
  {
    std::vector<StyloVector> styles;
    styles.reserve(data.size());
    for (const auto& ex : data) styles.push_back(ex.style);
    model.fit_normalizer(styles);
  }

  const auto n = static_cast<Eigen::Index>(data.size());
  Eigen::MatrixXd inputs(static_cast<Eigen::Index>(model.input_dim()), n);
  std::vector<int> labels(data.size());
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& ex = data[static_cast<std::size_t>(i)];
    inputs.col(i) = model.assemble(ex.style, ex.embedding);
    labels[static_cast<std::size_t>(i)] = ex.label;
  }

  std::vector<LayerGradient> velocity;
  for (const auto& layer : model.layers()) {
    velocity.push_back({Eigen::MatrixXd::Zero(layer.weights.rows(), layer.weights.cols()),
                        Eigen::VectorXd::Zero(layer.bias.size())});
  }

  Rng rng(derive_seed(hp.seed, 1));
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t epoch = 0; epoch < hp.epochs; ++epoch) {
    rng.shuffle(std::span<std::size_t>(order));
    for (std::size_t start = 0; start < order.size(); start += hp.batch_size) {
      const std::size_t end = std::min(order.size(), start + hp.batch_size);
      Eigen::MatrixXd batch(inputs.rows(), static_cast<Eigen::Index>(end - start));
      std::vector<int> batch_labels(end - start);
      for (std::size_t b = start; b < end; ++b) {
        batch.col(static_cast<Eigen::Index>(b - start)) = inputs.col(static_cast<Eigen::Index>(order[b]));
        batch_labels[b - start] = labels[order[b]];
      }
      const auto grad = loss_and_gradient(model, batch, batch_labels);
      auto& layers = model.layers();
      for (std::size_t l = 0; l < layers.size(); ++l) {
        velocity[l].weights = hp.momentum * velocity[l].weights - hp.learning_rate * grad.layers[l].weights;
        velocity[l].bias = hp.momentum * velocity[l].bias - hp.learning_rate * grad.layers[l].bias;
        layers[l].weights += velocity[l].weights;
        layers[l].bias += velocity[l].bias;
      }
    }
    result.epoch_loss.push_back(cross_entropy(model, inputs, labels));
  }
  return result;
}

double accuracy(const FusionModel& model, std::span<const Example> data) {
  if (data.empty()) throw InputError("accuracy of an empty set is undefined");
  std::size_t correct = 0;
  for (const auto& ex : data) {
    if (model.predict(ex.style, ex.embedding).label() == ex.label) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(data.size());
}

Prediction predict_timeline(const Timeline& tl, const FusionModel& model,
                            const EmbeddingTable* embeddings, std::size_t mttr_window) {
  std::span<const double> embedding;
  if (model.embedding_dim() > 0) {
    if (embeddings == nullptr) throw LookupError("no embedding for id '" + tl.id + "' (no table given)");
    embedding = embeddings->lookup(tl.id);
  }
  const auto p = model.predict(extract(tl.joined_text(), mttr_window), embedding);
  return {p.label(), p.ai};
}

Importance permutation_importance(const FusionModel& model, std::span<const Example> eval_set,
                                  std::uint64_t seed, std::size_t repeats) {
  if (eval_set.empty()) throw InputError("importance needs a non-empty evaluation set");
  repeats = std::max<std::size_t>(repeats, 1);
  Importance imp;
  imp.baseline_accuracy = accuracy(model, eval_set);

  std::vector<Example> shuffled(eval_set.begin(), eval_set.end());
  std::vector<double> column(eval_set.size());
  for (std::size_t k = 0; k < kFeatureCount; ++k) {
    Rng rng(derive_seed(seed, k));
    double drop = 0.0;
    for (std::size_t r = 0; r < repeats; ++r) {
      for (std::size_t i = 0; i < eval_set.size(); ++i) column[i] = eval_set[i].style[k];
      rng.shuffle(std::span<double>(column));
      for (std::size_t i = 0; i < eval_set.size(); ++i) shuffled[i].style[k] = column[i];
      drop += imp.baseline_accuracy - accuracy(model, shuffled);
    }
    for (std::size_t i = 0; i < eval_set.size(); ++i) shuffled[i].style[k] = eval_set[i].style[k];
    imp.per_feature[k] = drop / static_cast<double>(repeats);
  }

  std::array<std::size_t, kCategoryCount> members{};
  for (std::size_t k = 0; k < kFeatureCount; ++k) {
    const auto c = static_cast<std::size_t>(feature_category(k));
    imp.per_category[c] += imp.per_feature[k];
    ++members[c];
  }
  for (std::size_t c = 0; c < kCategoryCount; ++c) imp.per_category[c] /= static_cast<double>(members[c]);
  return imp;
}

}  // namespace stylo
