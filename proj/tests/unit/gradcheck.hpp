#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "stylo/fusion.hpp"
#include "stylo/random.hpp"

namespace stylo::test {

struct GradientProbe {
  std::size_t layer = 0;
  double analytic = 0.0;
  double numeric = 0.0;
  double relative_error = 0.0;
};

// Relative error with a floor on the denominator, so parameters whose true
// gradient is ~0 (dead ReLU paths) compare on an absolute scale.
inline double relative_error(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-7});
}

// Compares loss_and_gradient with central differences on `per_layer`
// uniformly chosen parameters (weights or biases) of every layer.
inline std::vector<GradientProbe> probe_gradients(std::size_t embedding_dim, std::uint64_t seed,
                                                  std::size_t per_layer = 10, double delta = 1e-5,
                                                  std::size_t batch = 8) {
  Hyperparams hp;
  hp.seed = seed;
  FusionModel model = FusionModel::initialize(embedding_dim, hp);
  Rng rng(derive_seed(seed, 99));
  Eigen::MatrixXd x(static_cast<Eigen::Index>(model.input_dim()), static_cast<Eigen::Index>(batch));
  for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = rng.normal();
  std::vector<int> labels(batch);
  for (std::size_t b = 0; b < batch; ++b) labels[b] = static_cast<int>(b % 2);

  const LossGradient grad = loss_and_gradient(model, x, labels);
  std::vector<GradientProbe> probes;
  for (std::size_t l = 0; l < model.layers().size(); ++l) {
    auto& layer = model.layers()[l];
    const auto n_weights = static_cast<std::uint64_t>(layer.weights.size());
    const auto n_params = n_weights + static_cast<std::uint64_t>(layer.bias.size());
    for (std::size_t p = 0; p < per_layer; ++p) {
      const std::uint64_t idx = rng.uniform_index(n_params);
      double* param = idx < n_weights ? layer.weights.data() + idx : layer.bias.data() + (idx - n_weights);
      const double analytic = idx < n_weights ? grad.layers[l].weights.data()[idx]
                                              : grad.layers[l].bias.data()[idx - n_weights];
      const double saved = *param;
      *param = saved + delta;
      const double up = cross_entropy(model, x, labels);
      *param = saved - delta;
      const double down = cross_entropy(model, x, labels);
      *param = saved;
      const double numeric = (up - down) / (2.0 * delta);
      probes.push_back({l, analytic, numeric, relative_error(analytic, numeric)});
    }
  }
  return probes;
}

}  // namespace stylo::test
