#include "pdtab/nnmodels/mlp.hpp"

namespace pdtab::nn {

MlpModel::MlpModel(const MlpConfig& config, std::size_t input_features, Rng& init_rng)
    : NeuralModel(input_features), config_(config) {
  config_.validate();
  std::size_t width = input_features;
  for (std::size_t l = 0; l < config_.hidden_sizes.size(); ++l) {
    layers_.push_back(make_linear(params_, "mlp.layer" + std::to_string(l), width, config_.hidden_sizes[l], init_rng));
    width = config_.hidden_sizes[l];
  }
  layers_.push_back(make_linear(params_, "mlp.output", width, 1, init_rng));
}

ad::Var MlpModel::forward(const ad::Var& x, ForwardContext& /*ctx*/) const {
  check_input(x);
  ad::Var h = x;
  for (std::size_t l = 0; l + 1 < layers_.size(); ++l) h = ad::relu(layers_[l](h));
  const ad::Var logits = layers_.back()(h);
  return ad::reshape(ad::sigmoid(logits), ad::Shape{x.shape()[0]});
}

}  // namespace pdtab::nn
