#pragma once

#include <vector>

#include "pdtab/nnmodels/model.hpp"

namespace pdtab::nn {

// ReLU hidden layers per config, then one sigmoid output unit.
class MlpModel final : public NeuralModel {
 public:
  MlpModel(const MlpConfig& config, std::size_t input_features, Rng& init_rng);

  ModelKind kind() const override { return ModelKind::kMlp; }
  ModelConfig config() const override { return config_; }
  ad::Var forward(const ad::Var& x, ForwardContext& ctx) const override;

  const std::vector<Linear>& layers() const { return layers_; }

 private:
  MlpConfig config_;
  std::vector<Linear> layers_;  // hidden layers followed by the output layer
};

}  // namespace pdtab::nn
