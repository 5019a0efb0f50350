#pragma once

#include "pdtab/nnmodels/model.hpp"

namespace pdtab::nn {

// mask = softmax_rows(x . A + a); masked = mask * x;
// p = sigmoid(w2 . relu(GBN(masked . W1 + b1)) + b2).
// Ghost batch norm uses per-virtual-batch moments in training and running
// moments at inference, so inference is row-independent.
class AttentiveModel final : public NeuralModel {
 public:
  AttentiveModel(const AttentiveConfig& config, std::size_t input_features, Rng& init_rng);

  ModelKind kind() const override { return ModelKind::kAttentive; }
  ModelConfig config() const override { return config_; }
  ad::Var forward(const ad::Var& x, ForwardContext& ctx) const override;

  // Softmax mask for each row, [n x d].
  ad::Var mask(const ad::Var& x) const;

  std::vector<NamedTensor> buffers() const override;
  void set_buffer(const std::string& name, const ad::Tensor& value) override;
  void absorb_batch_stats(const std::vector<ad::ChunkStats>& stats) override;

  const Linear& attention() const { return attention_; }

 private:
  AttentiveConfig config_;
  Linear attention_;
  Linear hidden_;
  ad::Var bn_gain_;
  ad::Var bn_shift_;
  Linear output_;
  ad::Tensor running_mean_;
  ad::Tensor running_var_;
};

}  // namespace pdtab::nn
