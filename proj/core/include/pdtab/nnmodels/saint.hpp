#pragma once

#include <vector>

#include "pdtab/nnmodels/model.hpp"

namespace pdtab::nn {

// Parameters of one post-norm transformer block acting on feature tokens.
struct AttentionBlock {
  Linear query;
  Linear key;
  Linear value;
  Linear out;
  ad::Var norm1_gain;
  ad::Var norm1_shift;
  Linear ff_in;
  Linear ff_out;
  ad::Var norm2_gain;
  ad::Var norm2_shift;
};

// Token layout used throughout: a batch of n rows with F features is held as
// [n*F x d_emb], row i's tokens occupying rows [i*F, (i+1)*F).
//
// forward: embed -> n_layers x (self-attention block, intersample block if
// enabled) -> mean over each row's tokens -> sigmoid(linear).
class SaintModel final : public NeuralModel {
 public:
  SaintModel(const SaintConfig& config, std::size_t input_features, Rng& init_rng);

  ModelKind kind() const override { return ModelKind::kSaint; }
  ModelConfig config() const override { return config_; }
  ad::Var forward(const ad::Var& x, ForwardContext& ctx) const override;

  // Per-feature affine embedding, [n x F] -> [n*F x d_emb].
  ad::Var embed(const ad::Var& x) const;

  // Attention among the F tokens of each row.
  ad::Var self_attention_block(const ad::Var& tokens, std::size_t layer, ForwardContext& ctx,
                               ad::AttentionWeights* trace = nullptr) const;

  // Attention among the rows of the batch; each row's tokens are flattened to
  // one F*d_emb vector for scoring. Query/key/value/output maps and the
  // feed-forward act token-wise.
  ad::Var intersample_attention_block(const ad::Var& tokens, std::size_t layer, ForwardContext& ctx,
                                      ad::AttentionWeights* trace = nullptr) const;

  const AttentionBlock& self_block(std::size_t layer) const { return self_blocks_[layer]; }
  const AttentionBlock& intersample_block(std::size_t layer) const { return inter_blocks_[layer]; }
  const ad::Var& embed_weight() const { return embed_weight_; }
  const ad::Var& embed_bias() const { return embed_bias_; }
  const Linear& head() const { return head_; }

 private:
  // groups == rows for self-attention (tokens of one row attend to each other),
  // groups == 1 for intersample.
  ad::Var block(const ad::Var& tokens, const AttentionBlock& p, bool intersample, ForwardContext& ctx,
                ad::AttentionWeights* trace) const;

  SaintConfig config_;
  ad::Var embed_weight_;
  ad::Var embed_bias_;
  std::vector<AttentionBlock> self_blocks_;
  std::vector<AttentionBlock> inter_blocks_;
  Linear head_;
};

}  // namespace pdtab::nn
