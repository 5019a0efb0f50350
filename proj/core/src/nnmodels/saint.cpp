#include "pdtab/nnmodels/saint.hpp"

#include "pdtab/errors.hpp"

namespace pdtab::nn {

namespace {

AttentionBlock make_block(ad::ParameterList& params, const std::string& prefix, const SaintConfig& c, Rng& rng) {
  const std::size_t d = c.embed_dim, hidden = c.embed_dim * c.ff_multiplier;
  AttentionBlock b;
  b.query = make_linear(params, prefix + ".q", d, d, rng);
  b.key = make_linear(params, prefix + ".k", d, d, rng);
  b.value = make_linear(params, prefix + ".v", d, d, rng);
  b.out = make_linear(params, prefix + ".o", d, d, rng);
  b.norm1_gain = make_filled(params, prefix + ".norm1.gain", ad::Shape{d}, 1.0);
  b.norm1_shift = make_filled(params, prefix + ".norm1.shift", ad::Shape{d}, 0.0);
  b.ff_in = make_linear(params, prefix + ".ff_in", d, hidden, rng);
  b.ff_out = make_linear(params, prefix + ".ff_out", hidden, d, rng);
  b.norm2_gain = make_filled(params, prefix + ".norm2.gain", ad::Shape{d}, 1.0);
  b.norm2_shift = make_filled(params, prefix + ".norm2.shift", ad::Shape{d}, 0.0);
  return b;
}

}  // namespace

SaintModel::SaintModel(const SaintConfig& config, std::size_t input_features, Rng& init_rng)
    : NeuralModel(input_features), config_(config) {
  config_.validate();
  const std::size_t d = config_.embed_dim;
  ad::Tensor w(ad::Shape{input_features, d});
  for (auto& v : w.storage()) v = init_rng.uniform(-1.0, 1.0);  // fan_in of a scalar feature is 1
  embed_weight_ = ad::Var(std::move(w), "param");
  embed_bias_ = ad::Var(ad::Tensor(ad::Shape{input_features, d}), "param");
  params_.push_back({"saint.embed.W", embed_weight_});
  params_.push_back({"saint.embed.b", embed_bias_});
  for (std::size_t l = 0; l < config_.n_layers; ++l) {
    const std::string prefix = "saint.layer" + std::to_string(l);
    self_blocks_.push_back(make_block(params_, prefix + ".self", config_, init_rng));
    if (config_.use_intersample) inter_blocks_.push_back(make_block(params_, prefix + ".inter", config_, init_rng));
  }
  head_ = make_linear(params_, "saint.head", d, 1, init_rng);
}

ad::Var SaintModel::embed(const ad::Var& x) const {
  check_input(x);
  return ad::feature_embedding(x, embed_weight_, embed_bias_);
}

ad::Var SaintModel::block(const ad::Var& tokens, const AttentionBlock& p, bool intersample, ForwardContext& ctx,
                          ad::AttentionWeights* trace) const {
  const std::size_t f = input_features(), d = config_.embed_dim;
  if (tokens.shape().size() != 2 || tokens.shape()[1] != d || tokens.shape()[0] % f != 0) {
    throw DimensionError("saint block expects [n*" + std::to_string(f) + " x " + std::to_string(d) + "] tokens, got " +
                         ad::shape_string(tokens.shape()));
  }
  const std::size_t rows = tokens.shape()[0] / f;
  const bool train = ctx.mode == Mode::kTrain;
  const double p_drop = train ? config_.dropout : 0.0;
  if (p_drop > 0.0 && ctx.rng == nullptr) throw UsageError("saint: training forward needs a dropout stream");

  ad::Var q = p.query(tokens), k = p.key(tokens), v = p.value(tokens);
  ad::Var attended;
  if (intersample) {
    const ad::Shape flat{rows, f * d};
    attended = ad::multi_head_attention(ad::reshape(q, flat), ad::reshape(k, flat), ad::reshape(v, flat), 1,
                                        config_.n_heads, p_drop, ctx.rng, trace);
    attended = ad::reshape(attended, tokens.shape());
  } else {
    attended = ad::multi_head_attention(q, k, v, rows, config_.n_heads, p_drop, ctx.rng, trace);
  }
  const ad::Var z = ad::layer_norm(ad::add(tokens, p.out(attended)), p.norm1_gain, p.norm1_shift);
  ad::Var hidden = ad::relu(p.ff_in(z));
  if (p_drop > 0.0) hidden = ad::dropout(hidden, p_drop, *ctx.rng);
  return ad::layer_norm(ad::add(z, p.ff_out(hidden)), p.norm2_gain, p.norm2_shift);
}

ad::Var SaintModel::self_attention_block(const ad::Var& tokens, std::size_t layer, ForwardContext& ctx,
                                         ad::AttentionWeights* trace) const {
  return block(tokens, self_blocks_.at(layer), false, ctx, trace);
}

ad::Var SaintModel::intersample_attention_block(const ad::Var& tokens, std::size_t layer, ForwardContext& ctx,
                                                ad::AttentionWeights* trace) const {
  if (inter_blocks_.empty()) throw UsageError("saint: intersample attention is disabled in this model");
  return block(tokens, inter_blocks_.at(layer), true, ctx, trace);
}

ad::Var SaintModel::forward(const ad::Var& x, ForwardContext& ctx) const {
  ad::Var h = embed(x);
  for (std::size_t l = 0; l < config_.n_layers; ++l) {
    ad::AttentionWeights self_trace, inter_trace;
    h = self_attention_block(h, l, ctx, ctx.trace ? &self_trace : nullptr);
    if (ctx.trace) ctx.trace->self_attention.push_back(std::move(self_trace));
    if (config_.use_intersample) {
      h = intersample_attention_block(h, l, ctx, ctx.trace ? &inter_trace : nullptr);
      if (ctx.trace) ctx.trace->intersample.push_back(std::move(inter_trace));
    }
  }
  const ad::Var pooled = ad::group_mean_rows(h, input_features());
  return ad::reshape(ad::sigmoid(head_(pooled)), ad::Shape{x.shape()[0]});
}

}  // namespace pdtab::nn
