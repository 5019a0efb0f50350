#include "pdtab/nnmodels/attentive.hpp"

#include "pdtab/errors.hpp"

namespace pdtab::nn {

AttentiveModel::AttentiveModel(const AttentiveConfig& config, std::size_t input_features, Rng& init_rng)
    : NeuralModel(input_features), config_(config) {
  config_.validate();
  attention_ = make_linear(params_, "attentive.mask", input_features, input_features, init_rng);
  hidden_ = make_linear(params_, "attentive.hidden", input_features, config_.head_hidden, init_rng);
  bn_gain_ = make_filled(params_, "attentive.bn.gain", ad::Shape{config_.head_hidden}, 1.0);
  bn_shift_ = make_filled(params_, "attentive.bn.shift", ad::Shape{config_.head_hidden}, 0.0);
  output_ = make_linear(params_, "attentive.output", config_.head_hidden, 1, init_rng);
  running_mean_ = ad::Tensor(ad::Shape{config_.head_hidden}, 0.0);
  running_var_ = ad::Tensor(ad::Shape{config_.head_hidden}, 1.0);
}

ad::Var AttentiveModel::mask(const ad::Var& x) const {
  check_input(x);
  return ad::softmax_rows(attention_(x));
}

ad::Var AttentiveModel::forward(const ad::Var& x, ForwardContext& ctx) const {
  const ad::Var m = mask(x);
  if (ctx.trace) ctx.trace->feature_mask = m.value();
  const ad::Var masked = ad::mul(m, x);
  const ad::Var pre = hidden_(masked);
  ad::Var normed;
  if (ctx.mode == Mode::kTrain) {
    std::vector<ad::ChunkStats> stats;
    normed = ad::ghost_batch_norm(pre, bn_gain_, bn_shift_, config_.virtual_batch, 1e-5, &stats);
    ctx.batch_stats.insert(ctx.batch_stats.end(), stats.begin(), stats.end());
  } else {
    normed = ad::batch_norm_inference(pre, running_mean_, running_var_, bn_gain_, bn_shift_, 1e-5);
  }
  const ad::Var logits = output_(ad::relu(normed));
  return ad::reshape(ad::sigmoid(logits), ad::Shape{x.shape()[0]});
}

std::vector<NamedTensor> AttentiveModel::buffers() const {
  return {{"attentive.bn.running_mean", running_mean_}, {"attentive.bn.running_var", running_var_}};
}

void AttentiveModel::set_buffer(const std::string& name, const ad::Tensor& value) {
  ad::Tensor* target = name == "attentive.bn.running_mean" ? &running_mean_
                       : name == "attentive.bn.running_var" ? &running_var_
                                                            : nullptr;
  if (target == nullptr) NeuralModel::set_buffer(name, value);
  if (value.shape() != target->shape()) throw CheckpointError("buffer '" + name + "' has the wrong shape");
  *target = value;
}

void AttentiveModel::absorb_batch_stats(const std::vector<ad::ChunkStats>& stats) {
  const double mom = config_.bn_momentum;
  for (const auto& chunk : stats) {
    for (std::size_t j = 0; j < running_mean_.size(); ++j) {
      running_mean_[j] = (1.0 - mom) * running_mean_[j] + mom * chunk.mean[j];
      running_var_[j] = (1.0 - mom) * running_var_[j] + mom * chunk.var[j];
    }
  }
}

}  // namespace pdtab::nn
