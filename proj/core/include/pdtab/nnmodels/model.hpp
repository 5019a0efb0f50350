#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "pdtab/autodiff/node.hpp"
#include "pdtab/autodiff/ops.hpp"
#include "pdtab/nnmodels/config.hpp"
#include "pdtab/random.hpp"

namespace pdtab::nn {

enum class Mode { kTrain, kInference };

// Side outputs of a forward pass, filled when requested.
struct ForwardTrace {
  ad::Tensor feature_mask;                         // attentive: softmax mask [n x d]
  std::vector<ad::AttentionWeights> self_attention;  // SAINT, one entry per layer
  std::vector<ad::AttentionWeights> intersample;     // SAINT, one entry per layer
};

struct ForwardContext {
  Mode mode = Mode::kInference;
  Rng* rng = nullptr;             // dropout stream, train mode only
  ForwardTrace* trace = nullptr;  // optional
  // Ghost-batch moments observed in train mode, for NeuralModel::absorb_batch_stats.
  std::vector<ad::ChunkStats> batch_stats;
};

// Non-trainable state saved with a model (normalisation moments).
struct NamedTensor {
  std::string name;
  ad::Tensor value;
};

// Affine layer x . W + b, W shaped [in x out].
struct Linear {
  ad::Var weight;
  ad::Var bias;

  ad::Var operator()(const ad::Var& x) const { return ad::add_row_bias(ad::matmul(x, weight), bias); }
};

// Uniform(-sqrt(1/fan_in), +sqrt(1/fan_in)) weights, zero bias; both are
// appended to `params` under prefix.W / prefix.b.
Linear make_linear(ad::ParameterList& params, const std::string& prefix, std::size_t in, std::size_t out, Rng& rng);

// Parameter initialised to a constant (norm gains and shifts).
ad::Var make_filled(ad::ParameterList& params, const std::string& name, ad::Shape shape, double value);

class NeuralModel {
 public:
  virtual ~NeuralModel() = default;

  virtual ModelKind kind() const = 0;
  virtual ModelConfig config() const = 0;
  std::size_t input_features() const { return input_features_; }

  // Probabilities of class 1, shape [n].
  virtual ad::Var forward(const ad::Var& x, ForwardContext& ctx) const = 0;

  virtual std::vector<NamedTensor> buffers() const { return {}; }
  virtual void set_buffer(const std::string& name, const ad::Tensor& value);
  virtual void absorb_batch_stats(const std::vector<ad::ChunkStats>& /*stats*/) {}

  ad::ParameterList& parameters() { return params_; }
  const ad::ParameterList& parameters() const { return params_; }

 protected:
  explicit NeuralModel(std::size_t input_features) : input_features_(input_features) {}
  void check_input(const ad::Var& x) const;

  ad::ParameterList params_;

 private:
  std::size_t input_features_;
};

// Builds a freshly initialised model for `input_features` columns.
std::unique_ptr<NeuralModel> make_model(const ModelConfig& config, std::size_t input_features, Rng& init_rng);

}  // namespace pdtab::nn
