#include "pdtab/nnmodels/model.hpp"

#include <cmath>

#include "pdtab/errors.hpp"
#include "pdtab/nnmodels/attentive.hpp"
#include "pdtab/nnmodels/mlp.hpp"
#include "pdtab/nnmodels/saint.hpp"

namespace pdtab::nn {

Linear make_linear(ad::ParameterList& params, const std::string& prefix, std::size_t in, std::size_t out, Rng& rng) {
  const double bound = std::sqrt(1.0 / static_cast<double>(in));
  ad::Tensor w(ad::Shape{in, out});
  for (auto& v : w.storage()) v = rng.uniform(-bound, bound);
  Linear layer{ad::Var(std::move(w), "param"), ad::Var(ad::Tensor(ad::Shape{out}), "param")};
  params.push_back({prefix + ".W", layer.weight});
  params.push_back({prefix + ".b", layer.bias});
  return layer;
}

ad::Var make_filled(ad::ParameterList& params, const std::string& name, ad::Shape shape, double value) {
  ad::Var v(ad::Tensor(std::move(shape), value), "param");
  params.push_back({name, v});
  return v;
}

void NeuralModel::set_buffer(const std::string& name, const ad::Tensor& /*value*/) {
  throw CheckpointError("model has no buffer named '" + name + "'");
}

void NeuralModel::check_input(const ad::Var& x) const {
  if (x.shape().size() != 2 || x.shape()[1] != input_features_) {
    throw DimensionError("model expects [n x " + std::to_string(input_features_) + "] input, got " +
                         ad::shape_string(x.shape()));
  }
}

std::unique_ptr<NeuralModel> make_model(const ModelConfig& config, std::size_t input_features, Rng& init_rng) {
  if (input_features < 1) throw DimensionError("model needs at least one input feature");
  return std::visit(
      [&](const auto& c) -> std::unique_ptr<NeuralModel> {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, MlpConfig>) {
          return std::make_unique<MlpModel>(c, input_features, init_rng);
        } else if constexpr (std::is_same_v<T, AttentiveConfig>) {
          return std::make_unique<AttentiveModel>(c, input_features, init_rng);
        } else {
          return std::make_unique<SaintModel>(c, input_features, init_rng);
        }
      },
      config);
}

}  // namespace pdtab::nn
