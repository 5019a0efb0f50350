#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

namespace pdtab::nn {

enum class ModelKind { kMlp, kAttentive, kSaint };

std::string_view to_string(ModelKind kind);
// "mlp", "attentive" or "saint"; throws ConfigError otherwise.
ModelKind parse_model_kind(std::string_view name);

struct MlpConfig {
  std::vector<std::size_t> hidden_sizes{64, 32};
  void validate() const;
};

// Input-dependent feature mask (softmax over a linear map of the row) applied
// to the features, then a one-hidden-layer head with ghost batch norm.
struct AttentiveConfig {
  std::size_t head_hidden = 32;
  std::size_t virtual_batch = 128;
  double bn_momentum = 0.1;  // weight of the newest virtual batch in the running moments
  void validate() const;
};

struct SaintConfig {
  std::size_t embed_dim = 16;
  std::size_t n_layers = 2;
  std::size_t n_heads = 2;
  std::size_t ff_multiplier = 2;
  double dropout = 0.1;
  bool use_intersample = true;
  void validate() const;
};

struct TrainConfig {
  int epochs = 100;
  std::size_t batch_size = 256;  // capped at the training-set size
  double learning_rate = 1e-3;
  std::uint64_t seed = 42;
  void validate() const;
};

using ModelConfig = std::variant<MlpConfig, AttentiveConfig, SaintConfig>;

ModelKind kind_of(const ModelConfig& config);

void to_json(nlohmann::ordered_json& j, const MlpConfig& c);
void to_json(nlohmann::ordered_json& j, const AttentiveConfig& c);
void to_json(nlohmann::ordered_json& j, const SaintConfig& c);
void to_json(nlohmann::ordered_json& j, const TrainConfig& c);

// Missing keys keep their defaults; unknown keys and wrong types raise ConfigError.
void from_json(const nlohmann::ordered_json& j, MlpConfig& c);
void from_json(const nlohmann::ordered_json& j, AttentiveConfig& c);
void from_json(const nlohmann::ordered_json& j, SaintConfig& c);
void from_json(const nlohmann::ordered_json& j, TrainConfig& c);

nlohmann::ordered_json model_config_json(const ModelConfig& config);
ModelConfig model_config_from_json(ModelKind kind, const nlohmann::ordered_json& j);

}  // namespace pdtab::nn
