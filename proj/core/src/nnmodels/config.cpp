#include "pdtab/nnmodels/config.hpp"

#include <set>

#include "pdtab/errors.hpp"

namespace pdtab::nn {

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::kMlp:
      return "mlp";
    case ModelKind::kAttentive:
      return "attentive";
    case ModelKind::kSaint:
      return "saint";
  }
  return "?";
}

ModelKind parse_model_kind(std::string_view name) {
  if (name == "mlp") return ModelKind::kMlp;
  if (name == "attentive") return ModelKind::kAttentive;
  if (name == "saint") return ModelKind::kSaint;
  throw ConfigError("unknown neural model kind '" + std::string(name) + "'");
}

void MlpConfig::validate() const {
  for (const auto w : hidden_sizes)
    if (w < 1) throw ConfigError("mlp: hidden widths must be >= 1");
}

void AttentiveConfig::validate() const {
  if (head_hidden < 1) throw ConfigError("attentive: head_hidden must be >= 1");
  if (virtual_batch < 1) throw ConfigError("attentive: virtual_batch must be >= 1");
  if (!(bn_momentum > 0.0 && bn_momentum <= 1.0)) throw ConfigError("attentive: bn_momentum must lie in (0, 1]");
}

void SaintConfig::validate() const {
  if (embed_dim < 1 || n_heads < 1 || embed_dim % n_heads != 0) {
    throw ConfigError("saint: embed_dim must be a positive multiple of n_heads");
  }
  if (n_layers < 1) throw ConfigError("saint: n_layers must be >= 1");
  if (ff_multiplier < 1) throw ConfigError("saint: ff_multiplier must be >= 1");
  if (!(dropout >= 0.0 && dropout < 1.0)) throw ConfigError("saint: dropout must lie in [0, 1)");
}

void TrainConfig::validate() const {
  if (epochs < 1) throw ConfigError("train: epochs must be >= 1");
  if (batch_size < 1) throw ConfigError("train: batch_size must be >= 1");
  if (!(learning_rate > 0.0)) throw ConfigError("train: learning_rate must be positive");
}

ModelKind kind_of(const ModelConfig& config) {
  return std::visit(
      [](const auto& c) {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, MlpConfig>) return ModelKind::kMlp;
        else if constexpr (std::is_same_v<T, AttentiveConfig>) return ModelKind::kAttentive;
        else return ModelKind::kSaint;
      },
      config);
}

namespace {

using nlohmann::ordered_json;

void reject_unknown(const ordered_json& j, const std::set<std::string>& known, const char* section) {
  if (!j.is_object()) throw ConfigError(std::string(section) + ": expected an object");
  for (const auto& [key, _] : j.items()) {
    if (!known.count(key)) throw ConfigError(std::string(section) + ": unknown key '" + key + "'");
  }
}

template <typename T>
void read(const ordered_json& j, const char* key, T& out, const char* section) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string(section) + "." + key + ": " + e.what());
  }
}

}  // namespace

void to_json(ordered_json& j, const MlpConfig& c) { j = ordered_json{{"hidden_sizes", c.hidden_sizes}}; }

void to_json(ordered_json& j, const AttentiveConfig& c) {
  j = ordered_json{{"head_hidden", c.head_hidden}, {"virtual_batch", c.virtual_batch}, {"bn_momentum", c.bn_momentum}};
}

void to_json(ordered_json& j, const SaintConfig& c) {
  j = ordered_json{{"embed_dim", c.embed_dim}, {"n_layers", c.n_layers},           {"n_heads", c.n_heads},
                   {"ff_multiplier", c.ff_multiplier}, {"dropout", c.dropout}, {"use_intersample", c.use_intersample}};
}

void to_json(ordered_json& j, const TrainConfig& c) {
  j = ordered_json{{"epochs", c.epochs}, {"batch_size", c.batch_size}, {"learning_rate", c.learning_rate}, {"seed", c.seed}};
}

void from_json(const ordered_json& j, MlpConfig& c) {
  reject_unknown(j, {"hidden_sizes"}, "mlp");
  read(j, "hidden_sizes", c.hidden_sizes, "mlp");
  c.validate();
}

void from_json(const ordered_json& j, AttentiveConfig& c) {
  reject_unknown(j, {"head_hidden", "virtual_batch", "bn_momentum"}, "attentive");
  read(j, "head_hidden", c.head_hidden, "attentive");
  read(j, "virtual_batch", c.virtual_batch, "attentive");
  read(j, "bn_momentum", c.bn_momentum, "attentive");
  c.validate();
}

void from_json(const ordered_json& j, SaintConfig& c) {
  reject_unknown(j, {"embed_dim", "n_layers", "n_heads", "ff_multiplier", "dropout", "use_intersample"}, "saint");
  read(j, "embed_dim", c.embed_dim, "saint");
  read(j, "n_layers", c.n_layers, "saint");
  read(j, "n_heads", c.n_heads, "saint");
  read(j, "ff_multiplier", c.ff_multiplier, "saint");
  read(j, "dropout", c.dropout, "saint");
  read(j, "use_intersample", c.use_intersample, "saint");
  c.validate();
}

void from_json(const ordered_json& j, TrainConfig& c) {
  reject_unknown(j, {"epochs", "batch_size", "learning_rate", "seed"}, "train");
  read(j, "epochs", c.epochs, "train");
  read(j, "batch_size", c.batch_size, "train");
  read(j, "learning_rate", c.learning_rate, "train");
  read(j, "seed", c.seed, "train");
  c.validate();
}

ordered_json model_config_json(const ModelConfig& config) {
  return std::visit([](const auto& c) { return ordered_json(c); }, config);
}

ModelConfig model_config_from_json(ModelKind kind, const ordered_json& j) {
  switch (kind) {
    case ModelKind::kMlp:
      return j.get<MlpConfig>();
    case ModelKind::kAttentive:
      return j.get<AttentiveConfig>();
    case ModelKind::kSaint:
      return j.get<SaintConfig>();
  }
  throw ConfigError("unknown model kind");
}

}  // namespace pdtab::nn
