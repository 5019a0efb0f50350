#include "pdtab/nnmodels/checkpoint.hpp"

#include <map>

#include "pdtab/errors.hpp"

namespace pdtab::nn {

using nlohmann::ordered_json;

ordered_json tensor_json(const std::string& name, const ad::Tensor& t) {
  return ordered_json{{"name", name}, {"shape", t.shape()}, {"data", t.storage()}};
}

ad::Tensor tensor_from_json(const ordered_json& j) {
  try {
    return ad::Tensor(j.at("shape").get<ad::Shape>(), j.at("data").get<std::vector<double>>());
  } catch (const nlohmann::json::exception& e) {
    throw CheckpointError(std::string("malformed tensor payload: ") + e.what());
  } catch (const DimensionError& e) {
    throw CheckpointError(e.what());
  }
}

ordered_json checkpoint_json(const TrainedModel& model, const data::StandardizationStats& stats,
                             const std::vector<std::string>& feature_names) {
  ordered_json j;
  j["format"] = kCheckpointFormat;
  j["version"] = kCheckpointVersion;
  j["kind"] = std::string(to_string(model.kind));
  j["config"] = model_config_json(model.model->config());
  j["train_config"] = model.train_config;
  j["feature_names"] = feature_names;
  j["standardization"] = {{"mean", stats.mean}, {"std", stats.std}};
  ordered_json params = ordered_json::array();
  for (const auto& p : model.model->parameters()) params.push_back(tensor_json(p.name, p.var.value()));
  j["parameters"] = std::move(params);
  ordered_json buffers = ordered_json::array();
  for (const auto& b : model.model->buffers()) buffers.push_back(tensor_json(b.name, b.value));
  j["buffers"] = std::move(buffers);
  j["loss_curve"] = model.loss_curve;
  return j;
}

LoadedNeuralCheckpoint neural_checkpoint_from_json(const ordered_json& j) {
  try {
    if (j.at("format").get<std::string>() != kCheckpointFormat) throw CheckpointError("not a pdtab checkpoint");
    if (j.at("version").get<int>() != kCheckpointVersion) {
      throw CheckpointError("unsupported checkpoint version " + j.at("version").dump());
    }
    LoadedNeuralCheckpoint out;
    const ModelKind kind = parse_model_kind(j.at("kind").get<std::string>());
    const ModelConfig config = model_config_from_json(kind, j.at("config"));
    out.feature_names = j.at("feature_names").get<std::vector<std::string>>();
    out.stats.mean = j.at("standardization").at("mean").get<std::vector<double>>();
    out.stats.std = j.at("standardization").at("std").get<std::vector<double>>();
    if (out.stats.mean.size() != out.feature_names.size() || out.stats.std.size() != out.feature_names.size()) {
      throw CheckpointError("standardization stats do not match the feature list");
    }

    Rng unused(0);
    out.model.kind = kind;
    out.model.train_config = j.at("train_config").get<TrainConfig>();
    out.model.model = make_model(config, out.feature_names.size(), unused);
    out.model.loss_curve = j.at("loss_curve").get<std::vector<double>>();

    std::map<std::string, ad::Tensor> stored;
    for (const auto& p : j.at("parameters")) stored.emplace(p.at("name").get<std::string>(), tensor_from_json(p));
    auto& params = out.model.model->parameters();
    if (stored.size() != params.size()) {
      throw CheckpointError("checkpoint has " + std::to_string(stored.size()) + " parameters, model expects " +
                            std::to_string(params.size()));
    }
    for (auto& p : params) {
      const auto it = stored.find(p.name);
      if (it == stored.end()) throw CheckpointError("checkpoint lacks parameter '" + p.name + "'");
      if (it->second.shape() != p.var.value().shape()) {
        throw CheckpointError("parameter '" + p.name + "' has shape " + ad::shape_string(it->second.shape()) +
                              ", expected " + ad::shape_string(p.var.value().shape()));
      }
      p.var.mutable_value() = it->second;
    }
    for (const auto& b : j.at("buffers")) {
      out.model.model->set_buffer(b.at("name").get<std::string>(), tensor_from_json(b));
    }
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw CheckpointError(std::string("malformed checkpoint: ") + e.what());
  } catch (const ConfigError& e) {
    throw CheckpointError(std::string("checkpoint config: ") + e.what());
  }
}

}  // namespace pdtab::nn
