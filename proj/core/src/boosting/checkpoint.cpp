#include "pdtab/boosting/checkpoint.hpp"

#include <set>

#include "pdtab/errors.hpp"
#include "pdtab/nnmodels/checkpoint.hpp"

namespace pdtab::boost {

using nlohmann::ordered_json;

void to_json(ordered_json& j, const GbmConfig& c) {
  j = ordered_json{{"n_stages", c.n_stages},
                   {"learning_rate", c.learning_rate},
                   {"max_depth", c.max_depth},
                   {"min_samples_leaf", c.min_samples_leaf}};
}

void from_json(const ordered_json& j, GbmConfig& c) {
  if (!j.is_object()) throw ConfigError("gbm: expected an object");
  static const std::set<std::string> known{"n_stages", "learning_rate", "max_depth", "min_samples_leaf"};
  for (const auto& [key, _] : j.items())
    if (!known.count(key)) throw ConfigError("gbm: unknown key '" + key + "'");
  try {
    if (j.contains("n_stages")) c.n_stages = j.at("n_stages").get<int>();
    if (j.contains("learning_rate")) c.learning_rate = j.at("learning_rate").get<double>();
    if (j.contains("max_depth")) c.max_depth = j.at("max_depth").get<int>();
    if (j.contains("min_samples_leaf")) c.min_samples_leaf = j.at("min_samples_leaf").get<std::size_t>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("gbm: ") + e.what());
  }
  c.validate();
}

ordered_json gbm_checkpoint_json(const GbmModel& model, const data::StandardizationStats& stats,
                                 const std::vector<std::string>& feature_names) {
  ordered_json j;
  j["format"] = nn::kCheckpointFormat;
  j["version"] = nn::kCheckpointVersion;
  j["kind"] = "gbm";
  j["config"] = model.config;
  j["feature_names"] = feature_names;
  j["standardization"] = {{"mean", stats.mean}, {"std", stats.std}};
  j["initial_prediction"] = model.initial_prediction;
  j["learning_rate"] = model.config.learning_rate;
  j["stage_mse"] = model.stage_mse;
  ordered_json trees = ordered_json::array();
  for (const auto& tree : model.trees) {
    std::vector<int> feature, left, right;
    std::vector<double> threshold, value;
    for (const auto& n : tree.nodes()) {
      feature.push_back(n.feature);
      threshold.push_back(n.threshold);
      left.push_back(n.left);
      right.push_back(n.right);
      value.push_back(n.value);
    }
    trees.push_back({{"max_depth", tree.max_depth()},
                     {"feature", feature},
                     {"threshold", threshold},
                     {"left", left},
                     {"right", right},
                     {"value", value}});
  }
  j["trees"] = std::move(trees);
  return j;
}

LoadedGbmCheckpoint gbm_checkpoint_from_json(const ordered_json& j) {
  try {
    if (j.at("format").get<std::string>() != nn::kCheckpointFormat) throw CheckpointError("not a pdtab checkpoint");
    if (j.at("version").get<int>() != nn::kCheckpointVersion) throw CheckpointError("unsupported checkpoint version");
    if (j.at("kind").get<std::string>() != "gbm") throw CheckpointError("checkpoint is not a gbm model");
    LoadedGbmCheckpoint out;
    out.model.config = j.at("config").get<GbmConfig>();
    out.feature_names = j.at("feature_names").get<std::vector<std::string>>();
    out.stats.mean = j.at("standardization").at("mean").get<std::vector<double>>();
    out.stats.std = j.at("standardization").at("std").get<std::vector<double>>();
    out.model.n_features = out.feature_names.size();
    out.model.initial_prediction = j.at("initial_prediction").get<double>();
    out.model.config.learning_rate = j.at("learning_rate").get<double>();
    out.model.stage_mse = j.at("stage_mse").get<std::vector<double>>();
    for (const auto& t : j.at("trees")) {
      const auto feature = t.at("feature").get<std::vector<int>>();
      const auto threshold = t.at("threshold").get<std::vector<double>>();
      const auto left = t.at("left").get<std::vector<int>>();
      const auto right = t.at("right").get<std::vector<int>>();
      const auto value = t.at("value").get<std::vector<double>>();
      const std::size_t count = feature.size();
      if (threshold.size() != count || left.size() != count || right.size() != count || value.size() != count) {
        throw CheckpointError("tree arrays have different lengths");
      }
      std::vector<TreeNode> nodes(count);
      for (std::size_t i = 0; i < count; ++i) {
        nodes[i] = TreeNode{feature[i], threshold[i], left[i], right[i], value[i]};
        if (feature[i] >= 0) {
          const auto in_range = [&](int c) { return c > static_cast<int>(i) && c < static_cast<int>(count); };
          if (!in_range(left[i]) || !in_range(right[i]) ||
              feature[i] >= static_cast<int>(out.model.n_features)) {
            throw CheckpointError("tree node " + std::to_string(i) + " has invalid links");
          }
        }
      }
      out.model.trees.emplace_back(std::move(nodes), t.at("max_depth").get<int>());
    }
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw CheckpointError(std::string("malformed gbm checkpoint: ") + e.what());
  } catch (const ConfigError& e) {
    throw CheckpointError(std::string("gbm checkpoint config: ") + e.what());
  }
}

}  // namespace pdtab::boost
