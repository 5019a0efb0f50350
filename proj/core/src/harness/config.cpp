#include "pdtab/harness/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "pdtab/boosting/checkpoint.hpp"
#include "pdtab/errors.hpp"

namespace pdtab::harness {

using nlohmann::ordered_json;

void ExperimentConfig::validate() const {
  if (models.empty()) throw ConfigError("models: at least one model must be requested");
  for (const auto& m : models)
    if (std::find(kAllModels.begin(), kAllModels.end(), m) == kAllModels.end())
      throw ConfigError("models: unknown model '" + m + "'");
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) throw ConfigError("test_fraction must lie in (0, 1)");
  mlp.validate();
  attentive.validate();
  saint.validate();
  gbm.validate();
  train.validate();
}

std::vector<std::string> parse_model_list(const std::string& csv) {
  std::set<std::string> wanted;
  std::size_t start = 0;
  while (start <= csv.size()) {
    const auto comma = csv.find(',', start);
    std::string item = csv.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (!item.empty()) {
      if (std::find(kAllModels.begin(), kAllModels.end(), item) == kAllModels.end()) {
        throw ConfigError("unknown model '" + item + "' (expected mlp, gbm, attentive or saint)");
      }
      wanted.insert(item);
    }
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  std::vector<std::string> out;
  for (const auto& m : kAllModels)
    if (wanted.count(m)) out.push_back(m);
  if (out.empty()) throw ConfigError("model list is empty");
  return out;
}

ExperimentConfig parse_experiment_config(const ordered_json& j, ExperimentConfig base) {
  if (!j.is_object()) throw ConfigError("config: top level must be an object");
  static const std::set<std::string> known{"seed", "test_fraction", "models", "train",
                                           "mlp",  "attentive",     "saint",  "gbm"};
  for (const auto& [key, _] : j.items())
    if (!known.count(key)) throw ConfigError("config: unknown key '" + key + "'");
  try {
    if (j.contains("seed")) base.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("test_fraction")) base.test_fraction = j.at("test_fraction").get<double>();
    if (j.contains("models")) {
      std::string joined;
      for (const auto& m : j.at("models")) joined += m.get<std::string>() + ",";
      base.models = parse_model_list(joined);
    }
    if (j.contains("train")) base.train = j.at("train").get<nn::TrainConfig>();
    if (j.contains("mlp")) base.mlp = j.at("mlp").get<nn::MlpConfig>();
    if (j.contains("attentive")) base.attentive = j.at("attentive").get<nn::AttentiveConfig>();
    if (j.contains("saint")) base.saint = j.at("saint").get<nn::SaintConfig>();
    if (j.contains("gbm")) base.gbm = j.at("gbm").get<boost::GbmConfig>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  base.validate();
  return base;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path, ExperimentConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  ordered_json j;
  try {
    j = ordered_json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return parse_experiment_config(j, std::move(base));
}

ordered_json experiment_config_json(const ExperimentConfig& c) {
  return ordered_json{{"seed", c.seed},   {"test_fraction", c.test_fraction}, {"models", c.models},
                      {"train", c.train}, {"mlp", c.mlp},                     {"attentive", c.attentive},
                      {"saint", c.saint}, {"gbm", c.gbm}};
}

}  // namespace pdtab::harness
