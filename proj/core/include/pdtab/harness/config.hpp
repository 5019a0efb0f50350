#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pdtab/boosting/gbm.hpp"
#include "pdtab/nnmodels/config.hpp"

namespace pdtab::harness {

// The four model names accepted by --models, in canonical run order.
inline const std::vector<std::string> kAllModels{"mlp", "gbm", "attentive", "saint"};

struct ExperimentConfig {
  std::filesystem::path data_path;
  std::filesystem::path output_dir;
  std::uint64_t seed = 42;
  double test_fraction = 0.2;
  nn::MlpConfig mlp;
  nn::AttentiveConfig attentive;
  nn::SaintConfig saint;
  boost::GbmConfig gbm;
  nn::TrainConfig train;
  std::vector<std::string> models = kAllModels;

  // Throws ConfigError on an empty or unknown model list or bad sub-configs.
  void validate() const;
};

// Config file layout (every key optional, defaults as above):
// {
//   "seed": 42, "test_fraction": 0.2, "models": ["mlp", "gbm", "attentive", "saint"],
//   "train": {...}, "mlp": {...}, "attentive": {...}, "saint": {...}, "gbm": {...}
// }
// Paths are not part of the file; they come from the command line.
ExperimentConfig parse_experiment_config(const nlohmann::ordered_json& j, ExperimentConfig base = {});
ExperimentConfig load_experiment_config(const std::filesystem::path& path, ExperimentConfig base = {});
nlohmann::ordered_json experiment_config_json(const ExperimentConfig& config);

// "mlp,saint" -> {"mlp", "saint"}, validated and deduplicated, canonical order.
std::vector<std::string> parse_model_list(const std::string& csv);

}  // namespace pdtab::harness
