#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pdtab/boosting/gbm.hpp"
#include "pdtab/dataio/standardize.hpp"

namespace pdtab::boost {

// Versioned JSON: format, version, kind = "gbm", config, feature_names,
// standardization, initial_prediction, learning_rate, stage_mse and trees as
// parallel arrays {feature, threshold, left, right, value}.
nlohmann::ordered_json gbm_checkpoint_json(const GbmModel& model, const data::StandardizationStats& stats,
                                           const std::vector<std::string>& feature_names);

struct LoadedGbmCheckpoint {
  GbmModel model;
  data::StandardizationStats stats;
  std::vector<std::string> feature_names;
};

LoadedGbmCheckpoint gbm_checkpoint_from_json(const nlohmann::ordered_json& j);

void to_json(nlohmann::ordered_json& j, const GbmConfig& c);
void from_json(const nlohmann::ordered_json& j, GbmConfig& c);

}  // namespace pdtab::boost
