#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pdtab/dataio/standardize.hpp"
#include "pdtab/nnmodels/train.hpp"

namespace pdtab::nn {

inline constexpr const char* kCheckpointFormat = "pdtab.checkpoint";
inline constexpr int kCheckpointVersion = 1;

// Self-describing JSON document:
//   format, version, kind, config, train_config, feature_names,
//   standardization {mean, std}, parameters [{name, shape, data}],
//   buffers [{name, shape, data}], loss_curve
// Doubles are written with 17 significant digits, so values reload bit-exactly.
nlohmann::ordered_json checkpoint_json(const TrainedModel& model, const data::StandardizationStats& stats,
                                       const std::vector<std::string>& feature_names);

struct LoadedNeuralCheckpoint {
  TrainedModel model;
  data::StandardizationStats stats;
  std::vector<std::string> feature_names;
};

// Throws CheckpointError on a wrong format tag, version, or parameter shape.
LoadedNeuralCheckpoint neural_checkpoint_from_json(const nlohmann::ordered_json& j);

// Shared helpers for tensor payloads.
nlohmann::ordered_json tensor_json(const std::string& name, const ad::Tensor& t);
ad::Tensor tensor_from_json(const nlohmann::ordered_json& j);

}  // namespace pdtab::nn
