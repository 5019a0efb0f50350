#pragma once

#include <memory>
#include <vector>

#include "pdtab/dataio/dataset.hpp"
#include "pdtab/nnmodels/model.hpp"

namespace pdtab::nn {

struct TrainedModel {
  ModelKind kind = ModelKind::kMlp;
  std::shared_ptr<NeuralModel> model;
  TrainConfig train_config;
  // Sample-weighted mean of the per-batch mean BCE, one entry per epoch,
  // measured in training mode before each step's update.
  std::vector<double> loss_curve;
};

// Mini-batch Adam on mean binary cross-entropy. Randomness comes from streams
// derived from train_config.seed: "init.<kind>", "batches.<kind>", "dropout.<kind>".
// Throws TrainingError (with the epoch) when the loss turns non-finite.
TrainedModel train(const ModelConfig& model_config, const TrainConfig& train_config, const data::Dataset& train_data);

// Inference-mode probabilities for every row of x, evaluated as one batch.
std::vector<double> predict_proba(const TrainedModel& model, const ad::Tensor& x);
std::vector<double> predict_proba(const NeuralModel& model, const ad::Tensor& x, ForwardTrace* trace = nullptr);

}  // namespace pdtab::nn
