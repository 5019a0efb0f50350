#pragma once

#include <cstddef>
#include <vector>

#include "pdtab/boosting/tree.hpp"
#include "pdtab/dataio/dataset.hpp"

namespace pdtab::boost {

struct GbmConfig {
  int n_stages = 100;
  double learning_rate = 0.1;
  int max_depth = 3;
  std::size_t min_samples_leaf = 2;

  void validate() const;
};

// Squared-error boosting on 0/1 labels: F(x) = F0 + eta * sum_m f_m(x).
struct GbmModel {
  double initial_prediction = 0.0;  // mean training label
  std::vector<RegressionTree> trees;
  GbmConfig config;
  std::size_t n_features = 0;
  // Training MSE after F0 (index 0) and after each stage (index m).
  std::vector<double> stage_mse;
};

GbmModel gbm_fit(const data::Dataset& train, const GbmConfig& config);

std::vector<double> gbm_predict_raw(const GbmModel& model, const ad::Tensor& x);
// Raw scores clamped to [0, 1].
std::vector<double> gbm_predict_proba(const GbmModel& model, const ad::Tensor& x);

}  // namespace pdtab::boost
