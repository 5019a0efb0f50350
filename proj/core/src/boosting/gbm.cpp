#include "pdtab/boosting/gbm.hpp"

#include <algorithm>

#include "pdtab/errors.hpp"

namespace pdtab::boost {

void GbmConfig::validate() const {
  if (n_stages < 1) throw ConfigError("gbm: n_stages must be >= 1");
  if (!(learning_rate > 0.0 && learning_rate <= 1.0)) throw ConfigError("gbm: learning_rate must lie in (0, 1]");
  if (max_depth < 0) throw ConfigError("gbm: max_depth must be >= 0");
  if (min_samples_leaf < 1) throw ConfigError("gbm: min_samples_leaf must be >= 1");
}

namespace {

double mse(std::span<const double> pred, std::span<const int> y) {
  double s = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double e = static_cast<double>(y[i]) - pred[i];
    s += e * e;
  }
  return s / static_cast<double>(y.size());
}

}  // namespace

GbmModel gbm_fit(const data::Dataset& train, const GbmConfig& config) {
  config.validate();
  train.validate();
  const std::size_t n = train.rows();
  if (n < 2) throw DataError("gbm_fit needs at least 2 rows");

  GbmModel model;
  model.config = config;
  model.n_features = train.features();
  double mean = 0.0;
  for (const int v : train.y) mean += v;
  model.initial_prediction = mean / static_cast<double>(n);

  std::vector<double> pred(n, model.initial_prediction);
  std::vector<double> residual(n);
  model.stage_mse.push_back(mse(pred, train.y));
  const TreeConfig tree_config{config.max_depth, config.min_samples_leaf};
  for (int m = 0; m < config.n_stages; ++m) {
    for (std::size_t i = 0; i < n; ++i) residual[i] = static_cast<double>(train.y[i]) - pred[i];
    RegressionTree tree = fit_tree(train.x, residual, tree_config);
    const std::vector<double> step = tree.predict(train.x);
    for (std::size_t i = 0; i < n; ++i) pred[i] += config.learning_rate * step[i];
    model.stage_mse.push_back(mse(pred, train.y));
    model.trees.push_back(std::move(tree));
  }
  return model;
}

std::vector<double> gbm_predict_raw(const GbmModel& model, const ad::Tensor& x) {
  if (x.rank() != 2 || x.cols() != model.n_features) {
    throw DimensionError("gbm_predict: model expects " + std::to_string(model.n_features) + " features, got " +
                         ad::shape_string(x.shape()));
  }
  std::vector<double> out(x.rows(), model.initial_prediction);
  for (const auto& tree : model.trees) {
    const std::vector<double> step = tree.predict(x);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += model.config.learning_rate * step[i];
  }
  return out;
}

std::vector<double> gbm_predict_proba(const GbmModel& model, const ad::Tensor& x) {
  std::vector<double> out = gbm_predict_raw(model, x);
  for (auto& v : out) v = std::clamp(v, 0.0, 1.0);
  return out;
}

}  // namespace pdtab::boost
