#include "pdtab/nnmodels/train.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "pdtab/autodiff/optim.hpp"
#include "pdtab/errors.hpp"

namespace pdtab::nn {

namespace {

ad::Tensor gather_rows(const ad::Tensor& x, std::span<const std::size_t> rows) {
  const std::size_t d = x.cols();
  ad::Tensor out(ad::Shape{rows.size(), d});
  for (std::size_t r = 0; r < rows.size(); ++r)
    std::copy_n(x.data().begin() + static_cast<std::ptrdiff_t>(rows[r] * d), d,
                out.data().begin() + static_cast<std::ptrdiff_t>(r * d));
  return out;
}

}  // namespace

TrainedModel train(const ModelConfig& model_config, const TrainConfig& train_config, const data::Dataset& train_data) {
  train_config.validate();
  train_data.validate();
  if (train_data.count_label(0) == 0 || train_data.count_label(1) == 0) {
    throw DataError("training data must contain both classes");
  }
  const ModelKind kind = kind_of(model_config);
  const std::string tag(to_string(kind));

  Rng init_rng(derive_seed(train_config.seed, "init." + tag));
  Rng batch_rng(derive_seed(train_config.seed, "batches." + tag));
  Rng dropout_rng(derive_seed(train_config.seed, "dropout." + tag));

  TrainedModel result;
  result.kind = kind;
  result.train_config = train_config;
  result.model = make_model(model_config, train_data.features(), init_rng);
  NeuralModel& model = *result.model;

  const std::size_t n = train_data.rows();
  const std::size_t batch = std::min(train_config.batch_size, n);
  ad::AdamState adam = ad::AdamState::for_parameters(model.parameters());
  const ad::AdamHyper hyper{train_config.learning_rate};

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (int epoch = 1; epoch <= train_config.epochs; ++epoch) {
    batch_rng.shuffle(order);
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < n; start += batch) {
      const std::size_t stop = std::min(n, start + batch);
      const std::span<const std::size_t> rows(order.data() + start, stop - start);
      ad::Tensor yb(ad::Shape{rows.size()});
      for (std::size_t r = 0; r < rows.size(); ++r) yb[r] = train_data.y[rows[r]];

      ForwardContext ctx{Mode::kTrain, &dropout_rng, nullptr, {}};
      const ad::Var probs = model.forward(ad::constant(gather_rows(train_data.x, rows)), ctx);
      const ad::Var loss = ad::scale(ad::binary_cross_entropy(probs, yb), 1.0 / static_cast<double>(rows.size()));
      const double value = loss.value()[0];
      if (!std::isfinite(value)) {
        throw TrainingError(tag + " training diverged (non-finite loss) in epoch " + std::to_string(epoch), epoch);
      }
      ad::backward(loss);
      ad::adam_step(model.parameters(), adam, hyper);
      model.absorb_batch_stats(ctx.batch_stats);
      epoch_loss += value * static_cast<double>(rows.size());
    }
    result.loss_curve.push_back(epoch_loss / static_cast<double>(n));
  }
  return result;
}

std::vector<double> predict_proba(const NeuralModel& model, const ad::Tensor& x, ForwardTrace* trace) {
  if (x.rank() != 2 || x.cols() != model.input_features()) {
    throw DimensionError("predict_proba: model expects " + std::to_string(model.input_features()) +
                         " features, got " + ad::shape_string(x.shape()));
  }
  ForwardContext ctx{Mode::kInference, nullptr, trace, {}};
  const ad::Var probs = model.forward(ad::constant(x), ctx);
  return probs.value().storage();
}

std::vector<double> predict_proba(const TrainedModel& model, const ad::Tensor& x) {
  return predict_proba(*model.model, x);
}

}  // namespace pdtab::nn
