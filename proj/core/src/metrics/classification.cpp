#include "pdtab/metrics/classification.hpp"

#include <cmath>

#include "pdtab/errors.hpp"

namespace pdtab::metrics {

Ratio safe_ratio(double numerator, double denominator) {
  if (denominator == 0.0) return {0.0, true};
  return {numerator / denominator, false};
}

ConfusionMatrix confusion_matrix(std::span<const int> y_true, std::span<const int> y_pred) {
  if (y_true.size() != y_pred.size()) {
    throw DimensionError("confusion_matrix: " + std::to_string(y_true.size()) + " labels vs " +
                         std::to_string(y_pred.size()) + " predictions");
  }
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    const int t = y_true[i], p = y_pred[i];
    if ((t != 0 && t != 1) || (p != 0 && p != 1)) {
      throw DataError("confusion_matrix: non-binary label at position " + std::to_string(i));
    }
    if (t == 1) {
      (p == 1 ? cm.tp : cm.fn) += 1;
    } else {
      (p == 1 ? cm.fp : cm.tn) += 1;
    }
  }
  return cm;
}

BasicRates basic_rates(const ConfusionMatrix& cm) {
  const auto tp = static_cast<double>(cm.tp), tn = static_cast<double>(cm.tn);
  const auto fp = static_cast<double>(cm.fp), fn = static_cast<double>(cm.fn);
  return BasicRates{
      safe_ratio(tp + tn, tp + tn + fp + fn),
      safe_ratio(tp, tp + fn),
      safe_ratio(tn, tn + fp),
      safe_ratio(tp, tp + fp),
  };
}

namespace {

PerClassMetrics class_metrics(int label, double hits, double false_alarms, double misses) {
  PerClassMetrics m;
  m.class_label = label;
  m.precision = safe_ratio(hits, hits + false_alarms);
  m.recall = safe_ratio(hits, hits + misses);
  m.f1 = safe_ratio(2.0 * m.precision.value * m.recall.value, m.precision.value + m.recall.value);
  m.support = static_cast<std::size_t>(hits + misses);
  return m;
}

}  // namespace

std::vector<PerClassMetrics> per_class_metrics(const ConfusionMatrix& cm) {
  const auto tp = static_cast<double>(cm.tp), tn = static_cast<double>(cm.tn);
  const auto fp = static_cast<double>(cm.fp), fn = static_cast<double>(cm.fn);
  return {class_metrics(0, tn, fn, fp), class_metrics(1, tp, fp, fn)};
}

double weighted_metric(std::span<const PerClassMetrics> per_class, MetricSelector selector) {
  double total = 0.0, acc = 0.0;
  for (const auto& m : per_class) {
    const double w = static_cast<double>(m.support);
    const Ratio& r = selector == MetricSelector::kPrecision ? m.precision
                     : selector == MetricSelector::kRecall  ? m.recall
                                                            : m.f1;
    acc += w * r.value;
    total += w;
  }
  if (total == 0.0) throw DataError("weighted_metric: classes have no support");
  return acc / total;
}

Ratio mcc(const ConfusionMatrix& cm) {
  const auto tp = static_cast<double>(cm.tp), tn = static_cast<double>(cm.tn);
  const auto fp = static_cast<double>(cm.fp), fn = static_cast<double>(cm.fn);
  const double a = tp + fp, b = tp + fn, c = tn + fp, d = tn + fn;
  if (a == 0.0 || b == 0.0 || c == 0.0 || d == 0.0) return {0.0, true};
  return {(tp * tn - fp * fn) / std::sqrt(a * b * c * d), false};
}

std::vector<int> threshold_labels(std::span<const double> scores, double threshold) {
  std::vector<int> labels(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) labels[i] = scores[i] >= threshold ? 1 : 0;
  return labels;
}

}  // namespace pdtab::metrics
