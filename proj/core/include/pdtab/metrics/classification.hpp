#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace pdtab::metrics {

// Positive class is 1 (Parkinson's), negative is 0 (healthy).
struct ConfusionMatrix {
  std::size_t tp = 0;
  std::size_t tn = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;

  std::size_t total() const { return tp + tn + fp + fn; }
  // Relabel 0 <-> 1 in both truth and prediction.
  ConfusionMatrix swapped_classes() const { return {tn, tp, fn, fp}; }
  bool operator==(const ConfusionMatrix&) const = default;
};

// A rate whose denominator may vanish; 0/0 gives value 0 and degenerate = true.
struct Ratio {
  double value = 0.0;
  bool degenerate = false;
};

Ratio safe_ratio(double numerator, double denominator);

// Throws DimensionError on length mismatch and DataError on a non-binary label.
ConfusionMatrix confusion_matrix(std::span<const int> y_true, std::span<const int> y_pred);

struct BasicRates {
  Ratio accuracy;     // (tp + tn) / total
  Ratio sensitivity;  // tp / (tp + fn), recall of class 1
  Ratio specificity;  // tn / (tn + fp)
  Ratio precision;    // tp / (tp + fp)
};

BasicRates basic_rates(const ConfusionMatrix& cm);

struct PerClassMetrics {
  int class_label = 0;
  Ratio precision;
  Ratio recall;
  Ratio f1;
  std::size_t support = 0;
};

// Class 0 first, then class 1. F1 is the harmonic mean of the class's own precision and recall.
std::vector<PerClassMetrics> per_class_metrics(const ConfusionMatrix& cm);

enum class MetricSelector { kPrecision, kRecall, kF1 };

// Support-weighted mean: sum_i (n_i / N) * M_i.
double weighted_metric(std::span<const PerClassMetrics> per_class, MetricSelector selector);

// Matthews correlation coefficient. When any of the four marginal sums is
// zero the value is 0 and the result is flagged degenerate.
Ratio mcc(const ConfusionMatrix& cm);

// Labels from scores: 1 iff score >= threshold.
std::vector<int> threshold_labels(std::span<const double> scores, double threshold = 0.5);

}  // namespace pdtab::metrics
