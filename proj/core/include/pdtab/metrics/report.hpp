#pragma once

#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pdtab/metrics/classification.hpp"
#include "pdtab/metrics/roc.hpp"

namespace pdtab::metrics {

struct EvaluationReport {
  std::string model;
  double threshold = 0.5;
  ConfusionMatrix confusion;
  Ratio accuracy;
  Ratio sensitivity;
  Ratio specificity;
  Ratio precision;
  std::vector<PerClassMetrics> per_class;
  double weighted_precision = 0.0;
  double weighted_recall = 0.0;
  double weighted_f1 = 0.0;
  Ratio mcc;
  RocCurve roc;

  // Names of every metric that hit a 0/0 denominator, e.g. "sensitivity", "class0.precision".
  std::vector<std::string> degenerate_flags() const;
};

// Label metrics at `threshold`, ROC over the raw scores.
EvaluationReport full_report(std::span<const int> y_true, std::span<const double> scores,
                             double threshold = 0.5, std::string model = {});

// Label metrics only, for when just a confusion matrix is known. The ROC curve
// is left empty (auc 0).
EvaluationReport report_from_confusion(const ConfusionMatrix& cm, std::string model = {});

// Metrics rounded to 4 decimals, ROC coordinates to 6.
nlohmann::ordered_json report_to_json(const EvaluationReport& report);

// threshold,fpr,tpr with 6 decimals; the sentinel threshold prints as "inf".
std::string roc_csv(const RocCurve& roc);

// ,pred_0,pred_1 / true_0,tn,fp / true_1,fn,tp
std::string confusion_csv(const ConfusionMatrix& cm);

double round_to(double value, int decimals);

}  // namespace pdtab::metrics
