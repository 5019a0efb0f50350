#include "pdtab/metrics/report.hpp"

#include <cmath>
#include <cstdio>

namespace pdtab::metrics {

double round_to(double value, int decimals) {
  const double scale = std::pow(10.0, decimals);
  const double r = std::round(value * scale) / scale;
  return r == 0.0 ? 0.0 : r;  // no negative zero in emitted files
}

std::vector<std::string> EvaluationReport::degenerate_flags() const {
  std::vector<std::string> flags;
  auto note = [&](const Ratio& r, const std::string& name) {
    if (r.degenerate) flags.push_back(name);
  };
  note(accuracy, "accuracy");
  note(sensitivity, "sensitivity");
  note(specificity, "specificity");
  note(precision, "precision");
  for (const auto& c : per_class) {
    const std::string prefix = "class" + std::to_string(c.class_label) + ".";
    note(c.precision, prefix + "precision");
    note(c.recall, prefix + "recall");
    note(c.f1, prefix + "f1");
  }
  note(mcc, "mcc");
  return flags;
}

EvaluationReport report_from_confusion(const ConfusionMatrix& cm, std::string model) {
  EvaluationReport r;
  r.model = std::move(model);
  r.confusion = cm;
  const BasicRates rates = basic_rates(cm);
  r.accuracy = rates.accuracy;
  r.sensitivity = rates.sensitivity;
  r.specificity = rates.specificity;
  r.precision = rates.precision;
  r.per_class = per_class_metrics(cm);
  r.weighted_precision = weighted_metric(r.per_class, MetricSelector::kPrecision);
  r.weighted_recall = weighted_metric(r.per_class, MetricSelector::kRecall);
  r.weighted_f1 = weighted_metric(r.per_class, MetricSelector::kF1);
  r.mcc = metrics::mcc(cm);
  return r;
}

EvaluationReport full_report(std::span<const int> y_true, std::span<const double> scores, double threshold,
                             std::string model) {
  const auto labels = threshold_labels(scores, threshold);
  EvaluationReport r = report_from_confusion(confusion_matrix(y_true, labels), std::move(model));
  r.threshold = threshold;
  r.roc = roc_curve(y_true, scores);
  return r;
}

nlohmann::ordered_json report_to_json(const EvaluationReport& r) {
  using nlohmann::ordered_json;
  auto m4 = [](double v) { return round_to(v, 4); };
  ordered_json j;
  j["model"] = r.model;
  j["threshold"] = r.threshold;
  j["confusion_matrix"] = {{"tp", r.confusion.tp}, {"tn", r.confusion.tn}, {"fp", r.confusion.fp},
                           {"fn", r.confusion.fn}};
  j["accuracy"] = m4(r.accuracy.value);
  j["sensitivity"] = m4(r.sensitivity.value);
  j["specificity"] = m4(r.specificity.value);
  j["precision"] = m4(r.precision.value);
  ordered_json classes = ordered_json::array();
  for (const auto& c : r.per_class) {
    classes.push_back({{"class", c.class_label},
                       {"precision", m4(c.precision.value)},
                       {"recall", m4(c.recall.value)},
                       {"f1", m4(c.f1.value)},
                       {"support", c.support}});
  }
  j["per_class"] = classes;
  j["weighted"] = {{"precision", m4(r.weighted_precision)},
                   {"recall", m4(r.weighted_recall)},
                   {"f1", m4(r.weighted_f1)}};
  j["mcc"] = m4(r.mcc.value);
  ordered_json points = ordered_json::array();
  for (const auto& p : r.roc.points) {
    ordered_json threshold = std::isinf(p.threshold) ? ordered_json("inf") : ordered_json(round_to(p.threshold, 6));
    points.push_back({{"threshold", threshold}, {"fpr", round_to(p.fpr, 6)}, {"tpr", round_to(p.tpr, 6)}});
  }
  j["roc"] = {{"auc", m4(r.roc.auc)}, {"points", points}};
  j["degenerate"] = r.degenerate_flags();
  return j;
}

namespace {

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", round_to(v, 6));
  return buf;
}

}  // namespace

std::string roc_csv(const RocCurve& roc) {
  std::string out = "threshold,fpr,tpr\n";
  for (const auto& p : roc.points) {
    out += (std::isinf(p.threshold) ? std::string("inf") : fixed6(p.threshold)) + "," + fixed6(p.fpr) + "," +
           fixed6(p.tpr) + "\n";
  }
  return out;
}

std::string confusion_csv(const ConfusionMatrix& cm) {
  return ",pred_0,pred_1\ntrue_0," + std::to_string(cm.tn) + "," + std::to_string(cm.fp) + "\ntrue_1," +
         std::to_string(cm.fn) + "," + std::to_string(cm.tp) + "\n";
}

}  // namespace pdtab::metrics
