#include <cmath>
#include <vector>

#include "doctest.h"
#include "pdtab/errors.hpp"
#include "pdtab/metrics/classification.hpp"
#include "pdtab/metrics/report.hpp"
#include "pdtab/metrics/roc.hpp"
#include "pdtab/random.hpp"
#include "oracles.hpp"

using namespace pdtab;
using namespace pdtab::metrics;

namespace {

// Exact rational values of the published confusion matrices, evaluated in
// double precision by an independent fraction-arithmetic script.
struct PublishedCase {
  const char* model;
  ConfusionMatrix cm;
  double accuracy;
  double weighted_precision;
  double weighted_f1;
  double mcc;
};

const PublishedCase kPublished[] = {
    {"saint", {28, 10, 0, 1}, 0.97435897435897434, 0.9766899766899767, 0.97474455369192214, 0.93687936614511047},
    {"attentive", {27, 10, 0, 2}, 0.94871794871794868, 0.95726495726495731, 0.95013320013320013, 0.88083032927205518},
    {"mlp", {28, 9, 1, 1}, 0.94871794871794868, 0.94871794871794868, 0.94871794871794868, 0.8655172413793103},
    {"gbm", {27, 8, 2, 2}, 0.89743589743589747, 0.89743589743589747, 0.89743589743589747, 0.73103448275862071},
};

std::vector<int> truth_of(const ConfusionMatrix& cm) {
  std::vector<int> y;
  y.insert(y.end(), cm.tp + cm.fn, 1);
  y.insert(y.end(), cm.tn + cm.fp, 0);
  return y;
}

std::vector<int> prediction_of(const ConfusionMatrix& cm) {
  std::vector<int> p;
  p.insert(p.end(), cm.tp, 1);
  p.insert(p.end(), cm.fn, 0);
  p.insert(p.end(), cm.tn, 0);
  p.insert(p.end(), cm.fp, 1);
  return p;
}

}  // namespace

TEST_CASE("confusion matrix") {
  const std::vector<int> y{1, 0};
  CHECK(confusion_matrix(y, y) == ConfusionMatrix{1, 1, 0, 0});
  for (const auto& c : kPublished) CHECK(confusion_matrix(truth_of(c.cm), prediction_of(c.cm)) == c.cm);
  const std::vector<int> short_pred{1};
  CHECK_THROWS_AS(confusion_matrix(y, short_pred), DimensionError);
  const std::vector<int> bad{1, 2};
  CHECK_THROWS_AS(confusion_matrix(y, bad), DataError);
}

TEST_CASE("basic rates") {
  const auto saint = basic_rates({28, 10, 0, 1});
  CHECK(saint.accuracy.value == doctest::Approx(38.0 / 39.0).epsilon(1e-15));
  CHECK(saint.sensitivity.value == doctest::Approx(28.0 / 29.0).epsilon(1e-15));
  CHECK(saint.specificity.value == 1.0);
  CHECK(saint.precision.value == 1.0);

  const auto perfect = basic_rates({5, 7, 0, 0});
  CHECK(perfect.accuracy.value == 1.0);
  CHECK(perfect.sensitivity.value == 1.0);
  CHECK(perfect.specificity.value == 1.0);
  CHECK(perfect.precision.value == 1.0);

  const auto negatives_only = basic_rates({0, 5, 0, 0});
  CHECK(negatives_only.sensitivity.value == 0.0);
  CHECK(negatives_only.sensitivity.degenerate);
  CHECK(negatives_only.precision.degenerate);
  CHECK_FALSE(negatives_only.specificity.degenerate);
}

TEST_CASE("per-class and weighted metrics reproduce the published figures") {
  for (const auto& c : kPublished) {
    CAPTURE(c.model);
    const auto per_class = per_class_metrics(c.cm);
    REQUIRE(per_class.size() == 2);
    CHECK(per_class[0].class_label == 0);
    CHECK(per_class[1].support == c.cm.tp + c.cm.fn);
    for (const auto& m : per_class) {
      const double p = m.precision.value, r = m.recall.value;
      CHECK(m.f1.value == doctest::Approx(2 * p * r / (p + r)).epsilon(1e-15));
    }
    const double wp = weighted_metric(per_class, MetricSelector::kPrecision);
    const double wr = weighted_metric(per_class, MetricSelector::kRecall);
    const double wf = weighted_metric(per_class, MetricSelector::kF1);
    CHECK(std::abs(wp - c.weighted_precision) <= 1e-12);
    CHECK(std::abs(wf - c.weighted_f1) <= 1e-12);
    CHECK(wr == basic_rates(c.cm).accuracy.value);
    CHECK(std::abs(mcc(c.cm).value - c.mcc) <= 1e-12);
  }
  CHECK(round_to(mcc({28, 10, 0, 1}).value, 4) == 0.9369);
  CHECK(round_to(mcc({27, 10, 0, 2}).value, 4) == 0.8808);
  CHECK(round_to(mcc({28, 9, 1, 1}).value, 4) == 0.8655);
  CHECK(round_to(mcc({27, 8, 2, 2}).value, 4) == 0.7310);

  const std::vector<PerClassMetrics> equal{{0, {0.8, false}, {0.8, false}, {0.8, false}, 3},
                                           {1, {0.8, false}, {0.8, false}, {0.8, false}, 11}};
  CHECK(weighted_metric(equal, MetricSelector::kPrecision) == doctest::Approx(0.8).epsilon(1e-15));
}

TEST_CASE("weighted recall equals accuracy for random confusion matrices") {
  Rng rng(31);
  for (int trial = 0; trial < 500; ++trial) {
    const ConfusionMatrix cm{rng.below(60), rng.below(60), rng.below(60), rng.below(60)};
    if (cm.total() == 0) continue;
    const auto per_class = per_class_metrics(cm);
    CHECK(std::abs(weighted_metric(per_class, MetricSelector::kRecall) - basic_rates(cm).accuracy.value) <= 1e-15);
  }
}

TEST_CASE("mcc endpoints, symmetry and degeneracy") {
  CHECK(mcc({10, 5, 0, 0}).value == 1.0);
  CHECK(mcc({0, 0, 5, 10}).value == -1.0);
  const auto flat = mcc({4, 0, 6, 0});
  CHECK(flat.value == 0.0);
  CHECK(flat.degenerate);
  Rng rng(32);
  for (int trial = 0; trial < 200; ++trial) {
    const ConfusionMatrix cm{1 + rng.below(40), 1 + rng.below(40), 1 + rng.below(40), 1 + rng.below(40)};
    CHECK(mcc(cm).value == doctest::Approx(mcc(cm.swapped_classes()).value).epsilon(1e-15));
  }
}

TEST_CASE("roc curve examples") {
  const std::vector<double> s{0.9, 0.8, 0.2, 0.1};
  const std::vector<int> separated{1, 1, 0, 0};
  const std::vector<int> mixed{1, 0, 1, 0};
  CHECK(roc_curve(separated, s).auc == 1.0);
  CHECK(roc_curve(mixed, s).auc == 0.75);
  CHECK(mann_whitney_auc(mixed, s) == 0.75);

  const std::vector<double> flat(6, 0.4);
  const std::vector<int> labels{1, 0, 1, 1, 0, 0};
  const auto curve = roc_curve(labels, flat);
  CHECK(curve.auc == 0.5);
  REQUIRE(curve.points.size() == 2);
  CHECK(std::isinf(curve.points[0].threshold));
  CHECK(curve.points[1].fpr == 1.0);
  CHECK(curve.points[1].tpr == 1.0);

  const std::vector<int> one_class{1, 1, 1, 1};
  CHECK_THROWS_AS(roc_curve(one_class, s), DataError);
}

TEST_CASE("trapezoidal auc matches the brute-force pair count") {
  Rng rng(33);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + rng.below(199);
    std::vector<int> y(n);
    std::vector<double> scores(n);
    for (std::size_t i = 0; i < n; ++i) {
      y[i] = static_cast<int>(rng.below(2));
      scores[i] = std::round(rng.uniform() * 20.0) / 20.0;
    }
    y[0] = 0;
    y[1] = 1;
    const auto curve = roc_curve(y, scores);
    CHECK(std::abs(curve.auc - mann_whitney_auc(y, scores)) <= 1e-9);
    CHECK(std::abs(curve.auc - pdtab::testing::pair_count_auc(y, scores)) <= 1e-9);
    CHECK(curve.points.front().fpr == 0.0);
    CHECK(curve.points.front().tpr == 0.0);
    CHECK(curve.points.back().fpr == 1.0);
    CHECK(curve.points.back().tpr == 1.0);
    for (std::size_t i = 1; i < curve.points.size(); ++i) {
      CHECK(curve.points[i].fpr >= curve.points[i - 1].fpr);
      CHECK(curve.points[i].tpr >= curve.points[i - 1].tpr);
      CHECK(curve.points[i].threshold < curve.points[i - 1].threshold);
    }
  }
}

TEST_CASE("full report") {
  const auto& saint = kPublished[0];
  const auto y = truth_of(saint.cm);
  const auto pred = prediction_of(saint.cm);
  std::vector<double> scores;
  for (const int p : pred) scores.push_back(p == 1 ? 0.8 : 0.2);
  const auto report = full_report(y, scores, 0.5, "saint");
  CHECK(report.confusion == saint.cm);
  CHECK(round_to(report.weighted_precision, 2) == 0.98);
  CHECK(round_to(report.weighted_recall, 2) == 0.97);
  CHECK(round_to(report.weighted_f1, 2) == 0.97);
  CHECK(round_to(report.mcc.value, 4) == 0.9369);
  CHECK(report.degenerate_flags().empty());

  CHECK(threshold_labels(std::vector<double>{0.5, 0.4999, 1.0}) == std::vector<int>{1, 0, 1});

  const auto json = report_to_json(report);
  CHECK(json.at("model") == "saint");
  CHECK(json.at("confusion_matrix").at("tp") == 28);
  CHECK(json.at("mcc") == 0.9369);
  CHECK(json.at("roc").at("points").front().at("threshold") == "inf");

  const auto mlp = report_from_confusion(kPublished[2].cm, "mlp");
  CHECK(round_to(mlp.mcc.value, 4) == 0.8655);
  const auto tabnet = report_from_confusion(kPublished[1].cm, "attentive");
  CHECK(round_to(tabnet.mcc.value, 4) == 0.8808);
  CHECK(std::abs(tabnet.weighted_precision - 0.96) <= 0.005);

  const auto degenerate = report_from_confusion({0, 5, 0, 0}, "x");
  const auto flags = degenerate.degenerate_flags();
  CHECK(std::find(flags.begin(), flags.end(), "sensitivity") != flags.end());
  CHECK(std::find(flags.begin(), flags.end(), "mcc") != flags.end());
}

TEST_CASE("csv emitters") {
  CHECK(confusion_csv({28, 10, 0, 1}) == ",pred_0,pred_1\ntrue_0,10,0\ntrue_1,1,28\n");
  const std::vector<int> y{1, 0};
  const std::vector<double> s{0.75, 0.25};
  CHECK(roc_csv(roc_curve(y, s)) ==
        "threshold,fpr,tpr\ninf,0.000000,0.000000\n0.750000,0.000000,1.000000\n0.250000,1.000000,1.000000\n");
}
