#pragma once

#include <span>
#include <vector>

namespace pdtab::metrics {

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;
  double threshold = 0.0;  // +inf for the leading (0,0) sentinel
};

struct RocCurve {
  std::vector<RocPoint> points;
  double auc = 0.0;
};

// One point per distinct score, swept from the highest score down, after a
// (0, 0) sentinel at threshold +inf. A sample is called positive when its
// score >= threshold, so the final point is (1, 1). AUC is the trapezoidal
// area, which with tied scores collapsed equals the tie-corrected
// Mann-Whitney statistic. Throws DataError unless both classes are present.
RocCurve roc_curve(std::span<const int> y_true, std::span<const double> scores);

// Brute-force pair count: P(score_pos > score_neg) + 0.5 P(tie).
double mann_whitney_auc(std::span<const int> y_true, std::span<const double> scores);

}  // namespace pdtab::metrics
