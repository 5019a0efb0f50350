#include "pdtab/metrics/roc.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "pdtab/errors.hpp"

namespace pdtab::metrics {

namespace {

std::pair<std::size_t, std::size_t> class_counts(std::span<const int> y_true, std::span<const double> scores) {
  if (y_true.size() != scores.size()) {
    throw DimensionError("roc: " + std::to_string(y_true.size()) + " labels vs " + std::to_string(scores.size()) +
                         " scores");
  }
  std::size_t pos = 0, neg = 0;
  for (const int y : y_true) {
    if (y == 1) {
      ++pos;
    } else if (y == 0) {
      ++neg;
    } else {
      throw DataError("roc: non-binary label " + std::to_string(y));
    }
  }
  if (pos == 0 || neg == 0) throw DataError("roc: both classes must be present (AUC undefined)");
  return {pos, neg};
}

}  // namespace

RocCurve roc_curve(std::span<const int> y_true, std::span<const double> scores) {
  const auto [pos, neg] = class_counts(y_true, scores);
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  RocCurve roc;
  roc.points.push_back({0.0, 0.0, std::numeric_limits<double>::infinity()});
  std::size_t tp = 0, fp = 0;
  for (std::size_t i = 0; i < order.size();) {
    const double s = scores[order[i]];
    while (i < order.size() && scores[order[i]] == s) {
      (y_true[order[i]] == 1 ? tp : fp) += 1;
      ++i;
    }
    roc.points.push_back({static_cast<double>(fp) / static_cast<double>(neg),
                          static_cast<double>(tp) / static_cast<double>(pos), s});
  }
  for (std::size_t k = 1; k < roc.points.size(); ++k) {
    const auto& a = roc.points[k - 1];
    const auto& b = roc.points[k];
    roc.auc += (b.fpr - a.fpr) * (a.tpr + b.tpr) * 0.5;
  }
  return roc;
}

double mann_whitney_auc(std::span<const int> y_true, std::span<const double> scores) {
  const auto [pos, neg] = class_counts(y_true, scores);
  double wins = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (y_true[i] != 1) continue;
    for (std::size_t j = 0; j < scores.size(); ++j) {
      if (y_true[j] != 0) continue;
      if (scores[i] > scores[j]) {
        wins += 1.0;
      } else if (scores[i] == scores[j]) {
        wins += 0.5;
      }
    }
  }
  return wins / (static_cast<double>(pos) * static_cast<double>(neg));
}

}  // namespace pdtab::metrics
