#include "pdtab/dataio/standardize.hpp"

#include <algorithm>
#include <cmath>

#include "pdtab/errors.hpp"

namespace pdtab::data {

StandardizationStats standardize_fit(const Dataset& train) {
  const std::size_t n = train.rows(), d = train.features();
  if (n < 2) throw DataError("standardize_fit needs at least 2 rows, got " + std::to_string(n));
  StandardizationStats stats{std::vector<double>(d, 0.0), std::vector<double>(d, 0.0)};
  for (std::size_t j = 0; j < d; ++j) {
    double mu = 0.0;
    for (std::size_t i = 0; i < n; ++i) mu += train.x.at(i, j);
    mu /= static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) ss += (train.x.at(i, j) - mu) * (train.x.at(i, j) - mu);
    stats.mean[j] = mu;
    stats.std[j] = std::max(std::sqrt(ss / static_cast<double>(n)), kStdFloor);
  }
  return stats;
}

namespace {

void check_width(const Dataset& data, const StandardizationStats& stats) {
  if (stats.mean.size() != data.features() || stats.std.size() != data.features()) {
    throw DimensionError("standardization stats cover " + std::to_string(stats.mean.size()) +
                         " features, data has " + std::to_string(data.features()));
  }
}

}  // namespace

Dataset standardize_apply(const Dataset& data, const StandardizationStats& stats) {
  check_width(data, stats);
  Dataset out = data;
  const std::size_t d = data.features();
  for (std::size_t i = 0; i < data.rows(); ++i)
    for (std::size_t j = 0; j < d; ++j) out.x.at(i, j) = (data.x.at(i, j) - stats.mean[j]) / stats.std[j];
  return out;
}

Dataset standardize_invert(const Dataset& data, const StandardizationStats& stats) {
  check_width(data, stats);
  Dataset out = data;
  const std::size_t d = data.features();
  for (std::size_t i = 0; i < data.rows(); ++i)
    for (std::size_t j = 0; j < d; ++j) out.x.at(i, j) = data.x.at(i, j) * stats.std[j] + stats.mean[j];
  return out;
}

}  // namespace pdtab::data
