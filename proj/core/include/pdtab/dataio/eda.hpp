#pragma once

#include <array>
#include <string>
#include <vector>

#include "pdtab/autodiff/tensor.hpp"
#include "pdtab/dataio/dataset.hpp"

namespace pdtab::data {

inline constexpr std::size_t kHistogramBins = 20;

// Pearson correlations between all feature pairs, [d x d]. A constant column
// correlates 0 with every other column and 1 with itself.
ad::Tensor pearson_correlation_matrix(const Dataset& data);

struct FeatureClassSummary {
  std::string feature;
  int label = 0;
  std::size_t count = 0;
  double min = 0.0;
  double max = 0.0;
  double mean = 0.0;
  double std = 0.0;  // population
  // Uniform bins over the feature's range across all rows, so the two
  // classes' histograms line up.
  std::array<std::size_t, kHistogramBins> bins{};
};

// One entry per (feature, class present in the data), features in column
// order, class 0 before class 1.
std::vector<FeatureClassSummary> feature_summary(const Dataset& data);

// `feature` header then the feature names; one row per feature; 6 decimals.
std::string correlation_csv(const ad::Tensor& corr, const std::vector<std::string>& names);
// feature,class,min,max,mean,std,bin_00..bin_19
std::string summary_csv(const std::vector<FeatureClassSummary>& summary);

}  // namespace pdtab::data
