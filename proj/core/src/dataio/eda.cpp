#include "pdtab/dataio/eda.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "pdtab/errors.hpp"

namespace pdtab::data {

ad::Tensor pearson_correlation_matrix(const Dataset& data) {
  const std::size_t n = data.rows(), d = data.features();
  if (n < 2) throw DataError("correlation needs at least 2 rows");
  std::vector<double> mean(d, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j) mean[j] += data.x.at(i, j);
  for (auto& m : mean) m /= static_cast<double>(n);

  ad::Tensor cov(ad::Shape{d, d});
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t a = 0; a < d; ++a) {
      const double da = data.x.at(i, a) - mean[a];
      for (std::size_t b = a; b < d; ++b) cov.at(a, b) += da * (data.x.at(i, b) - mean[b]);
    }

  ad::Tensor corr(ad::Shape{d, d});
  for (std::size_t a = 0; a < d; ++a) {
    corr.at(a, a) = 1.0;
    for (std::size_t b = a + 1; b < d; ++b) {
      const double denom = std::sqrt(cov.at(a, a) * cov.at(b, b));
      const double r = denom > 0.0 ? std::clamp(cov.at(a, b) / denom, -1.0, 1.0) : 0.0;
      corr.at(a, b) = r;
      corr.at(b, a) = r;
    }
  }
  return corr;
}

std::vector<FeatureClassSummary> feature_summary(const Dataset& data) {
  const std::size_t n = data.rows(), d = data.features();
  if (n < 1) throw DataError("feature summary needs at least one row");
  std::vector<FeatureClassSummary> out;
  for (std::size_t j = 0; j < d; ++j) {
    double lo = data.x.at(0, j), hi = lo;
    for (std::size_t i = 1; i < n; ++i) {
      lo = std::min(lo, data.x.at(i, j));
      hi = std::max(hi, data.x.at(i, j));
    }
    const double width = hi - lo;
    for (int label = 0; label < 2; ++label) {
      FeatureClassSummary s;
      s.feature = data.feature_names[j];
      s.label = label;
      s.min = std::numeric_limits<double>::infinity();
      s.max = -std::numeric_limits<double>::infinity();
      double total = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (data.y[i] != label) continue;
        const double v = data.x.at(i, j);
        ++s.count;
        total += v;
        s.min = std::min(s.min, v);
        s.max = std::max(s.max, v);
        std::size_t bin = 0;
        if (width > 0.0) {
          bin = static_cast<std::size_t>(std::floor((v - lo) / width * static_cast<double>(kHistogramBins)));
          bin = std::min(bin, kHistogramBins - 1);
        }
        ++s.bins[bin];
      }
      if (s.count == 0) continue;
      s.mean = total / static_cast<double>(s.count);
      double ss = 0.0;
      for (std::size_t i = 0; i < n; ++i)
        if (data.y[i] == label) ss += (data.x.at(i, j) - s.mean) * (data.x.at(i, j) - s.mean);
      s.std = std::sqrt(ss / static_cast<double>(s.count));
      out.push_back(std::move(s));
    }
  }
  return out;
}

namespace {

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  std::string s(buf);
  if (s == "-0.000000") s = "0.000000";
  return s;
}

}  // namespace

std::string correlation_csv(const ad::Tensor& corr, const std::vector<std::string>& names) {
  const std::size_t d = names.size();
  if (corr.shape() != ad::Shape{d, d}) throw DimensionError("correlation matrix does not match feature names");
  std::string out = "feature";
  for (const auto& name : names) out += "," + name;
  out += "\n";
  for (std::size_t a = 0; a < d; ++a) {
    out += names[a];
    for (std::size_t b = 0; b < d; ++b) out += "," + fixed6(corr.at(a, b));
    out += "\n";
  }
  return out;
}

std::string summary_csv(const std::vector<FeatureClassSummary>& summary) {
  std::string out = "feature,class,min,max,mean,std";
  for (std::size_t b = 0; b < kHistogramBins; ++b) {
    char buf[16];
    std::snprintf(buf, sizeof buf, ",bin_%02zu", b);
    out += buf;
  }
  out += "\n";
  for (const auto& s : summary) {
    out += s.feature + "," + std::to_string(s.label) + "," + fixed6(s.min) + "," + fixed6(s.max) + "," +
           fixed6(s.mean) + "," + fixed6(s.std);
    for (const auto c : s.bins) out += "," + std::to_string(c);
    out += "\n";
  }
  return out;
}

}  // namespace pdtab::data
