#include "pdtab/dataio/dataset.hpp"

#include <algorithm>

#include "pdtab/errors.hpp"

namespace pdtab::data {

RecordSchema RecordSchema::uci_parkinsons() {
  return RecordSchema{
      "name",
      {"MDVP:Fo(Hz)", "MDVP:Fhi(Hz)", "MDVP:Flo(Hz)", "MDVP:Jitter(%)", "MDVP:Jitter(Abs)", "MDVP:RAP",
       "MDVP:PPQ", "Jitter:DDP", "MDVP:Shimmer", "MDVP:Shimmer(dB)", "Shimmer:APQ3", "Shimmer:APQ5",
       "MDVP:APQ", "Shimmer:DDA", "NHR", "HNR", "RPDE", "DFA", "spread1", "spread2", "D2", "PPE"},
      "status"};
}

Dataset Dataset::subset(std::span<const std::size_t> positions) const {
  const std::size_t d = features();
  Dataset out;
  out.feature_names = feature_names;
  out.x = ad::Tensor(ad::Shape{positions.size(), d});
  out.y.reserve(positions.size());
  out.row_ids.reserve(positions.size());
  for (std::size_t r = 0; r < positions.size(); ++r) {
    const std::size_t src = positions[r];
    if (src >= rows()) throw DimensionError("subset: row " + std::to_string(src) + " out of range");
    std::copy_n(x.data().begin() + static_cast<std::ptrdiff_t>(src * d), d,
                out.x.data().begin() + static_cast<std::ptrdiff_t>(r * d));
    out.y.push_back(y[src]);
    out.row_ids.push_back(row_ids[src]);
    if (!row_names.empty()) out.row_names.push_back(row_names[src]);
  }
  return out;
}

ad::Tensor Dataset::labels_tensor() const {
  std::vector<double> v(y.begin(), y.end());
  return ad::Tensor::vector(std::move(v));
}

std::size_t Dataset::count_label(int label) const {
  return static_cast<std::size_t>(std::count(y.begin(), y.end(), label));
}

void Dataset::validate() const {
  const std::size_t n = y.size();
  if (x.shape() != ad::Shape{n, feature_names.size()}) {
    throw DataError("dataset matrix " + ad::shape_string(x.shape()) + " does not match " + std::to_string(n) +
                    " labels and " + std::to_string(feature_names.size()) + " features");
  }
  if (row_ids.size() != n) throw DataError("dataset row ids do not match row count");
  if (!row_names.empty() && row_names.size() != n) throw DataError("dataset row names do not match row count");
  for (const int label : y)
    if (label != 0 && label != 1) throw DataError("label " + std::to_string(label) + " is not binary");
}

Dataset make_dataset(std::vector<std::string> feature_names, ad::Tensor x, std::vector<int> y) {
  Dataset d;
  d.feature_names = std::move(feature_names);
  d.x = std::move(x);
  d.y = std::move(y);
  d.row_ids.resize(d.y.size());
  for (std::size_t i = 0; i < d.row_ids.size(); ++i) d.row_ids[i] = i;
  d.validate();
  return d;
}

}  // namespace pdtab::data
