#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "pdtab/autodiff/tensor.hpp"

namespace pdtab::data {

// Column layout of an input table. Header names are matched after trimming,
// in any order.
struct RecordSchema {
  std::string name_column;  // identifier column, dropped from the features (empty: none)
  std::vector<std::string> feature_columns;
  std::string label_column;

  // The 22 voice-measure columns of the UCI Parkinson's table plus `name` and `status`.
  static RecordSchema uci_parkinsons();
};

inline constexpr std::size_t kUciFeatureCount = 22;

// Feature matrix with binary labels. `row_ids` are 0-based positions of the
// rows in the source file; `row_names` carries the identifier column.
struct Dataset {
  std::vector<std::string> feature_names;
  ad::Tensor x;  // [n x d]
  std::vector<int> y;
  std::vector<std::size_t> row_ids;
  std::vector<std::string> row_names;

  std::size_t rows() const { return y.size(); }
  std::size_t features() const { return feature_names.size(); }

  // Rows picked by position, in the order given.
  Dataset subset(std::span<const std::size_t> positions) const;

  ad::Tensor labels_tensor() const;
  std::size_t count_label(int label) const;

  // Throws DataError when shapes disagree or a label is not 0/1.
  void validate() const;
};

Dataset make_dataset(std::vector<std::string> feature_names, ad::Tensor x, std::vector<int> y);

}  // namespace pdtab::data
