#pragma once

#include <vector>

#include "pdtab/dataio/dataset.hpp"

namespace pdtab::data {

inline constexpr double kStdFloor = 1e-12;

struct StandardizationStats {
  std::vector<double> mean;
  std::vector<double> std;  // population std, floored at kStdFloor
};

// Column moments of the (training) rows. Needs at least two rows.
StandardizationStats standardize_fit(const Dataset& train);

// (x - mean) / std per column; labels and ids are copied through.
Dataset standardize_apply(const Dataset& data, const StandardizationStats& stats);

// x * std + mean, the inverse of standardize_apply.
Dataset standardize_invert(const Dataset& data, const StandardizationStats& stats);

}  // namespace pdtab::data
