#pragma once

#include <cstdint>
#include <utility>

#include "pdtab/dataio/dataset.hpp"

namespace pdtab::data {

struct SplitSpec {
  double test_fraction = 0.2;
  std::uint64_t seed = 42;
  bool stratified = true;
};

struct Split {
  Dataset train;
  Dataset test;
};

// Per-class test quotas: floor(count * fraction) plus largest-remainder
// top-up so the total equals round(n * fraction). Index = class label.
std::pair<std::size_t, std::size_t> stratified_test_counts(std::size_t negatives, std::size_t positives,
                                                           double test_fraction);

// Seeded holdout split. Each class's positions are shuffled with Rng(seed)
// (class 0 first, then class 1, from one stream) and the first quota rows go
// to the test side. Both sides keep source-file order.
// Throws StratificationError when a class is missing or would get no test or
// no training row.
Split stratified_split(const Dataset& data, const SplitSpec& spec);

}  // namespace pdtab::data
