#include "pdtab/dataio/split.hpp"

#include <algorithm>
#include <cmath>

#include "pdtab/errors.hpp"
#include "pdtab/random.hpp"

namespace pdtab::data {

std::pair<std::size_t, std::size_t> stratified_test_counts(std::size_t negatives, std::size_t positives,
                                                           double test_fraction) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw StratificationError("test fraction must lie in (0, 1)");
  }
  const std::size_t total = static_cast<std::size_t>(
      std::llround(static_cast<double>(negatives + positives) * test_fraction));
  const double exact[2] = {static_cast<double>(negatives) * test_fraction,
                           static_cast<double>(positives) * test_fraction};
  std::size_t quota[2] = {static_cast<std::size_t>(std::floor(exact[0])),
                          static_cast<std::size_t>(std::floor(exact[1]))};
  // Largest remainder; equal remainders go to class 0 first.
  std::size_t assigned = quota[0] + quota[1];
  while (assigned < total) {
    const double r0 = exact[0] - static_cast<double>(quota[0]);
    const double r1 = exact[1] - static_cast<double>(quota[1]);
    const int pick = r1 > r0 ? 1 : 0;
    ++quota[pick];
    ++assigned;
  }
  while (assigned > total) {
    const int pick = quota[1] > quota[0] ? 1 : 0;
    --quota[pick];
    --assigned;
  }
  return {quota[0], quota[1]};
}

Split stratified_split(const Dataset& data, const SplitSpec& spec) {
  data.validate();
  std::vector<std::size_t> by_class[2];
  for (std::size_t i = 0; i < data.rows(); ++i) by_class[data.y[i]].push_back(i);

  std::vector<std::size_t> test_pos;
  Rng rng(spec.seed);
  if (spec.stratified) {
    if (by_class[0].empty() || by_class[1].empty()) {
      throw StratificationError("stratified split needs both classes, found only class " +
                                std::string(by_class[0].empty() ? "1" : "0"));
    }
    const auto [q0, q1] = stratified_test_counts(by_class[0].size(), by_class[1].size(), spec.test_fraction);
    const std::size_t quota[2] = {q0, q1};
    for (int c = 0; c < 2; ++c) {
      if (quota[c] == 0 || quota[c] >= by_class[c].size()) {
        throw StratificationError("test fraction " + std::to_string(spec.test_fraction) + " gives class " +
                                  std::to_string(c) + " " + std::to_string(quota[c]) + " of " +
                                  std::to_string(by_class[c].size()) + " rows for testing");
      }
      rng.shuffle(by_class[c]);
      test_pos.insert(test_pos.end(), by_class[c].begin(), by_class[c].begin() + static_cast<std::ptrdiff_t>(quota[c]));
    }
  } else {
    if (!(spec.test_fraction > 0.0 && spec.test_fraction < 1.0)) {
      throw StratificationError("test fraction must lie in (0, 1)");
    }
    std::vector<std::size_t> all(data.rows());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    const auto k = static_cast<std::size_t>(std::llround(static_cast<double>(all.size()) * spec.test_fraction));
    if (k == 0 || k >= all.size()) throw StratificationError("test fraction leaves one side empty");
    rng.shuffle(all);
    test_pos.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k));
  }

  std::sort(test_pos.begin(), test_pos.end());
  std::vector<std::size_t> train_pos;
  std::size_t t = 0;
  for (std::size_t i = 0; i < data.rows(); ++i) {
    if (t < test_pos.size() && test_pos[t] == i) {
      ++t;
    } else {
      train_pos.push_back(i);
    }
  }
  return Split{data.subset(train_pos), data.subset(test_pos)};
}

}  // namespace pdtab::data
